#ifndef TENTLAB_LOG_HPP
#define TENTLAB_LOG_HPP

#include <cstdlib>
#include <iostream>
#include <mutex>
#include <string>

namespace tentlab {

enum class LogLevel { quiet = 0, info = 1, debug = 2 };

/// Verbosity from TENTLAB_LOG: quiet|0, info|1, debug|2 (default quiet).
inline LogLevel log_level() {
  static const LogLevel level = [] {
    const char* env = std::getenv("TENTLAB_LOG");
    if (!env) return LogLevel::quiet;
    const std::string s(env);
    if (s == "debug" || s == "2") return LogLevel::debug;
    if (s == "info" || s == "1") return LogLevel::info;
    return LogLevel::quiet;
  }();
  return level;
}

inline void log(LogLevel level, const std::string& msg) {
  if (static_cast<int>(level) > static_cast<int>(log_level())) return;
  static std::mutex mu;
  std::lock_guard lock(mu);
  std::clog << "[tentlab] " << msg << '\n';
}

}  // namespace tentlab

#endif  // TENTLAB_LOG_HPP
