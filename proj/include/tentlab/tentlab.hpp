#ifndef TENTLAB_TENTLAB_HPP
#define TENTLAB_TENTLAB_HPP

#include "tentlab/atomic.hpp"
#include "tentlab/conditions.hpp"
#include "tentlab/cone_cover.hpp"
#include "tentlab/dyadic.hpp"
#include "tentlab/functionals.hpp"
#include "tentlab/io.hpp"
#include "tentlab/log.hpp"
#include "tentlab/presets.hpp"
#include "tentlab/random.hpp"
#include "tentlab/region.hpp"
#include "tentlab/report.hpp"
#include "tentlab/space.hpp"
#include "tentlab/suite.hpp"

#endif  // TENTLAB_TENTLAB_HPP
