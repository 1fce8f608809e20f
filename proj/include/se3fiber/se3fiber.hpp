// se3fiber - geodesics and fiber sections on SE(3)/SO(2)
// SPDX-License-Identifier: Apache-2.0

#ifndef SE3FIBER_SE3FIBER_HPP
#define SE3FIBER_SE3FIBER_HPP

#include "se3fiber/config.hpp"
#include "se3fiber/errors.hpp"
#include "se3fiber/geodesic.hpp"
#include "se3fiber/io.hpp"
#include "se3fiber/metric.hpp"
#include "se3fiber/random.hpp"
#include "se3fiber/se3.hpp"
#include "se3fiber/sections.hpp"
#include "se3fiber/shooting.hpp"
#include "se3fiber/verification.hpp"

#endif  // SE3FIBER_SE3FIBER_HPP
