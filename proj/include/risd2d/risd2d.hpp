#pragma once

#include "risd2d/core.hpp"
#include "risd2d/params.hpp"
#include "risd2d/rng.hpp"
#include "risd2d/geometry.hpp"
#include "risd2d/quadrature.hpp"
#include "risd2d/stats.hpp"
#include "risd2d/channel.hpp"
#include "risd2d/outage.hpp"
#include "risd2d/sinr_approx.hpp"
#include "risd2d/optimizer.hpp"
#include "risd2d/montecarlo.hpp"
