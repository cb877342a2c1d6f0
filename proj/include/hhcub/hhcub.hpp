#pragma once

// Umbrella header.

#include "hhcub/adaptive.hpp"
#include "hhcub/bounds.hpp"
#include "hhcub/core.hpp"
#include "hhcub/cubature.hpp"
#include "hhcub/expr.hpp"
#include "hhcub/kernel.hpp"
#include "hhcub/quadrature.hpp"
#include "hhcub/verify.hpp"
