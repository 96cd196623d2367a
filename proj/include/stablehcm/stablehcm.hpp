#pragma once

#include "stablehcm/errors.hpp"
#include "stablehcm/galpha.hpp"
#include "stablehcm/hcm.hpp"
#include "stablehcm/numerics.hpp"
#include "stablehcm/stable_density.hpp"
#include "stablehcm/thorin.hpp"
#include "stablehcm/verify.hpp"
