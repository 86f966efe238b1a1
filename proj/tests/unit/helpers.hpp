#pragma once

#include <cmath>

#include "subharmonic/integrator.hpp"

namespace test_support {

/// Tolerances for finite-difference oracles, well below the default 1e-10.
inline subharmonic::IntegratorConfig tight_config() {
  subharmonic::IntegratorConfig cfg;
  cfg.rel_tol = 1e-13;
  cfg.abs_tol = 1e-13;
  return cfg;
}

}  // namespace test_support
