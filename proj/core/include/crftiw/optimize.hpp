#pragma once

#include <functional>

#include "crftiw/types.hpp"

namespace crftiw::optimize {

struct NelderMeadResult {
  Vec x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct NelderMeadOptions {
  double initial_step = 0.35;
  int max_iterations = 400;
  double f_tol = 1e-10;
  double x_tol = 1e-9;
};

/// Downhill simplex minimization. The objective may return +inf for
/// infeasible points; such vertices are simply dominated.
NelderMeadResult nelder_mead(const std::function<double(const Vec&)>& f, const Vec& start,
                             const NelderMeadOptions& opts = {});

}  // namespace crftiw::optimize
