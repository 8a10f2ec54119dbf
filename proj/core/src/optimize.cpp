#include "crftiw/optimize.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace crftiw::optimize {

NelderMeadResult nelder_mead(const std::function<double(const Vec&)>& f, const Vec& start,
                             const NelderMeadOptions& opts) {
  const Index n = start.size();
  const int m = static_cast<int>(n) + 1;

  std::vector<Vec> x(m, start);
  std::vector<double> fx(m);
  for (Index i = 0; i < n; ++i) x[static_cast<std::size_t>(i) + 1][i] += opts.initial_step;
  for (int i = 0; i < m; ++i) fx[i] = f(x[i]);

  std::vector<int> order(m);
  NelderMeadResult res;

  int iter = 0;
  for (; iter < opts.max_iterations; ++iter) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return fx[a] < fx[b]; });
    const int best = order[0];
    const int worst = order[m - 1];
    const int second_worst = order[m - 2];

    const double f_spread = fx[worst] - fx[best];
    double x_spread = 0.0;
    for (int i = 0; i < m; ++i) x_spread = std::max(x_spread, (x[i] - x[best]).norm());
    if (f_spread < opts.f_tol && x_spread < opts.x_tol) {
      res.converged = true;
      break;
    }

    Vec centroid = Vec::Zero(n);
    for (int i = 0; i < m; ++i) {
      if (i != worst) centroid += x[i];
    }
    centroid /= static_cast<double>(m - 1);

    const Vec reflected = centroid + (centroid - x[worst]);
    const double fr = f(reflected);

    if (fr < fx[best]) {
      const Vec expanded = centroid + 2.0 * (centroid - x[worst]);
      const double fe = f(expanded);
      if (fe < fr) {
        x[worst] = expanded;
        fx[worst] = fe;
      } else {
        x[worst] = reflected;
        fx[worst] = fr;
      }
    } else if (fr < fx[second_worst]) {
      x[worst] = reflected;
      fx[worst] = fr;
    } else {
      const Vec contracted = centroid + 0.5 * (x[worst] - centroid);
      const double fc = f(contracted);
      if (fc < fx[worst]) {
        x[worst] = contracted;
        fx[worst] = fc;
      } else {
        // shrink toward the best vertex
        for (int i = 0; i < m; ++i) {
          if (i == best) continue;
          x[i] = x[best] + 0.5 * (x[i] - x[best]);
          fx[i] = f(x[i]);
        }
      }
    }
  }

  const int best =
      static_cast<int>(std::min_element(fx.begin(), fx.end()) - fx.begin());
  res.x = x[best];
  res.value = fx[best];
  res.iterations = iter;
  return res;
}

}  // namespace crftiw::optimize
