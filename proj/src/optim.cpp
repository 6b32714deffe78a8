#include "polpair/optim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace polpair {

NelderMeadResult nelder_mead(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& x0, const NelderMeadOptions& options) {
  const int n = static_cast<int>(x0.size());
  const double alpha = 1.0, gamma = 2.0, beta = 0.5, sigma = 0.5;

  std::vector<Eigen::VectorXd> pts(n + 1, x0);
  std::vector<double> vals(n + 1);
  for (int i = 1; i <= n; ++i) {
    const double base = std::abs(x0(i - 1));
    pts[i](i - 1) += options.initial_step * std::max(1.0, base);
  }
  for (int i = 0; i <= n; ++i) vals[i] = f(pts[i]);

  std::vector<int> order(n + 1);
  NelderMeadResult result;
  for (result.iterations = 0; result.iterations < options.max_iterations;
       ++result.iterations) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return vals[a] < vals[b]; });
    const int best = order[0], worst = order[n], second = order[n - 1];
    if (vals[worst] - vals[best] < options.tolerance) {
      result.converged = true;
      break;
    }

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (int i = 0; i <= n; ++i)
      if (i != worst) centroid += pts[i];
    centroid /= n;

    const Eigen::VectorXd reflected = centroid + alpha * (centroid - pts[worst]);
    const double fr = f(reflected);
    if (fr < vals[best]) {
      const Eigen::VectorXd expanded = centroid + gamma * (reflected - centroid);
      const double fe = f(expanded);
      if (fe < fr) {
        pts[worst] = expanded;
        vals[worst] = fe;
      } else {
        pts[worst] = reflected;
        vals[worst] = fr;
      }
    } else if (fr < vals[second]) {
      pts[worst] = reflected;
      vals[worst] = fr;
    } else {
      const Eigen::VectorXd contracted =
          centroid + beta * (pts[worst] - centroid);
      const double fc = f(contracted);
      if (fc < vals[worst]) {
        pts[worst] = contracted;
        vals[worst] = fc;
      } else {
        for (int i = 0; i <= n; ++i) {
          if (i == best) continue;
          pts[i] = pts[best] + sigma * (pts[i] - pts[best]);
          vals[i] = f(pts[i]);
        }
      }
    }
  }

  const auto it = std::min_element(vals.begin(), vals.end());
  result.x = pts[static_cast<int>(it - vals.begin())];
  result.value = *it;
  return result;
}

NelderMeadResult compass_search(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& x0, const CompassOptions& options) {
  NelderMeadResult result;
  result.x = x0;
  result.value = f(x0);
  double step = options.initial_step;
  const int n = static_cast<int>(x0.size());

  while (step > options.min_step &&
         result.iterations < options.max_iterations) {
    bool improved = false;
    for (int i = 0; i < n; ++i) {
      for (double sign : {1.0, -1.0}) {
        Eigen::VectorXd trial = result.x;
        trial(i) += sign * step;
        const double v = f(trial);
        ++result.iterations;
        if (v < result.value) {
          result.value = v;
          result.x = trial;
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  result.converged = step <= options.min_step;
  return result;
}

}  // namespace polpair
