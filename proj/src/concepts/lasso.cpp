//
// Project glassmol - Copyright 2026 The GlassMol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "glassmol/concepts/lasso.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "glassmol/util/csv.hpp"

namespace glassmol::concepts {

namespace {

double softplus(double z) {
  return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double logistic(double z) {
  if (z >= 0)
    return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double soft_threshold(double z, double t) {
  if (z > t)
    return z - t;
  if (z < -t)
    return z + t;
  return 0.0;
}

struct Problem {
  const std::vector<std::vector<double>> &x;
  const std::vector<int> &y;
  std::size_t n, p;
  std::vector<double> curvature; // (1/4n) sum_i x_ij^2

  double objective(const std::vector<double> &eta,
                   const std::vector<double> &beta, double lambda) const {
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      loss += softplus(eta[i]) - y[i] * eta[i];
    double l1 = 0.0;
    for (double b : beta)
      l1 += std::abs(b);
    return loss / static_cast<double>(n) + lambda * l1;
  }

  // Column j of x, or the all-ones intercept column when j == npos.
  double at(std::size_t i, std::size_t j) const {
    return j == std::string::npos ? 1.0 : x[i][j];
  }

  // Change of the data term when eta moves by delta along column j.
  double loss_change(const std::vector<double> &eta, std::size_t j,
                     double delta) const {
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double step = delta * at(i, j);
      d += softplus(eta[i] + step) - softplus(eta[i]) - y[i] * step;
    }
    return d / static_cast<double>(n);
  }

  // One coordinate update of `value` (penalized by lambda; 0 for the
  // intercept) given gradient g and curvature h. The proximal Newton step
  // is kept when it lowers the objective, otherwise the step under the
  // global curvature bound, which never raises it.
  double step(std::vector<double> &eta, std::size_t j, double &value,
              double g, double h, double bound, double lambda) const {
    const double b = value;
    auto target = [&](double curv) {
      return soft_threshold(b - g / curv, lambda / curv);
    };
    double next = target(bound);
    if (h > 1e-12) {
      const double newton = target(h);
      if (newton != b && loss_change(eta, j, newton - b) +
                                 lambda * (std::abs(newton) - std::abs(b)) <
                             0.0)
        next = newton;
    }
    const double delta = next - b;
    if (delta != 0.0) {
      for (std::size_t i = 0; i < n; ++i)
        eta[i] += delta * at(i, j);
      value = next;
    }
    return delta;
  }
};

} // namespace

std::vector<LassoPathPoint>
fit_lasso_path(const std::vector<std::vector<double>> &x,
               const std::vector<int> &y, const LassoOptions &options) {
  const std::size_t n = x.size();
  if (n == 0 || y.size() != n)
    throw_shape_mismatch("lasso rows", std::to_string(n),
                         std::to_string(y.size()));
  const std::size_t p = x[0].size();
  const long positives = std::count(y.begin(), y.end(), 1);
  if (positives == 0 || positives == static_cast<long>(n))
    throw Error(ErrorCategory::kData, "DegenerateLabels",
                "lasso needs both classes in the training labels");

  Problem pr{x, y, n, p, std::vector<double>(p, 0.0)};
  const double dn = static_cast<double>(n);
  for (const auto &row : x) {
    if (row.size() != p)
      throw_shape_mismatch("lasso columns", std::to_string(p),
                           std::to_string(row.size()));
    for (std::size_t j = 0; j < p; ++j)
      pr.curvature[j] += row[j] * row[j] / (4.0 * dn);
  }

  // At lambda_max every coefficient is zero and the intercept is logit(ybar).
  const double ybar = static_cast<double>(positives) / dn;
  double intercept = std::log(ybar / (1.0 - ybar));
  double lambda_max = 0.0;
  for (std::size_t j = 0; j < p; ++j) {
    double g = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      g += x[i][j] * (y[i] - ybar);
    lambda_max = std::max(lambda_max, std::abs(g) / dn);
  }

  std::vector<LassoPathPoint> path;
  if (lambda_max <= 0.0)
    return path; // no column carries signal

  std::vector<double> beta(p, 0.0), eta(n, intercept), resid(n);
  const int len = std::max(options.path_length, 1);
  for (int t = 0; t < len; ++t) {
    const double frac = len == 1 ? 0.0 : static_cast<double>(t) / (len - 1);
    const double lambda = lambda_max * std::pow(options.min_ratio, frac);
    LassoPathPoint pt;
    pt.lambda = lambda;
    for (int sweep = 0; sweep < options.max_sweeps; ++sweep) {
      double max_delta = 0.0;
      // Intercept (column of ones, unpenalized, curvature bound 1/4).
      {
        double g = 0.0, h = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          const double q = logistic(eta[i]);
          g += q - y[i];
          h += q * (1.0 - q);
        }
        const double delta =
            pr.step(eta, std::string::npos, intercept, g / dn, h / dn, 0.25, 0.0);
        max_delta = std::max(max_delta, std::abs(delta));
      }
      for (std::size_t j = 0; j < p; ++j) {
        const double lj = pr.curvature[j];
        if (lj <= 0.0)
          continue;
        double g = 0.0, h = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          const double q = logistic(eta[i]);
          g += x[i][j] * (q - y[i]);
          h += x[i][j] * x[i][j] * q * (1.0 - q);
        }
        const double delta =
            pr.step(eta, j, beta[j], g / dn, h / dn, lj, lambda);
        max_delta = std::max(max_delta, std::abs(delta));
      }
      pt.objective.push_back(pr.objective(eta, beta, lambda));
      pt.sweeps = sweep + 1;
      if (max_delta < options.tolerance) {
        pt.converged = true;
        break;
      }
    }
    pt.intercept = intercept;
    pt.coef = beta;
    pt.nonzero = static_cast<int>(
        std::count_if(beta.begin(), beta.end(), [](double b) { return b != 0.0; }));
    path.push_back(std::move(pt));
  }
  return path;
}

LassoSelection select_lasso(std::string_view task_id,
                            const std::vector<std::vector<double>> &x,
                            const std::vector<int> &y,
                            const std::vector<std::string> &names, int k,
                            const LassoOptions &options) {
  const int p = static_cast<int>(names.size());
  if (k < 1 || k > p)
    throw Error(ErrorCategory::kUsage, "InvalidK",
                "k=" + std::to_string(k) + " outside 1.." + std::to_string(p));
  LassoSelection out;
  out.path = fit_lasso_path(x, y, options);
  ConceptSelection &s = out.selection;
  s.task_id = std::string(task_id);
  s.method = SelectionMethod::kLasso;
  s.k = k;
  s.provenance["path_length"] = std::to_string(options.path_length);
  s.provenance["min_ratio"] = util::format_double(options.min_ratio);

  if (out.path.empty()) {
    s.names.assign(names.begin(), names.begin() + k);
    s.provenance["warning"] = "degenerate: all features constant";
    return out;
  }
  if (k == p) {
    s.names = names;
    out.chosen_point = static_cast<int>(out.path.size()) - 1;
  } else {
    int chosen = static_cast<int>(out.path.size()) - 1;
    for (std::size_t t = 0; t < out.path.size(); ++t)
      if (out.path[t].nonzero >= k) {
        chosen = static_cast<int>(t);
        break;
      }
    out.chosen_point = chosen;
    const auto &coef = out.path[chosen].coef;
    std::vector<int> order(p);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return std::abs(coef[a]) > std::abs(coef[b]);
    });
    for (int i = 0; i < k; ++i)
      s.names.push_back(names[order[i]]);
  }
  const LassoPathPoint &pt = out.path[out.chosen_point];
  s.provenance["lambda"] = util::format_double(pt.lambda);
  s.provenance["nonzero"] = std::to_string(pt.nonzero);
  s.provenance["path_point"] = std::to_string(out.chosen_point);
  return out;
}

} // namespace glassmol::concepts
