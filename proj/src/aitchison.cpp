#include "cpca/aitchison.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace cpca {

namespace {

Eigen::VectorXd centered_log(const Composition& p) {
  Eigen::VectorXd logs = p.vector().array().log();
  logs.array() -= logs.mean();
  return logs;
}

Composition closure_of_logs(const Eigen::VectorXd& logs) {
  Eigen::VectorXd shifted = logs.array() - logs.maxCoeff();
  Eigen::VectorXd vals = shifted.array().exp();
  return Composition(vals / vals.sum());
}

}  // namespace

Composition::Composition(Eigen::VectorXd p) : p_(std::move(p)) {
  if (p_.size() < 1) throw std::invalid_argument("Composition: empty vector");
  if (!(p_.minCoeff() > 0.0)) {
    throw std::invalid_argument("Composition: entries must be strictly positive");
  }
  if (std::abs(p_.sum() - 1.0) > 1e-12) {
    throw std::invalid_argument("Composition: entries must sum to 1 within 1e-12");
  }
}

Composition closure(const Eigen::VectorXd& x) {
  if (x.size() < 1) throw std::invalid_argument("closure: empty vector");
  if (!(x.minCoeff() > 0.0)) {
    throw std::invalid_argument("closure: entries must be strictly positive");
  }
  return Composition(x / x.sum());
}

Composition perturb(const Composition& p, const Composition& q) {
  if (p.size() != q.size()) throw std::invalid_argument("perturb: dimension mismatch");
  Eigen::VectorXd logs = p.vector().array().log() + q.vector().array().log();
  return closure_of_logs(logs);
}

Composition power(double alpha, const Composition& p) {
  Eigen::VectorXd logs = alpha * p.vector().array().log();
  return closure_of_logs(logs);
}

double aitchison_inner(const Composition& p, const Composition& q) {
  if (p.size() != q.size()) throw std::invalid_argument("aitchison_inner: dimension mismatch");
  return centered_log(p).dot(centered_log(q));
}

Eigen::VectorXd ilr(const Composition& p) {
  const int n = p.size();
  if (n < 2) throw std::invalid_argument("ilr: need n >= 2");
  Eigen::VectorXd logs = p.vector().array().log();
  Eigen::VectorXd out(n - 1);
  double prefix = 0.0;  // log p_1 + ... + log p_i
  for (int i = 1; i < n; ++i) {
    prefix += logs[i - 1];
    out[i - 1] = std::sqrt(static_cast<double>(i) / (i + 1.0)) * (prefix / i - logs[i]);
  }
  return out;
}

Composition ilr_inverse(const Eigen::VectorXd& y) {
  const int n = static_cast<int>(y.size()) + 1;
  if (n < 2) throw std::invalid_argument("ilr_inverse: empty coordinate vector");
  if (!y.allFinite()) throw std::invalid_argument("ilr_inverse: non-finite entry");
  Eigen::VectorXd logs(n);
  logs[0] = 0.0;
  double prefix = 0.0;
  for (int i = 1; i < n; ++i) {
    prefix += logs[i - 1];
    logs[i] = prefix / i - y[i - 1] * std::sqrt((i + 1.0) / static_cast<double>(i));
  }
  return closure_of_logs(logs);
}

PolyhedralSet ordered_cone_matrix(int n) {
  if (n < 2) throw std::invalid_argument("ordered_cone_matrix: need n >= 2");
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n - 1, n - 1);
  for (int j = 1; j <= n - 1; ++j) {
    a(j - 1, j - 1) = std::sqrt((j + 1.0) / j);
    if (j >= 2) a(j - 1, j - 2) = -std::sqrt((j - 1.0) / j);
  }
  return PolyhedralSet(std::move(a), Eigen::VectorXd::Zero(n - 1));
}

Composition market_weights(const Eigen::VectorXd& caps) {
  if (caps.size() < 1) throw std::invalid_argument("market_weights: empty capitalizations");
  if (!(caps.minCoeff() > 0.0)) {
    throw std::invalid_argument("market_weights: capitalizations must be positive");
  }
  return closure(caps);
}

Composition rank_descending(const Composition& w) {
  std::vector<int> order(static_cast<std::size_t>(w.size()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return w[i] > w[j]; });
  Eigen::VectorXd sorted(w.size());
  for (int r = 0; r < w.size(); ++r) sorted[r] = w[order[static_cast<std::size_t>(r)]];
  return Composition(std::move(sorted));
}

double diversity(const Composition& p, double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0)) {
    throw std::invalid_argument("diversity: lambda must lie in (0, 1)");
  }
  const double s = p.vector().array().pow(lambda).sum();
  return std::pow(s, 1.0 / lambda);
}

AitchisonCpcaResult fit_aitchison_cpca(const std::vector<Composition>& panel,
                                       const FitConfig& config) {
  if (panel.empty()) throw std::invalid_argument("fit_aitchison_cpca: empty panel");
  const int n = panel.front().size();
  if (n < 2) throw std::invalid_argument("fit_aitchison_cpca: compositions need n >= 2");
  Eigen::MatrixXd coords(panel.size(), n - 1);
  for (std::size_t i = 0; i < panel.size(); ++i) {
    const Composition& row = panel[i];
    if (row.size() != n) {
      throw std::invalid_argument("fit_aitchison_cpca: panel rows have mixed dimensions");
    }
    for (int j = 0; j + 1 < n; ++j) {
      if (row[j] < row[j + 1] * (1.0 - 1e-9)) {
        throw std::invalid_argument("fit_aitchison_cpca: panel row " + std::to_string(i) +
                                    " is not ranked in descending order");
      }
    }
    coords.row(static_cast<Eigen::Index>(i)) = ilr(row);
  }
  // Aitchison barycenter = closure of geometric means = mean in ilr coordinates.
  const Eigen::VectorXd reference = coords.colwise().mean();
  CpcaProblem problem(coords, reference, ordered_cone_matrix(n));
  NestedFitResult fit = fit_nested(problem, config);
  Eigen::MatrixXd projected =
      project_data_coefficients(problem, fit.basis.directions(), config.threads);
  return AitchisonCpcaResult{std::move(fit.basis),       std::move(projected),
                             reference,                  std::move(fit.diagnostics),
                             fit.all_converged,          problem.reference_on_boundary()};
}

}  // namespace cpca
