// Independent reference computations used by the tests. Everything here is
// deliberately brute force (grids, direct formulas, eigensolvers) and stays
// off the library's own code paths wherever it checks one.
#ifndef CPCA_TESTS_ORACLES_HPP
#define CPCA_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "cpca/geometry.hpp"

namespace oracle {

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline Eigen::VectorXd random_unit(std::mt19937_64& gen, int dim) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd v(dim);
  do {
    for (int i = 0; i < dim; ++i) v[i] = gauss(gen);
  } while (v.norm() < 1e-8);
  return v / v.norm();
}

// min_a ||x - xbar - a p||^2 over a uniform grid of [lo, hi].
inline double grid_min_sq_dist(const Eigen::VectorXd& x, const Eigen::VectorXd& xbar,
                               const Eigen::VectorXd& p, double lo, double hi, int n_grid) {
  double best = std::numeric_limits<double>::infinity();
  for (int g = 0; g < n_grid; ++g) {
    const double a = lo + (hi - lo) * static_cast<double>(g) / (n_grid - 1);
    best = std::min(best, (x - xbar - a * p).squaredNorm());
  }
  return best;
}

// Eigen-decomposition of the (1/N) covariance about xbar; eigenvalues come
// back in descending order with matching eigenvector columns.
struct EigenPca {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
};

inline EigenPca euclidean_pca(const Eigen::MatrixXd& data, const Eigen::VectorXd& xbar) {
  const Eigen::MatrixXd centered = data.rowwise() - xbar.transpose();
  const Eigen::MatrixXd cov =
      centered.transpose() * centered / static_cast<double>(data.rows());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  const int d = static_cast<int>(cov.rows());
  EigenPca out;
  out.eigenvalues.resize(d);
  out.eigenvectors.resize(d, d);
  for (int j = 0; j < d; ++j) {
    out.eigenvalues[j] = solver.eigenvalues()[d - 1 - j];
    out.eigenvectors.col(j) = solver.eigenvectors().col(d - 1 - j);
  }
  return out;
}

// Aitchison inner product evaluated by the (1/2n) double sum.
inline double aitchison_inner_direct(const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
  const int n = static_cast<int>(p.size());
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      acc += std::log(p[i] / p[j]) * std::log(q[i] / q[j]);
    }
  }
  return acc / (2.0 * n);
}

// Random strictly positive composition.
inline Eigen::VectorXd random_composition(std::mt19937_64& gen, int n) {
  std::uniform_real_distribution<double> unif(0.05, 1.0);
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x[i] = unif(gen);
  return x / x.sum();
}

// Random non-decreasing map values within [a, b].
inline Eigen::VectorXd random_monotone_values(std::mt19937_64& gen, int cells, double a,
                                              double b) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Eigen::VectorXd raw(cells);
  for (int i = 0; i < cells; ++i) raw[i] = unif(gen);
  std::sort(raw.data(), raw.data() + cells);
  return (a + (b - a) * raw.array()).matrix();
}

}  // namespace oracle

#endif  // CPCA_TESTS_ORACLES_HPP
