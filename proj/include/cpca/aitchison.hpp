#ifndef CPCA_AITCHISON_HPP
#define CPCA_AITCHISON_HPP

#include <vector>

#include "cpca/solver.hpp"

namespace cpca {

/// Strictly positive point of the open unit simplex.
class Composition {
public:
  /// Requires strictly positive entries summing to 1 within 1e-12.
  explicit Composition(Eigen::VectorXd p);

  const Eigen::VectorXd& vector() const { return p_; }
  int size() const { return static_cast<int>(p_.size()); }
  double operator[](int i) const { return p_[i]; }

private:
  Eigen::VectorXd p_;
};

/// C[x]: entrywise division by the sum. Entries must be strictly positive.
Composition closure(const Eigen::VectorXd& x);

/// Perturbation p (+) q: closure of the entrywise product.
Composition perturb(const Composition& p, const Composition& q);

/// Powering alpha (.) p: closure of the entrywise power.
Composition power(double alpha, const Composition& p);

/// Aitchison inner product (1/2n) sum_{i,j} log(p_i/p_j) log(q_i/q_j),
/// evaluated as the dot product of centered log vectors.
double aitchison_inner(const Composition& p, const Composition& q);

/// Isometric log-ratio transform: Delta_n -> R^(n-1),
///   ilr(p)_i = sqrt(i/(i+1)) log( (p_1...p_i)^(1/i) / p_{i+1} ).
Eigen::VectorXd ilr(const Composition& p);

/// Inverse of ilr.
Composition ilr_inverse(const Eigen::VectorXd& y);

/// ilr image of the ordered simplex {p : p_1 >= ... >= p_n}: the polyhedral
/// cone {y : Ay >= 0} with the bidiagonal matrix
///   a_jj = sqrt((j+1)/j), a_{j+1,j} = -sqrt(j/(j+1)).
PolyhedralSet ordered_cone_matrix(int n);

/// Market weights: closure of the capitalizations.
Composition market_weights(const Eigen::VectorXd& caps);

/// Weights sorted in descending order (stable on ties).
Composition rank_descending(const Composition& w);

/// Market diversity D_lambda(p) = (sum p_i^lambda)^(1/lambda), lambda in (0,1).
double diversity(const Composition& p, double lambda);

struct AitchisonCpcaResult {
  PrincipalBasis basis;          // directions in ilr coordinates
  Eigen::MatrixXd coordinates;   // N x k projected coordinates per row
  Eigen::VectorXd reference_ilr; // ilr of the Aitchison barycenter
  std::vector<ComponentDiagnostics> diagnostics;
  bool all_converged = true;
  bool reference_on_boundary = false;
};

/// Nested CPCA of ranked compositional data: map the panel through ilr,
/// constrain to the ordered-simplex cone, and reference everything at the
/// Aitchison barycenter (the mean in ilr coordinates).
AitchisonCpcaResult fit_aitchison_cpca(const std::vector<Composition>& panel,
                                       const FitConfig& config);

}  // namespace cpca

#endif  // CPCA_AITCHISON_HPP
