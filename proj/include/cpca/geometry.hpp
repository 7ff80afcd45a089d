#ifndef CPCA_GEOMETRY_HPP
#define CPCA_GEOMETRY_HPP

#include <Eigen/Dense>
#include <stdexcept>

namespace cpca {

// Feasibility tolerance for Ax >= b membership tests, used consistently
// everywhere a point is checked against a polyhedral domain.
inline constexpr double kFeasibilityTol = 1e-9;

/// Closed convex polyhedron X = {x in R^d : Ax >= b}.
///
/// Rows of A are the constraint normals. Zero rows are rejected at
/// construction: with b_i > 0 they make X empty, with b_i <= 0 they are
/// vacuous.
class PolyhedralSet {
public:
  PolyhedralSet(Eigen::MatrixXd a_matrix, Eigen::VectorXd b_vector);

  int dim() const { return static_cast<int>(a_.cols()); }
  int constraint_count() const { return static_cast<int>(a_.rows()); }

  const Eigen::MatrixXd& a_matrix() const { return a_; }
  const Eigen::VectorXd& b_vector() const { return b_; }

  /// Ax - b (one entry per constraint; nonnegative entries mean feasible).
  Eigen::VectorXd residual(const Eigen::VectorXd& x) const;

  bool contains(const Eigen::VectorXd& x, double tol = kFeasibilityTol) const;

  /// Axis-aligned box {x : lo <= x_i <= hi}, as 2d halfspaces.
  static PolyhedralSet box(int dim, double lo, double hi);

private:
  Eigen::MatrixXd a_;
  Eigen::VectorXd b_;
};

/// Unit vector in R^d (d >= 1). Norm is validated to 1e-12 at construction.
class Direction {
public:
  explicit Direction(Eigen::VectorXd p);

  /// Scale an arbitrary nonzero vector to unit norm.
  static Direction normalized(const Eigen::VectorXd& v);

  const Eigen::VectorXd& vector() const { return p_; }
  int dim() const { return static_cast<int>(p_.size()); }
  double operator[](int i) const { return p_[i]; }

private:
  Eigen::VectorXd p_;
};

/// Hyperspherical angles theta in R^q, q >= 1, parameterizing the unit
/// sphere of R^(q+1). Any finite real angles are accepted.
class SphericalAngles {
public:
  explicit SphericalAngles(Eigen::VectorXd theta);

  const Eigen::VectorXd& vector() const { return theta_; }
  int size() const { return static_cast<int>(theta_.size()); }
  double operator[](int i) const { return theta_[i]; }

private:
  Eigen::VectorXd theta_;
};

/// d x r matrix with orthonormal columns (r may be 0).
class OrthonormalBasis {
public:
  /// Validates B^T B = I within 1e-10 entrywise.
  explicit OrthonormalBasis(Eigen::MatrixXd columns);

  /// Basis with no columns in R^d.
  static OrthonormalBasis empty(int dim);

  const Eigen::MatrixXd& columns() const { return columns_; }
  int dim() const { return static_cast<int>(columns_.rows()); }
  int count() const { return static_cast<int>(columns_.cols()); }

private:
  Eigen::MatrixXd columns_;
};

/// Hyperspherical map onto the unit sphere of R^(q+1):
///   w_1 = cos(t_1), w_i = sin(t_1)...sin(t_{i-1}) cos(t_i),
///   w_{q+1} = sin(t_1)...sin(t_q).
Direction omega(const SphericalAngles& theta);

/// Inverse of omega for unit p with dim >= 2; omega(angles_of(p)) == p
/// within 1e-10 per coordinate.
SphericalAngles angles_of(const Direction& p);

/// Derivative d omega / d theta, a (q+1) x q matrix.
Eigen::MatrixXd omega_jacobian(const SphericalAngles& theta);

/// Orthonormal basis of the orthogonal complement of span(previous) in R^d,
/// with d - r columns. Deterministic: Gram-Schmidt over the complement
/// projector's columns taken in index order. previous.count() == 0 returns
/// the identity basis.
OrthonormalBasis orthonormal_complement(const OrthonormalBasis& previous);

}  // namespace cpca

#endif  // CPCA_GEOMETRY_HPP
