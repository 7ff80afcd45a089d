#ifndef CPCA_SOLVER_HPP
#define CPCA_SOLVER_HPP

#include <cstdint>
#include <limits>
#include <vector>

#include "cpca/geometry.hpp"

namespace cpca {

/// Deterministic pairwise (cascade) summation over a contiguous range.
/// Used for every data-sized reduction so results do not depend on the
/// degree of parallelism.
double pairwise_sum(const double* data, std::ptrdiff_t n);
double pairwise_sum(const Eigen::VectorXd& v);
/// Pairwise sum of the rows of a matrix (returns a row-length vector).
Eigen::VectorXd pairwise_row_sum(const Eigen::MatrixXd& rows);

/// A nested convex PCA instance: N data points in a polyhedral domain X,
/// plus a feasible reference point.
class CpcaProblem {
public:
  /// Throws if dimensions disagree, N < 1, or any data row / the reference
  /// violates A x >= b beyond the feasibility tolerance.
  CpcaProblem(Eigen::MatrixXd data, Eigen::VectorXd reference, PolyhedralSet domain);

  int n_points() const { return static_cast<int>(data_.rows()); }
  int dim() const { return static_cast<int>(data_.cols()); }
  const Eigen::MatrixXd& data() const { return data_; }
  const Eigen::VectorXd& reference() const { return reference_; }
  const PolyhedralSet& domain() const { return domain_; }

  /// Data with the reference subtracted from every row (cached).
  const Eigen::MatrixXd& centered() const { return centered_; }
  /// ||x_i - xbar||^2 per row (cached).
  const Eigen::VectorXd& centered_sq_norms() const { return sq_norms_; }
  /// A xbar - b (cached).
  const Eigen::VectorXd& reference_residual() const { return ref_residual_; }

  /// True when the reference sits on the boundary of X (within tolerance).
  /// Allowed, but downstream segment bounds may then be [0, t1] or [t0, 0].
  bool reference_on_boundary() const { return reference_on_boundary_; }

  /// (1/N) sum ||x_i - xbar||^2.
  double total_variation() const { return total_variation_; }

private:
  Eigen::MatrixXd data_;
  Eigen::VectorXd reference_;
  PolyhedralSet domain_;
  Eigen::MatrixXd centered_;
  Eigen::VectorXd sq_norms_;
  Eigen::VectorXd ref_residual_;
  double total_variation_ = 0.0;
  bool reference_on_boundary_ = false;
};

/// Feasible coefficient interval of the line t -> xbar + t p inside X.
/// Always satisfies t0 <= 0 <= t1; infinite endpoints mean the line never
/// leaves X in that direction. t0_row/t1_row are the constraint rows
/// attaining the finite endpoints (-1 when infinite), and the *_tied flags
/// report whether several rows attain the same endpoint (a segment endpoint
/// at a vertex of X, where the objective may be nonsmooth).
struct SegmentBounds {
  double t0 = -std::numeric_limits<double>::infinity();
  double t1 = std::numeric_limits<double>::infinity();
  int t0_row = -1;
  int t1_row = -1;
  bool t0_tied = false;
  bool t1_tied = false;
};

/// Boundary point coefficients of (xbar + span{p}) cap X: intersect the
/// line with every constraint hyperplane, keep the tightest negative and
/// positive intersection coefficients.
SegmentBounds boundary_coefficients(const PolyhedralSet& domain, const Eigen::VectorXd& xbar,
                                    const Direction& p);

struct SegmentProjection {
  double a_star = 0.0;
  Eigen::VectorXd z_star;
  double sq_dist = 0.0;
};

/// Closest point to x on the segment {xbar + t p : t in [bounds.t0, bounds.t1]}.
SegmentProjection project_to_segment(const Eigen::VectorXd& x, const Eigen::VectorXd& xbar,
                                     const Direction& p, const SegmentBounds& bounds);

/// The nested CPCA objective V(p) = (1/N) sum_i inf_z ||x_i - z_i||^2 over
/// z_i in (xbar + span{p}) cap X. Cost O(Nd) + O(md). Result is independent
/// of `threads` (per-point work is embarrassingly parallel; the reduction
/// order is fixed).
double value_function(const CpcaProblem& problem, const Direction& p, int threads = 1);

/// How the outer optimizer obtains gradients of theta -> V(B omega(theta)).
enum class GradientMode : std::uint8_t {
  kCentralDiff,  // central finite differences (default)
  kAnalytic,     // envelope-theorem gradient, FD fallback at nonsmooth points
};

struct FitConfig {
  int k = 1;                  // components requested
  double grad_tol = 1e-8;     // stop when ||grad|| <= grad_tol
  double obj_tol = 1e-12;     // stop on relative objective change
  int max_iter = 500;         // outer iterations per start
  int restarts = 0;           // extra random restarts beyond the warm start
  double fd_step = 1e-6;      // central-difference step
  std::uint64_t seed = 0;     // RNG seed for restarts
  int threads = 1;            // parallelism hint; never changes results
  GradientMode gradient = GradientMode::kCentralDiff;

  void validate() const;
};

/// Central-difference gradient of theta -> V(basis * omega(theta)).
Eigen::VectorXd value_gradient_fd(const CpcaProblem& problem, const SphericalAngles& theta,
                                  const OrthonormalBasis& basis, double fd_step = 1e-6,
                                  int threads = 1);

/// Envelope-theorem gradient of V at p, valid where at most one constraint
/// binds per data point. `nonsmooth` is set when some point's optimum has
/// two or more binding constraints; the gradient entries are then not
/// trustworthy and callers should fall back to finite differences.
struct AnalyticGradient {
  Eigen::VectorXd gradient;      // d-vector, orthogonal to p
  Eigen::VectorXd multipliers;   // per-point KKT multiplier (0 when interior)
  std::vector<int> binding_row;  // per-point binding constraint (-1 when none)
  bool nonsmooth = false;
  int first_nonsmooth_point = -1;
};

AnalyticGradient value_gradient_analytic(const CpcaProblem& problem, const Direction& p,
                                         int threads = 1);

/// Warm start for one component: the top Euclidean principal direction of
/// the data projected onto the orthogonal complement of `previous`.
/// Throws when the projected data is identically zero.
Direction init_guess(const CpcaProblem& problem, const OrthonormalBasis& previous);

struct ComponentDiagnostics {
  int iterations = 0;
  bool converged = false;
  int fd_fallbacks = 0;       // analytic-mode iterations that fell back to FD
  double initial_objective = 0.0;
  int starts = 1;             // starts actually run (1 + restarts)
};

struct ComponentResult {
  Eigen::VectorXd direction;  // unit, orthogonal to previous, sign-fixed
  double objective = 0.0;
  ComponentDiagnostics diagnostics;
};

/// Minimize theta -> V(B omega(theta)) by BFGS with Armijo backtracking,
/// warm-started from init_guess plus config.restarts random unit starts.
/// The returned objective never exceeds the warm start's objective.
ComponentResult fit_component(const CpcaProblem& problem, const OrthonormalBasis& previous,
                              const FitConfig& config);

/// Ordered convex principal directions with per-component objectives and
/// cumulative explained variation.
class PrincipalBasis {
public:
  PrincipalBasis(Eigen::MatrixXd directions, Eigen::VectorXd objectives, Eigen::VectorXd ev,
                 Eigen::VectorXd reference);

  int k() const { return static_cast<int>(directions_.cols()); }
  int dim() const { return static_cast<int>(directions_.rows()); }
  const Eigen::MatrixXd& directions() const { return directions_; }  // d x k
  const Eigen::VectorXd& objectives() const { return objectives_; }  // V(p*_j)
  const Eigen::VectorXd& ev() const { return ev_; }                  // cumulative EV_j
  const Eigen::VectorXd& reference() const { return reference_; }

private:
  Eigen::MatrixXd directions_;
  Eigen::VectorXd objectives_;
  Eigen::VectorXd ev_;
  Eigen::VectorXd reference_;
};

struct NestedFitResult {
  PrincipalBasis basis;
  std::vector<ComponentDiagnostics> diagnostics;
  bool all_converged = true;
};

/// Sequential nested fit: k components, each orthogonal to those before it.
NestedFitResult fit_nested(const CpcaProblem& problem, const FitConfig& config);

struct SetProjection {
  Eigen::VectorXd coeffs;  // j-vector of coordinates along the directions
  Eigen::VectorXd point;   // xbar + P * coeffs, inside X
};

/// Metric projection of x onto C_j = (xbar + span{p_1..p_j}) cap X.
/// j = 1 uses the closed-form segment clamp; j >= 2 solves the small QP by
/// Dykstra's alternating projections onto the constraint halfspaces, run to
/// a 1e-9 KKT residual.
SetProjection project_onto_component_set(const Eigen::VectorXd& x,
                                         const Eigen::MatrixXd& directions,
                                         const Eigen::VectorXd& xbar,
                                         const PolyhedralSet& domain);

/// Same, using the first `up_to_j` directions of a fitted basis.
SetProjection project_onto_component_set(const Eigen::VectorXd& x, const PrincipalBasis& basis,
                                         int up_to_j, const PolyhedralSet& domain);

/// Proportion of variation explained by the first `up_to_j` directions:
/// E||Pi_C x - xbar||^2 / E||x - xbar||^2. up_to_j = 0 returns 0.
double explained_variation(const CpcaProblem& problem, const Eigen::MatrixXd& directions,
                           int up_to_j, int threads = 1);

/// Project every data row onto C_j; returns the N x j coefficient matrix.
Eigen::MatrixXd project_data_coefficients(const CpcaProblem& problem,
                                          const Eigen::MatrixXd& directions, int threads = 1);

/// Thrown when an iterative routine exhausts its iteration budget.
class NotConverged : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace cpca

#endif  // CPCA_SOLVER_HPP
