#ifndef CPCA_WASSERSTEIN_HPP
#define CPCA_WASSERSTEIN_HPP

#include <vector>

#include "cpca/solver.hpp"

namespace cpca {

/// Dyadic partition of [a, b] into 2^level cells of equal mass under the
/// uniform reference measure P0.
class IntervalGrid {
public:
  IntervalGrid(double a, double b, int level);

  double a() const { return a_; }
  double b() const { return b_; }
  int level() const { return level_; }
  int cell_count() const { return 1 << level_; }
  /// P0-mass of one cell, 2^-level.
  double cell_mass() const { return 1.0 / static_cast<double>(cell_count()); }
  /// sqrt(cell mass): the coordinate rescaling that turns the Euclidean inner
  /// product into the L2(P0) inner product.
  double scale_factor() const { return std::sqrt(cell_mass()); }

  bool operator==(const IntervalGrid& other) const {
    return a_ == other.a_ && b_ == other.b_ && level_ == other.level_;
  }

private:
  double a_;
  double b_;
  int level_;
};

/// Piecewise-constant non-decreasing transport map on a dyadic grid: one
/// value per cell, all within [a, b]. Represents a probability distribution
/// on [a, b] through T_# P0.
class TransportMap {
public:
  TransportMap(IntervalGrid grid, Eigen::VectorXd values);

  const IntervalGrid& grid() const { return grid_; }
  const Eigen::VectorXd& values() const { return values_; }
  int cell_count() const { return grid_.cell_count(); }

private:
  IntervalGrid grid_;
  Eigen::VectorXd values_;
};

/// Cell averages of the empirical quantile function of `samples`, computed
/// exactly by mass-weighted averaging of the order statistics over each
/// cell's quantile range. Samples must lie within [grid.a, grid.b].
TransportMap empirical_quantile_map(const std::vector<double>& samples, const IntervalGrid& grid);

/// Orthogonal projection onto the coarser dyadic level: block averages.
/// Monotone inputs stay monotone.
TransportMap project_map(const TransportMap& map, int target_level);

/// W2(P, Q) = sqrt( sum_j (s_j - t_j)^2 / 2^n ) for maps on a common grid.
double w2_distance(const TransportMap& s, const TransportMap& t);

/// Wasserstein barycenter: the cellwise mean map.
TransportMap barycenter(const std::vector<TransportMap>& maps);

struct ScaleRecord {
  IntervalGrid grid;
  double factor;  // multiply raw cell values by this to get solver coordinates
};

struct GpcaProblem {
  CpcaProblem problem;  // rescaled coordinates; reference = rescaled barycenter
  ScaleRecord scale;
};

/// Identify Pi_n X with {t : At >= b} (bidiagonal A, 2^n + 1 rows), rescale
/// coordinates by sqrt(cell mass) so the solver's Euclidean geometry equals
/// L2(P0), and assemble the CPCA problem over the given maps.
GpcaProblem build_cpca_problem(const std::vector<TransportMap>& maps, const IntervalGrid& grid);

struct GpcaResult {
  PrincipalBasis basis;  // rescaled coordinates
  TransportMap barycenter_map;
  std::vector<Eigen::VectorXd> velocity_fields;  // per component, raw cell values
  ScaleRecord scale;
  Eigen::MatrixXd coefficients;  // N x k projections onto C_k (L2(P0) units)
  std::vector<ComponentDiagnostics> diagnostics;
  bool all_converged = true;
  bool reference_on_boundary = false;
};

/// Wasserstein geodesic PCA: fit_nested on the rescaled problem, with the
/// directions re-expressed as initial velocity fields v_k on the grid.
GpcaResult fit_gpca(const std::vector<TransportMap>& maps, const IntervalGrid& grid,
                    const FitConfig& config);

struct PerturbationCurve {
  int component;             // 1-based
  std::vector<double> ts;    // symmetric grid over [-epsilon, epsilon]
  std::vector<TransportMap> maps;
  bool clipped = false;      // some map needed order-preserving clipping
};

/// Geodesic through the barycenter along component k: values(t) = bary + t v_k.
/// Each quantile moves at constant velocity in t. Values that leave the
/// monotone band are order-preserving-clipped and flagged.
PerturbationCurve perturbation_curve(const GpcaResult& result, int component, double epsilon,
                                     int steps);

/// Default perturbation half-width: twice the standard deviation of the
/// data's projected coefficients on that component.
double default_perturbation_epsilon(const GpcaResult& result, int component);

/// Average W2 distance between paired lists; `approx` entries are projected
/// (finer) or lifted by cell replication (coarser) onto each truth grid.
double reconstruction_error(const std::vector<TransportMap>& truth,
                            const std::vector<TransportMap>& approx);

}  // namespace cpca

#endif  // CPCA_WASSERSTEIN_HPP
