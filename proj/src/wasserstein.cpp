#include "cpca/wasserstein.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cpca {

IntervalGrid::IntervalGrid(double a, double b, int level) : a_(a), b_(b), level_(level) {
  if (!(a < b)) throw std::invalid_argument("IntervalGrid: need a < b");
  if (level < 0) throw std::invalid_argument("IntervalGrid: dyadic level must be >= 0");
  if (level > 30) throw std::invalid_argument("IntervalGrid: dyadic level too large");
}

TransportMap::TransportMap(IntervalGrid grid, Eigen::VectorXd values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.cell_count()) {
    throw std::invalid_argument("TransportMap: expected " + std::to_string(grid_.cell_count()) +
                                " cell values, got " + std::to_string(values_.size()));
  }
  const double tol = 1e-9;
  if (values_[0] < grid_.a() - tol || values_[values_.size() - 1] > grid_.b() + tol) {
    throw std::invalid_argument("TransportMap: values leave [a, b]");
  }
  for (Eigen::Index j = 0; j + 1 < values_.size(); ++j) {
    if (values_[j + 1] < values_[j] - tol) {
      throw std::invalid_argument("TransportMap: values not non-decreasing at cell " +
                                  std::to_string(j));
    }
  }
}

TransportMap empirical_quantile_map(const std::vector<double>& samples,
                                    const IntervalGrid& grid) {
  if (samples.empty()) {
    throw std::invalid_argument("empirical_quantile_map: empty sample set");
  }
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!(samples[i] >= grid.a() && samples[i] <= grid.b())) {
      throw std::invalid_argument("empirical_quantile_map: sample " + std::to_string(i) +
                                  " = " + std::to_string(samples[i]) + " outside [a, b]");
    }
  }
  std::vector<double> sorted = samples;
  std::sort(sorted.begin(), sorted.end());
  const int cells = grid.cell_count();
  const double m = static_cast<double>(sorted.size());
  Eigen::VectorXd values(cells);
  // Order statistic i (1-based) carries the quantile mass ((i-1)/m, i/m];
  // sweep it against the cell windows ((j-1)/cells, j/cells].
  std::size_t i = 0;
  for (int j = 0; j < cells; ++j) {
    const double lo = static_cast<double>(j) / cells;
    const double hi = static_cast<double>(j + 1) / cells;
    double acc = 0.0;
    while (i < sorted.size() && static_cast<double>(i) / m < hi) {
      const double seg_lo = std::max(lo, static_cast<double>(i) / m);
      const double seg_hi = std::min(hi, static_cast<double>(i + 1) / m);
      if (seg_hi > seg_lo) acc += (seg_hi - seg_lo) * sorted[i];
      if (static_cast<double>(i + 1) / m <= hi) {
        ++i;
      } else {
        break;
      }
    }
    values[j] = acc * cells;
  }
  return TransportMap(grid, std::move(values));
}

TransportMap project_map(const TransportMap& map, int target_level) {
  const int n = map.grid().level();
  if (target_level > n) {
    throw std::invalid_argument("project_map: target level exceeds the map's level");
  }
  if (target_level == n) return map;
  const IntervalGrid coarse(map.grid().a(), map.grid().b(), target_level);
  const int block = 1 << (n - target_level);
  Eigen::VectorXd values(coarse.cell_count());
  for (int j = 0; j < coarse.cell_count(); ++j) {
    values[j] = map.values().segment(static_cast<Eigen::Index>(j) * block, block).sum() /
                static_cast<double>(block);
  }
  return TransportMap(coarse, std::move(values));
}

double w2_distance(const TransportMap& s, const TransportMap& t) {
  if (!(s.grid() == t.grid())) {
    throw std::invalid_argument("w2_distance: maps live on different grids");
  }
  Eigen::VectorXd sq = (s.values() - t.values()).array().square();
  return std::sqrt(pairwise_sum(sq) * s.grid().cell_mass());
}

TransportMap barycenter(const std::vector<TransportMap>& maps) {
  if (maps.empty()) throw std::invalid_argument("barycenter: empty map list");
  const IntervalGrid& grid = maps.front().grid();
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(grid.cell_count());
  for (const TransportMap& map : maps) {
    if (!(map.grid() == grid)) {
      throw std::invalid_argument("barycenter: maps live on different grids");
    }
    sum += map.values();
  }
  return TransportMap(grid, sum / static_cast<double>(maps.size()));
}

GpcaProblem build_cpca_problem(const std::vector<TransportMap>& maps, const IntervalGrid& grid) {
  if (maps.empty()) throw std::invalid_argument("build_cpca_problem: empty map list");
  for (const TransportMap& map : maps) {
    if (!(map.grid() == grid)) {
      throw std::invalid_argument("build_cpca_problem: map grid differs from the given grid");
    }
  }
  const int cells = grid.cell_count();
  const double c = grid.scale_factor();

  // Raw-coordinate constraints: t_1 >= a, t_{j+1} - t_j >= 0, -t_last >= -b.
  // Under u = c * t the same rows apply with offsets scaled by c.
  Eigen::MatrixXd a_mat = Eigen::MatrixXd::Zero(cells + 1, cells);
  Eigen::VectorXd b_vec = Eigen::VectorXd::Zero(cells + 1);
  a_mat(0, 0) = 1.0;
  b_vec[0] = c * grid.a();
  for (int j = 0; j + 1 < cells; ++j) {
    a_mat(j + 1, j) = -1.0;
    a_mat(j + 1, j + 1) = 1.0;
  }
  a_mat(cells, cells - 1) = -1.0;
  b_vec[cells] = -c * grid.b();

  Eigen::MatrixXd data(maps.size(), cells);
  for (std::size_t i = 0; i < maps.size(); ++i) {
    data.row(static_cast<Eigen::Index>(i)) = c * maps[i].values().transpose();
  }
  const Eigen::VectorXd reference = c * barycenter(maps).values();

  return GpcaProblem{CpcaProblem(std::move(data), reference,
                                 PolyhedralSet(std::move(a_mat), std::move(b_vec))),
                     ScaleRecord{grid, c}};
}

GpcaResult fit_gpca(const std::vector<TransportMap>& maps, const IntervalGrid& grid,
                    const FitConfig& config) {
  if (maps.size() < 2) {
    throw std::invalid_argument("fit_gpca: need at least two maps");
  }
  GpcaProblem gp = build_cpca_problem(maps, grid);
  NestedFitResult fit = fit_nested(gp.problem, config);
  std::vector<Eigen::VectorXd> velocities;
  velocities.reserve(fit.basis.k());
  for (int j = 0; j < fit.basis.k(); ++j) {
    velocities.push_back(fit.basis.directions().col(j) / gp.scale.factor);
  }
  Eigen::MatrixXd coeffs =
      project_data_coefficients(gp.problem, fit.basis.directions(), config.threads);
  return GpcaResult{std::move(fit.basis),      barycenter(maps),
                    std::move(velocities),     gp.scale,
                    std::move(coeffs),         std::move(fit.diagnostics),
                    fit.all_converged,         gp.problem.reference_on_boundary()};
}

PerturbationCurve perturbation_curve(const GpcaResult& result, int component, double epsilon,
                                     int steps) {
  if (component < 1 || component > static_cast<int>(result.velocity_fields.size())) {
    throw std::invalid_argument("perturbation_curve: component out of range");
  }
  if (steps < 1) throw std::invalid_argument("perturbation_curve: need steps >= 1");
  if (!(epsilon >= 0.0)) throw std::invalid_argument("perturbation_curve: epsilon must be >= 0");
  const Eigen::VectorXd& v = result.velocity_fields[static_cast<std::size_t>(component - 1)];
  const Eigen::VectorXd& bary = result.barycenter_map.values();
  const IntervalGrid& grid = result.barycenter_map.grid();

  PerturbationCurve curve;
  curve.component = component;
  curve.ts.reserve(static_cast<std::size_t>(steps));
  for (int s = 0; s < steps; ++s) {
    const double t = steps == 1 ? 0.0
                                : -epsilon + 2.0 * epsilon * static_cast<double>(s) /
                                                 static_cast<double>(steps - 1);
    curve.ts.push_back(t);
    Eigen::VectorXd values = bary + t * v;
    bool needs_clip = values[0] < grid.a() || values[values.size() - 1] > grid.b();
    for (Eigen::Index j = 0; !needs_clip && j + 1 < values.size(); ++j) {
      needs_clip = values[j + 1] < values[j];
    }
    if (needs_clip) {
      curve.clipped = true;
      values = values.cwiseMax(grid.a()).cwiseMin(grid.b());
      for (Eigen::Index j = 1; j < values.size(); ++j) {
        values[j] = std::max(values[j], values[j - 1]);
      }
    }
    curve.maps.emplace_back(grid, std::move(values));
  }
  return curve;
}

double default_perturbation_epsilon(const GpcaResult& result, int component) {
  if (component < 1 || component > result.coefficients.cols()) {
    throw std::invalid_argument("default_perturbation_epsilon: component out of range");
  }
  const Eigen::VectorXd col = result.coefficients.col(component - 1);
  const double mean = col.mean();
  const double var = (col.array() - mean).square().sum() / static_cast<double>(col.size());
  return 2.0 * std::sqrt(var);
}

namespace {

TransportMap lift_map(const TransportMap& map, int target_level) {
  const int n = map.grid().level();
  if (target_level == n) return map;
  if (target_level < n) {
    throw std::invalid_argument("lift_map: target level below the map's level");
  }
  const IntervalGrid fine(map.grid().a(), map.grid().b(), target_level);
  const int block = 1 << (target_level - n);
  Eigen::VectorXd values(fine.cell_count());
  for (int j = 0; j < map.cell_count(); ++j) {
    values.segment(static_cast<Eigen::Index>(j) * block, block).setConstant(map.values()[j]);
  }
  return TransportMap(fine, std::move(values));
}

}  // namespace

double reconstruction_error(const std::vector<TransportMap>& truth,
                            const std::vector<TransportMap>& approx) {
  if (truth.size() != approx.size()) {
    throw std::invalid_argument("reconstruction_error: list lengths differ");
  }
  if (truth.empty()) throw std::invalid_argument("reconstruction_error: empty lists");
  Eigen::VectorXd dists(truth.size());
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const int level = truth[i].grid().level();
    const TransportMap adjusted = approx[i].grid().level() >= level
                                      ? project_map(approx[i], level)
                                      : lift_map(approx[i], level);
    dists[static_cast<Eigen::Index>(i)] = w2_distance(truth[i], adjusted);
  }
  return pairwise_sum(dists) / static_cast<double>(truth.size());
}

}  // namespace cpca
