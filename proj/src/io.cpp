#include "cpca/io.hpp"

#include <sstream>

namespace cpca {

Eigen::MatrixXd load_points_csv(const std::filesystem::path& path) {
  return csv::read_matrix(path);
}

PolyhedralSet load_constraints_csv(const std::filesystem::path& path) {
  const Eigen::MatrixXd raw = csv::read_matrix(path);
  if (raw.cols() < 2) {
    throw std::runtime_error(path.string() + ": constraints need at least 2 columns [A | b]");
  }
  return PolyhedralSet(raw.leftCols(raw.cols() - 1), raw.col(raw.cols() - 1));
}

std::vector<SampleGroup> load_samples_long_csv(const std::filesystem::path& path) {
  std::vector<SampleGroup> out;
  for (csv::LongColumn& col : csv::read_long_groups(path)) {
    if (col.values.empty()) {
      throw std::runtime_error(path.string() + ": group '" + col.group + "' has no values");
    }
    out.push_back(SampleGroup{std::move(col.group), std::move(col.values)});
  }
  return out;
}

CpcaProblem make_problem(const Eigen::MatrixXd& points, const Eigen::VectorXd& reference,
                         const PolyhedralSet& domain) {
  if (points.cols() != domain.dim()) {
    throw std::invalid_argument("points have " + std::to_string(points.cols()) +
                                " columns but constraints expect dimension " +
                                std::to_string(domain.dim()));
  }
  std::ostringstream bad;
  int bad_count = 0;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    const Eigen::VectorXd res = domain.residual(points.row(i).transpose());
    Eigen::Index worst = 0;
    if (res.minCoeff(&worst) < -kFeasibilityTol) {
      if (bad_count < 10) {
        bad << "\n  row " << (i + 1) << " violates constraint " << (worst + 1) << " by "
            << -res[worst];
      }
      ++bad_count;
    }
  }
  if (bad_count > 0) {
    throw std::invalid_argument("infeasible data points (" + std::to_string(bad_count) +
                                " total):" + bad.str());
  }
  return CpcaProblem(points, reference, domain);
}

}  // namespace cpca
