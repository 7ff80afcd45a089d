#ifndef CPCA_IO_HPP
#define CPCA_IO_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "cpca/csv.hpp"
#include "cpca/solver.hpp"

namespace cpca {

inline constexpr const char* kVersion = "0.1.0";

/// N x d numeric matrix of data points (optional header row).
Eigen::MatrixXd load_points_csv(const std::filesystem::path& path);

/// m x (d+1) numeric matrix read as [A | b].
PolyhedralSet load_constraints_csv(const std::filesystem::path& path);

/// Long-format (group_id, value) file; one sample vector per group in order
/// of first appearance.
struct SampleGroup {
  std::string id;
  std::vector<double> values;
};
std::vector<SampleGroup> load_samples_long_csv(const std::filesystem::path& path);

/// Assemble a problem, checking every point against the domain first and
/// reporting all infeasible rows (1-based) with their worst constraint.
CpcaProblem make_problem(const Eigen::MatrixXd& points, const Eigen::VectorXd& reference,
                         const PolyhedralSet& domain);

/// Entry point behind the `cpca` binary; args exclude the program name.
/// Exit codes: 0 success, 1 validation error, 2 solver nonconvergence.
int run_cli(const std::vector<std::string>& args);

}  // namespace cpca

#endif  // CPCA_IO_HPP
