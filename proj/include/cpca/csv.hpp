#ifndef CPCA_CSV_HPP
#define CPCA_CSV_HPP

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace cpca::csv {

/// Numeric CSV: comma-separated doubles, one row per line. Lines starting
/// with '#' and blank lines are skipped; a single leading non-numeric row is
/// treated as a header. Ragged or non-numeric rows raise with the 1-based
/// line number.
Eigen::MatrixXd read_matrix(const std::filesystem::path& path);

/// Long-format CSV with columns (group_id, value). Groups are returned in
/// order of first appearance.
struct LongColumn {
  std::string group;
  std::vector<double> values;
};
std::vector<LongColumn> read_long_groups(const std::filesystem::path& path);

/// Long-format CSV with columns (date, asset, cap). Every date must carry
/// the same asset set; rows come back as a dates x assets matrix with both
/// label vectors, ordered by first appearance.
struct LongPanel {
  std::vector<std::string> dates;
  std::vector<std::string> assets;
  Eigen::MatrixXd values;
};
LongPanel read_long_panel(const std::filesystem::path& path);

/// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double v);

/// Write rows atomically (temp file + rename). `comment` lines are emitted
/// first, prefixed with "# ".
void write_matrix(const std::filesystem::path& path, const Eigen::MatrixXd& m,
                  const std::vector<std::string>& comment = {});

/// Atomic write of arbitrary text.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace cpca::csv

#endif  // CPCA_CSV_HPP
