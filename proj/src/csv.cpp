#include "cpca/csv.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace cpca::csv {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  fields.push_back(cur);
  for (std::string& f : fields) {
    const auto first = f.find_first_not_of(" \t");
    const auto last = f.find_last_not_of(" \t");
    f = first == std::string::npos ? std::string() : f.substr(first, last - first + 1);
  }
  return fields;
}

bool parse_double(const std::string& field, double& out) {
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto res = std::from_chars(begin, end, out);
  return res.ec == std::errc() && res.ptr == end && !field.empty();
}

struct Line {
  std::size_t number;  // 1-based in the file
  std::vector<std::string> fields;
};

std::vector<Line> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<Line> lines;
  std::string raw;
  std::size_t number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (raw.empty() || raw[0] == '#') continue;
    std::vector<std::string> fields = split_fields(raw);
    bool all_blank = true;
    for (const std::string& f : fields) {
      if (!f.empty()) all_blank = false;
    }
    if (all_blank) continue;
    lines.push_back(Line{number, std::move(fields)});
  }
  return lines;
}

bool all_numeric(const std::vector<std::string>& fields) {
  double tmp;
  for (const std::string& f : fields) {
    if (!parse_double(f, tmp)) return false;
  }
  return true;
}

}  // namespace

Eigen::MatrixXd read_matrix(const std::filesystem::path& path) {
  std::vector<Line> lines = read_lines(path);
  if (lines.empty()) throw std::runtime_error(path.string() + ": no data rows");
  std::size_t start = 0;
  if (!all_numeric(lines[0].fields)) start = 1;  // header row
  if (start >= lines.size()) throw std::runtime_error(path.string() + ": no data rows");
  const std::size_t cols = lines[start].fields.size();
  Eigen::MatrixXd out(lines.size() - start, cols);
  for (std::size_t r = start; r < lines.size(); ++r) {
    const Line& line = lines[r];
    if (line.fields.size() != cols) {
      throw std::runtime_error(path.string() + ": line " + std::to_string(line.number) +
                               " has " + std::to_string(line.fields.size()) +
                               " fields, expected " + std::to_string(cols));
    }
    for (std::size_t c = 0; c < cols; ++c) {
      double v;
      if (!parse_double(line.fields[c], v)) {
        throw std::runtime_error(path.string() + ": line " + std::to_string(line.number) +
                                 ": non-numeric cell '" + line.fields[c] + "'");
      }
      out(static_cast<Eigen::Index>(r - start), static_cast<Eigen::Index>(c)) = v;
    }
  }
  return out;
}

std::vector<LongColumn> read_long_groups(const std::filesystem::path& path) {
  std::vector<Line> lines = read_lines(path);
  if (lines.empty()) throw std::runtime_error(path.string() + ": no data rows");
  std::size_t start = 0;
  if (lines[0].fields.size() == 2) {
    double tmp;
    if (!parse_double(lines[0].fields[1], tmp)) start = 1;
  }
  std::vector<LongColumn> groups;
  std::map<std::string, std::size_t> index;
  for (std::size_t r = start; r < lines.size(); ++r) {
    const Line& line = lines[r];
    if (line.fields.size() != 2) {
      throw std::runtime_error(path.string() + ": line " + std::to_string(line.number) +
                               ": expected two columns (group_id,value)");
    }
    double v;
    if (!parse_double(line.fields[1], v)) {
      throw std::runtime_error(path.string() + ": line " + std::to_string(line.number) +
                               ": non-numeric value '" + line.fields[1] + "'");
    }
    auto [it, inserted] = index.try_emplace(line.fields[0], groups.size());
    if (inserted) groups.push_back(LongColumn{line.fields[0], {}});
    groups[it->second].values.push_back(v);
  }
  if (groups.empty()) throw std::runtime_error(path.string() + ": no data rows");
  return groups;
}

LongPanel read_long_panel(const std::filesystem::path& path) {
  std::vector<Line> lines = read_lines(path);
  if (lines.empty()) throw std::runtime_error(path.string() + ": no data rows");
  std::size_t start = 0;
  if (lines[0].fields.size() == 3) {
    double tmp;
    if (!parse_double(lines[0].fields[2], tmp)) start = 1;
  }
  LongPanel panel;
  std::map<std::string, std::size_t> date_index;
  std::map<std::string, std::size_t> asset_index;
  std::vector<std::map<std::size_t, double>> cells;
  for (std::size_t r = start; r < lines.size(); ++r) {
    const Line& line = lines[r];
    if (line.fields.size() != 3) {
      throw std::runtime_error(path.string() + ": line " + std::to_string(line.number) +
                               ": expected three columns (date,asset,cap)");
    }
    double v;
    if (!parse_double(line.fields[2], v)) {
      throw std::runtime_error(path.string() + ": line " + std::to_string(line.number) +
                               ": non-numeric cap '" + line.fields[2] + "'");
    }
    auto [dit, dnew] = date_index.try_emplace(line.fields[0], panel.dates.size());
    if (dnew) {
      panel.dates.push_back(line.fields[0]);
      cells.emplace_back();
    }
    auto [ait, anew] = asset_index.try_emplace(line.fields[1], panel.assets.size());
    if (anew) panel.assets.push_back(line.fields[1]);
    auto [cit, cnew] = cells[dit->second].try_emplace(ait->second, v);
    if (!cnew) {
      throw std::runtime_error(path.string() + ": line " + std::to_string(line.number) +
                               ": duplicate (date, asset) pair");
    }
  }
  panel.values.resize(panel.dates.size(), panel.assets.size());
  for (std::size_t d = 0; d < panel.dates.size(); ++d) {
    if (cells[d].size() != panel.assets.size()) {
      throw std::runtime_error(path.string() + ": date '" + panel.dates[d] +
                               "' is missing some assets");
    }
    for (const auto& [a, v] : cells[d]) {
      panel.values(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(a)) = v;
    }
  }
  return panel;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

void atomic_write(const std::filesystem::path& path, const std::string& payload) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << payload;
    if (!out.flush()) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace

void write_matrix(const std::filesystem::path& path, const Eigen::MatrixXd& m,
                  const std::vector<std::string>& comment) {
  std::ostringstream out;
  for (const std::string& line : comment) out << "# " << line << "\n";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out << ',';
      out << format_double(m(r, c));
    }
    out << "\n";
  }
  atomic_write(path, out.str());
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  atomic_write(path, text);
}

}  // namespace cpca::csv
