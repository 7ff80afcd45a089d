#include <doctest.h>

#include <charconv>
#include <fstream>
#include <random>

#include "cpca/io.hpp"

using namespace cpca;

namespace {

class TempDir {
public:
  TempDir() {
    static int counter = 0;
    dir_ = std::filesystem::temp_directory_path() /
           ("cpca_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(dir_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(dir_, ec);
  }
  std::filesystem::path path(const std::string& name) const { return dir_ / name; }
  const std::filesystem::path& dir() const { return dir_; }

private:
  std::filesystem::path dir_;
};

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_SUITE_BEGIN("io");

TEST_CASE("numeric CSV parsing") {
  TempDir tmp;
  SUBCASE("plain matrix with header auto-detected") {
    write_file(tmp.path("m.csv"), "x,y\n1.0,2.0\n3.5,-4.25\n");
    const Eigen::MatrixXd m = csv::read_matrix(tmp.path("m.csv"));
    REQUIRE(m.rows() == 2);
    CHECK(m(1, 1) == -4.25);
  }
  SUBCASE("comments and blank lines skipped") {
    write_file(tmp.path("m.csv"), "# schema note\n\n1,2\n3,4\n");
    CHECK(csv::read_matrix(tmp.path("m.csv")).rows() == 2);
  }
  SUBCASE("ragged rows rejected with the line number") {
    write_file(tmp.path("m.csv"), "1,2\n3\n");
    CHECK_THROWS_WITH_AS(csv::read_matrix(tmp.path("m.csv")),
                         doctest::Contains("line 2"), std::runtime_error);
  }
  SUBCASE("non-numeric cell after the header rejected") {
    write_file(tmp.path("m.csv"), "1,2\n3,abc\n");
    CHECK_THROWS_AS(csv::read_matrix(tmp.path("m.csv")), std::runtime_error);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(csv::read_matrix(tmp.path("nope.csv")), std::runtime_error);
  }
}

TEST_CASE("long-format loaders") {
  TempDir tmp;
  SUBCASE("groups in order of first appearance, interleaved rows") {
    write_file(tmp.path("s.csv"), "group_id,value\nb,1\na,2\nb,3\na,4\nb,5\n");
    const auto groups = load_samples_long_csv(tmp.path("s.csv"));
    REQUIRE(groups.size() == 2);
    CHECK(groups[0].id == "b");
    CHECK(groups[0].values == std::vector<double>{1.0, 3.0, 5.0});
    CHECK(groups[1].values == std::vector<double>{2.0, 4.0});
  }
  SUBCASE("missing value column rejected") {
    write_file(tmp.path("s.csv"), "g\n1\n");
    CHECK_THROWS_AS(load_samples_long_csv(tmp.path("s.csv")), std::runtime_error);
  }
  SUBCASE("panel requires a rectangular date x asset table") {
    write_file(tmp.path("c.csv"), "date,asset,cap\nd1,a,1\nd1,b,2\nd2,a,3\n");
    CHECK_THROWS_AS(csv::read_long_panel(tmp.path("c.csv")), std::runtime_error);
    write_file(tmp.path("c2.csv"), "date,asset,cap\nd1,a,1\nd1,b,2\nd2,b,4\nd2,a,3\n");
    const csv::LongPanel panel = csv::read_long_panel(tmp.path("c2.csv"));
    CHECK(panel.values(1, 0) == 3.0);
    CHECK(panel.values(1, 1) == 4.0);
  }
}

TEST_CASE("constraints and feasibility reporting") {
  TempDir tmp;
  write_file(tmp.path("c.csv"), "1,0,0\n0,1,0\n");
  const PolyhedralSet domain = load_constraints_csv(tmp.path("c.csv"));
  CHECK(domain.dim() == 2);
  CHECK(domain.constraint_count() == 2);

  Eigen::MatrixXd points(3, 2);
  points << 0.5, 0.5, 1.0, -1e-3, 0.25, 0.25;
  const Eigen::VectorXd ref = Eigen::VectorXd::Constant(2, 0.5);
  CHECK_THROWS_WITH_AS(make_problem(points, ref, domain), doctest::Contains("row 2"),
                       std::invalid_argument);
}

TEST_CASE("shortest round-trip double formatting") {
  std::mt19937_64 gen(91);
  std::uniform_real_distribution<double> unif(-1e6, 1e6);
  for (int rep = 0; rep < 2000; ++rep) {
    double v = unif(gen) * std::pow(10.0, static_cast<int>(gen() % 13) - 6);
    const std::string s = csv::format_double(v);
    double back = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    CHECK(back == v);
  }
}

TEST_CASE("matrix write/read round trip is bitwise") {
  TempDir tmp;
  std::mt19937_64 gen(92);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd m(17, 5);
  for (int i = 0; i < 17; ++i) {
    for (int j = 0; j < 5; ++j) m(i, j) = std::exp(3.0 * gauss(gen)) * gauss(gen);
  }
  csv::write_matrix(tmp.path("m.csv"), m, {"columns: test"});
  const Eigen::MatrixXd back = csv::read_matrix(tmp.path("m.csv"));
  CHECK(back == m);
}

TEST_CASE("cli fit -> project round trip") {
  TempDir tmp;
  // Small feasible dataset in the positive quadrant.
  write_file(tmp.path("points.csv"),
             "0.9,0.4\n0.5,1.2\n1.4,0.9\n0.2,0.3\n1.1,1.6\n0.7,0.8\n");
  write_file(tmp.path("cons.csv"), "1,0,0\n0,1,0\n");

  const int fit_code = run_cli({"fit", "--points", tmp.path("points.csv").string(),
                                "--constraints", tmp.path("cons.csv").string(), "--k", "2",
                                "--out", tmp.path("fit_out").string(), "--seed", "5"});
  REQUIRE(fit_code == 0);
  for (const char* name : {"components.csv", "projections.csv", "ev.csv", "reference.csv",
                           "report.json"}) {
    CHECK(std::filesystem::exists(tmp.path("fit_out") / name));
  }

  const int proj_code =
      run_cli({"project", "--points", tmp.path("points.csv").string(), "--constraints",
               tmp.path("cons.csv").string(), "--components",
               (tmp.path("fit_out") / "components.csv").string(), "--reference",
               (tmp.path("fit_out") / "reference.csv").string(), "--out",
               tmp.path("proj_out").string()});
  REQUIRE(proj_code == 0);
  CHECK(read_file(tmp.path("proj_out") / "projections.csv") ==
        read_file(tmp.path("fit_out") / "projections.csv"));
}

TEST_CASE("cli exit codes") {
  TempDir tmp;
  SUBCASE("missing file is a validation error") {
    CHECK(run_cli({"fit", "--points", tmp.path("absent.csv").string(), "--constraints",
                   tmp.path("absent2.csv").string(), "--out", tmp.path("o").string()}) == 1);
  }
  SUBCASE("infeasible point is a validation error") {
    write_file(tmp.path("p.csv"), "1,1\n-2,1\n");
    write_file(tmp.path("c.csv"), "1,0,0\n0,1,0\n");
    CHECK(run_cli({"fit", "--points", tmp.path("p.csv").string(), "--constraints",
                   tmp.path("c.csv").string(), "--out", tmp.path("o").string()}) == 1);
  }
  SUBCASE("unknown subcommand is a parse error") {
    CHECK(run_cli({"frobnicate"}) == 1);
  }
  SUBCASE("nonconvergence surfaces as exit code 2") {
    // Strip data in a cone with a one-iteration budget and an unreachable
    // gradient tolerance: the solver returns its best-so-far, flagged.
    std::mt19937_64 gen(94);
    std::uniform_real_distribution<double> ux(-0.2, 0.5);
    std::uniform_real_distribution<double> uu(0.0, 1.0);
    std::string points;
    for (int i = 0; i < 80; ++i) {
      const double x1 = ux(gen);
      const double x2 = 2.0 * std::abs(x1) + 0.02 + 3.0 * uu(gen) * uu(gen);
      points += csv::format_double(x1) + "," + csv::format_double(x2) + "\n";
    }
    write_file(tmp.path("p.csv"), points);
    write_file(tmp.path("c.csv"), "-2,1,0\n2,1,0\n");
    CHECK(run_cli({"fit", "--points", tmp.path("p.csv").string(), "--constraints",
                   tmp.path("c.csv").string(), "--out", tmp.path("o").string(), "--max-iter",
                   "1", "--grad-tol", "1e-16", "--obj-tol", "1e-18"}) == 2);
    // Outputs are still written alongside the flag.
    CHECK(std::filesystem::exists(tmp.path("o") / "report.json"));
  }
}

TEST_CASE("report is deterministic modulo timings") {
  TempDir tmp;
  write_file(tmp.path("points.csv"), "0.9,0.4\n0.5,1.2\n1.4,0.9\n0.2,0.3\n");
  write_file(tmp.path("cons.csv"), "1,0,0\n0,1,0\n");
  auto fit_once = [&] {
    REQUIRE(run_cli({"fit", "--points", tmp.path("points.csv").string(), "--constraints",
                     tmp.path("cons.csv").string(), "--k", "1", "--seed", "8", "--out",
                     tmp.path("r").string()}) == 0);
    return read_file(tmp.path("r") / "report.json");
  };
  std::string a = fit_once();
  std::string b = fit_once();
  // Blank out the timing block before comparing.
  auto strip_timings = [](std::string s) {
    const auto start = s.find("\"timings\"");
    REQUIRE(start != std::string::npos);
    const auto end = s.find('}', start);
    return s.erase(start, end - start + 1);
  };
  CHECK(strip_timings(a) == strip_timings(b));
}

TEST_CASE("cli simulate-atlas determinism") {
  TempDir tmp;
  const std::vector<std::string> base{"simulate-atlas", "--stocks", "11", "--days", "40",
                                      "--seed", "77"};
  auto with_out = [&](const std::string& out) {
    std::vector<std::string> args = base;
    args.push_back("--out");
    args.push_back(tmp.path(out).string());
    return args;
  };
  REQUIRE(run_cli(with_out("a")) == 0);
  REQUIRE(run_cli(with_out("b")) == 0);
  for (const char* name : {"returns.csv", "caps.csv", "ranked_returns.csv"}) {
    CHECK(read_file(tmp.path("a") / name) == read_file(tmp.path("b") / name));
  }
}

TEST_CASE("cli wgpca output shape") {
  TempDir tmp;
  // Three sample groups shifted against each other.
  std::string samples = "group_id,value\n";
  std::mt19937_64 gen(93);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int g = 0; g < 3; ++g) {
    for (int i = 0; i < 200; ++i) {
      samples += "g" + std::to_string(g) + "," +
                 csv::format_double(0.1 * g + (1.0 + 0.2 * g) * gauss(gen)) + "\n";
    }
  }
  write_file(tmp.path("samples.csv"), samples);
  const int code = run_cli({"wgpca", "--samples", tmp.path("samples.csv").string(), "--grid-n",
                            "4", "--k", "2", "--margin", "0.5", "--curve-steps", "5", "--out",
                            tmp.path("w").string(), "--seed", "3"});
  REQUIRE(code == 0);
  // curves.csv: header + k * steps * 2^n data lines.
  const std::string curves = read_file(tmp.path("w") / "curves.csv");
  const long lines = std::count(curves.begin(), curves.end(), '\n');
  CHECK(lines == 1 + 2 * 5 * 16);
  const Eigen::MatrixXd components = csv::read_matrix(tmp.path("w") / "components.csv");
  CHECK(components.rows() == 2);
  CHECK(components.cols() == 16);
}

TEST_SUITE_END();
