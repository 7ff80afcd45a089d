#include <chrono>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "cpca/aitchison.hpp"
#include "cpca/atlas.hpp"
#include "cpca/io.hpp"
#include "cpca/wasserstein.hpp"

namespace cpca {

namespace {

using nlohmann::json;

struct SolverOpts {
  int k = 1;
  int restarts = 0;
  std::uint64_t seed = 0;
  int threads = 1;
  std::string gradient = "fd";
  int max_iter = 500;
  double grad_tol = 1e-8;
  double obj_tol = 1e-12;
  double fd_step = 1e-6;
};

void attach_solver_opts(CLI::App* cmd, SolverOpts& o, int default_k) {
  o.k = default_k;
  cmd->add_option("--k", o.k, "number of principal components")->capture_default_str();
  cmd->add_option("--restarts", o.restarts, "extra random optimizer starts")
      ->capture_default_str();
  cmd->add_option("--seed", o.seed, "RNG seed")->capture_default_str();
  cmd->add_option("--threads", o.threads, "parallelism hint (results never depend on it)")
      ->envname("CPCA_THREADS")
      ->capture_default_str();
  cmd->add_option("--grad", o.gradient, "gradient mode: fd or analytic")
      ->check(CLI::IsMember({"fd", "analytic"}))
      ->capture_default_str();
  cmd->add_option("--max-iter", o.max_iter, "outer iteration cap")->capture_default_str();
  cmd->add_option("--grad-tol", o.grad_tol, "gradient-norm stopping tolerance")
      ->capture_default_str();
  cmd->add_option("--obj-tol", o.obj_tol, "relative objective-change stopping tolerance")
      ->capture_default_str();
  cmd->add_option("--fd-step", o.fd_step, "central-difference step")->capture_default_str();
}

FitConfig to_config(const SolverOpts& o) {
  FitConfig cfg;
  cfg.k = o.k;
  cfg.restarts = o.restarts;
  cfg.seed = o.seed;
  cfg.threads = o.threads < 1 ? static_cast<int>(std::thread::hardware_concurrency()) : o.threads;
  if (cfg.threads < 1) cfg.threads = 1;
  cfg.gradient = o.gradient == "analytic" ? GradientMode::kAnalytic : GradientMode::kCentralDiff;
  cfg.max_iter = o.max_iter;
  cfg.grad_tol = o.grad_tol;
  cfg.obj_tol = o.obj_tol;
  cfg.fd_step = o.fd_step;
  cfg.validate();
  return cfg;
}

json solver_opts_json(const SolverOpts& o) {
  return json{{"k", o.k},
              {"restarts", o.restarts},
              {"seed", o.seed},
              {"threads", o.threads},
              {"gradient", o.gradient},
              {"max_iter", o.max_iter},
              {"grad_tol", o.grad_tol},
              {"obj_tol", o.obj_tol},
              {"fd_step", o.fd_step}};
}

json components_json(const PrincipalBasis& basis,
                     const std::vector<ComponentDiagnostics>& diags) {
  json arr = json::array();
  for (int j = 0; j < basis.k(); ++j) {
    const ComponentDiagnostics& d = diags[static_cast<std::size_t>(j)];
    arr.push_back(json{{"index", j + 1},
                       {"objective", basis.objectives()[j]},
                       {"ev", basis.ev()[j]},
                       {"iterations", d.iterations},
                       {"converged", d.converged}});
  }
  return arr;
}

class PhaseTimer {
public:
  void start(const std::string& phase) {
    phase_ = phase;
    t0_ = std::chrono::steady_clock::now();
  }
  void stop() {
    const auto t1 = std::chrono::steady_clock::now();
    timings_[phase_ + "_ms"] =
        std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(t1 - t0_).count();
  }
  json to_json() const { return timings_; }

private:
  std::string phase_;
  std::chrono::steady_clock::time_point t0_;
  std::map<std::string, double> timings_;
};

void write_report(const std::filesystem::path& out_dir, const json& config,
                  const json& components, const PhaseTimer& timer) {
  json report{{"config", config},
              {"components", components},
              {"timings", timer.to_json()},
              {"version", kVersion}};
  csv::write_text(out_dir / "report.json", report.dump(2) + "\n");
}

void write_ev_csv(const std::filesystem::path& out_dir, const PrincipalBasis& basis) {
  Eigen::MatrixXd ev(basis.k(), 3);
  for (int j = 0; j < basis.k(); ++j) {
    ev(j, 0) = j + 1;
    ev(j, 1) = basis.objectives()[j];
    ev(j, 2) = basis.ev()[j];
  }
  csv::write_matrix(out_dir / "ev.csv", ev, {"columns: component,objective,ev"});
}

void ensure_out_dir(const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
}

// ---- fit ----------------------------------------------------------------

struct FitArgs {
  std::string points;
  std::string constraints;
  std::string out_dir;
  std::string ref_policy = "mean";
  std::string ref_file;
  SolverOpts solver;
};

int run_fit(const FitArgs& args) {
  PhaseTimer timer;
  timer.start("load");
  const Eigen::MatrixXd points = load_points_csv(args.points);
  const PolyhedralSet domain = load_constraints_csv(args.constraints);
  Eigen::VectorXd reference;
  if (args.ref_policy == "file") {
    if (args.ref_file.empty()) {
      throw std::invalid_argument("--ref file requires --ref-file");
    }
    const Eigen::MatrixXd ref_mat = csv::read_matrix(args.ref_file);
    if (ref_mat.rows() != 1) {
      throw std::invalid_argument("reference file must contain exactly one row");
    }
    reference = ref_mat.row(0);
  } else {
    // "mean" and "barycenter" coincide in Euclidean coordinates.
    reference = points.colwise().mean();
  }
  const CpcaProblem problem = make_problem(points, reference, domain);
  timer.stop();
  if (problem.reference_on_boundary()) {
    std::cerr << "note: reference point lies on the boundary of the domain\n";
  }

  const FitConfig cfg = to_config(args.solver);
  timer.start("fit");
  const NestedFitResult fit = fit_nested(problem, cfg);
  timer.stop();

  timer.start("project");
  const Eigen::MatrixXd projections =
      project_data_coefficients(problem, fit.basis.directions(), cfg.threads);
  timer.stop();

  timer.start("write");
  ensure_out_dir(args.out_dir);
  const std::filesystem::path out(args.out_dir);
  csv::write_matrix(out / "components.csv", fit.basis.directions().transpose(),
                    {"columns: coordinates in R^d; one principal direction per row"});
  csv::write_matrix(out / "projections.csv", projections,
                    {"columns: coefficient on component 1..k; one row per data point"});
  csv::write_matrix(out / "reference.csv", reference.transpose(), {"reference point"});
  write_ev_csv(out, fit.basis);
  timer.stop();

  json config{{"subcommand", "fit"},
              {"points", args.points},
              {"constraints", args.constraints},
              {"out", args.out_dir},
              {"ref", args.ref_policy},
              {"ref_file", args.ref_file},
              {"solver", solver_opts_json(args.solver)}};
  write_report(out, config, components_json(fit.basis, fit.diagnostics), timer);
  return fit.all_converged ? 0 : 2;
}

// ---- project ------------------------------------------------------------

struct ProjectArgs {
  std::string points;
  std::string constraints;
  std::string components;
  std::string reference;
  std::string out_dir;
  int threads = 1;
};

int run_project(const ProjectArgs& args) {
  PhaseTimer timer;
  timer.start("load");
  const Eigen::MatrixXd points = load_points_csv(args.points);
  const PolyhedralSet domain = load_constraints_csv(args.constraints);
  const Eigen::MatrixXd comp_rows = csv::read_matrix(args.components);
  const Eigen::MatrixXd ref_mat = csv::read_matrix(args.reference);
  if (ref_mat.rows() != 1) {
    throw std::invalid_argument("reference file must contain exactly one row");
  }
  const Eigen::VectorXd reference = ref_mat.row(0);
  const Eigen::MatrixXd directions = comp_rows.transpose();  // d x k
  {
    Eigen::MatrixXd gram = directions.transpose() * directions;
    gram -= Eigen::MatrixXd::Identity(directions.cols(), directions.cols());
    if (gram.cwiseAbs().maxCoeff() > 1e-8) {
      throw std::invalid_argument("components file does not hold orthonormal directions");
    }
  }
  const CpcaProblem problem = make_problem(points, reference, domain);
  timer.stop();

  const int threads = args.threads < 1 ? 1 : args.threads;
  timer.start("project");
  const Eigen::MatrixXd projections =
      project_data_coefficients(problem, directions, threads);
  timer.stop();

  timer.start("write");
  ensure_out_dir(args.out_dir);
  const std::filesystem::path out(args.out_dir);
  csv::write_matrix(out / "projections.csv", projections,
                    {"columns: coefficient on component 1..k; one row per data point"});
  timer.stop();

  json config{{"subcommand", "project"}, {"points", args.points},
              {"constraints", args.constraints}, {"components", args.components},
              {"reference", args.reference}, {"out", args.out_dir},
              {"threads", args.threads}};
  write_report(out, config, json::array(), timer);
  return 0;
}

// ---- wgpca --------------------------------------------------------------

struct WgpcaArgs {
  std::string samples;
  std::string out_dir;
  int grid_n = 7;
  double margin = 0.0;
  double a = std::numeric_limits<double>::quiet_NaN();
  double b = std::numeric_limits<double>::quiet_NaN();
  double curve_eps = 0.0;  // 0 = per-component default rule
  int curve_steps = 9;
  SolverOpts solver;
};

int run_wgpca(const WgpcaArgs& args) {
  PhaseTimer timer;
  timer.start("load");
  const std::vector<SampleGroup> groups = load_samples_long_csv(args.samples);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const SampleGroup& g : groups) {
    for (double v : g.values) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  const bool have_a = !std::isnan(args.a);
  const bool have_b = !std::isnan(args.b);
  if (have_a != have_b) {
    throw std::invalid_argument("--a and --b must be given together");
  }
  const double a = have_a ? args.a : lo - args.margin;
  const double b = have_b ? args.b : hi + args.margin;
  if (!(a < b)) {
    throw std::invalid_argument("degenerate interval [a, b]; widen it with --margin or --a/--b");
  }
  const IntervalGrid grid(a, b, args.grid_n);
  std::vector<TransportMap> maps;
  maps.reserve(groups.size());
  for (const SampleGroup& g : groups) {
    maps.push_back(empirical_quantile_map(g.values, grid));
  }
  timer.stop();

  const FitConfig cfg = to_config(args.solver);
  timer.start("fit");
  const GpcaResult result = fit_gpca(maps, grid, cfg);
  timer.stop();
  if (result.reference_on_boundary) {
    std::cerr << "note: barycenter map touches the interval boundary\n";
  }

  timer.start("write");
  ensure_out_dir(args.out_dir);
  const std::filesystem::path out(args.out_dir);

  Eigen::MatrixXd velocity_rows(result.basis.k(), grid.cell_count());
  for (int j = 0; j < result.basis.k(); ++j) {
    velocity_rows.row(j) = result.velocity_fields[static_cast<std::size_t>(j)].transpose();
  }
  csv::write_matrix(out / "components.csv", velocity_rows,
                    {"columns: velocity field value per grid cell; one component per row"});
  csv::write_matrix(out / "projections.csv", result.coefficients,
                    {"columns: coefficient on component 1..k; one row per input distribution"});
  csv::write_matrix(out / "barycenter.csv", result.barycenter_map.values().transpose(),
                    {"columns: barycenter transport map value per grid cell"});
  write_ev_csv(out, result.basis);

  std::ostringstream curves;
  curves << "# columns: component,t,cell,value\n";
  bool any_clipped = false;
  for (int j = 1; j <= result.basis.k(); ++j) {
    const double eps =
        args.curve_eps > 0.0 ? args.curve_eps : default_perturbation_epsilon(result, j);
    const PerturbationCurve curve = perturbation_curve(result, j, eps, args.curve_steps);
    any_clipped = any_clipped || curve.clipped;
    for (std::size_t s = 0; s < curve.ts.size(); ++s) {
      const Eigen::VectorXd& vals = curve.maps[s].values();
      for (int cell = 0; cell < vals.size(); ++cell) {
        curves << j << ',' << csv::format_double(curve.ts[s]) << ',' << (cell + 1) << ','
               << csv::format_double(vals[cell]) << "\n";
      }
    }
  }
  csv::write_text(out / "curves.csv", curves.str());
  timer.stop();
  if (any_clipped) {
    std::cerr << "note: some perturbation curves were order-preserving-clipped to stay "
                 "monotone within [a, b]\n";
  }

  json config{{"subcommand", "wgpca"}, {"samples", args.samples}, {"out", args.out_dir},
              {"grid_n", args.grid_n}, {"a", a}, {"b", b}, {"margin", args.margin},
              {"curve_eps", args.curve_eps}, {"curve_steps", args.curve_steps},
              {"solver", solver_opts_json(args.solver)}};
  write_report(out, config, components_json(result.basis, result.diagnostics), timer);
  return result.all_converged ? 0 : 2;
}

// ---- aitchison ----------------------------------------------------------

struct AitchisonArgs {
  std::string caps;
  std::string out_dir;
  double lambda = 0.5;
  std::string zero_policy = "error";
  double zero_floor = 1e-10;
  SolverOpts solver;
};

int run_aitchison(const AitchisonArgs& args) {
  PhaseTimer timer;
  timer.start("load");
  const csv::LongPanel panel = csv::read_long_panel(args.caps);
  std::vector<Composition> compositions;
  compositions.reserve(panel.dates.size());
  for (Eigen::Index d = 0; d < panel.values.rows(); ++d) {
    Eigen::VectorXd caps = panel.values.row(d);
    if (caps.minCoeff() <= 0.0) {
      if (args.zero_policy == "floor") {
        caps = caps.cwiseMax(args.zero_floor);
      } else {
        throw std::invalid_argument("nonpositive capitalization on date '" +
                                    panel.dates[static_cast<std::size_t>(d)] +
                                    "' (use --zero-policy floor to replace)");
      }
    }
    compositions.push_back(rank_descending(market_weights(caps)));
  }
  timer.stop();

  const FitConfig cfg = to_config(args.solver);
  timer.start("fit");
  const AitchisonCpcaResult result = fit_aitchison_cpca(compositions, cfg);
  timer.stop();
  if (result.reference_on_boundary) {
    std::cerr << "note: reference composition sits on the ordered-cone boundary\n";
  }

  timer.start("write");
  ensure_out_dir(args.out_dir);
  const std::filesystem::path out(args.out_dir);
  csv::write_matrix(out / "components.csv", result.basis.directions().transpose(),
                    {"columns: ilr coordinates; one principal direction per row"});
  csv::write_matrix(out / "projections.csv", result.coordinates,
                    {"columns: coefficient on component 1..k; one row per date"});
  csv::write_matrix(out / "reference.csv", result.reference_ilr.transpose(),
                    {"ilr coordinates of the Aitchison barycenter"});
  write_ev_csv(out, result.basis);

  std::ostringstream div;
  div << "# columns: date,diversity\n";
  for (std::size_t d = 0; d < compositions.size(); ++d) {
    div << panel.dates[d] << ',' << csv::format_double(diversity(compositions[d], args.lambda))
        << "\n";
  }
  csv::write_text(out / "diversity.csv", div.str());
  timer.stop();

  json config{{"subcommand", "aitchison"}, {"caps", args.caps}, {"out", args.out_dir},
              {"lambda", args.lambda}, {"zero_policy", args.zero_policy},
              {"zero_floor", args.zero_floor}, {"solver", solver_opts_json(args.solver)}};
  write_report(out, config, components_json(result.basis, result.diagnostics), timer);
  return result.all_converged ? 0 : 2;
}

// ---- simulate-atlas -------------------------------------------------------

struct AtlasArgs {
  std::string out_dir;
  int stocks = 101;
  int days = 5000;
  double dt = 1.0 / 252.0;
  double gamma = 0.0;
  double drift_lo = -0.05;
  double drift_hi = 0.05;
  double vol_lo = 0.15;
  double vol_hi = 0.45;
  std::uint64_t seed = 0;
};

int run_simulate_atlas(const AtlasArgs& args) {
  PhaseTimer timer;
  AtlasParams params = AtlasParams::defaults(args.stocks, args.days);
  params.dt = args.dt;
  params.base_drift = args.gamma;
  params.seed = args.seed;
  for (int r = 0; r < args.stocks; ++r) {
    const double u = args.stocks == 1 ? 0.0 : static_cast<double>(r) / (args.stocks - 1);
    params.rank_drifts[r] = args.drift_lo + (args.drift_hi - args.drift_lo) * u;
    params.rank_vols[r] = args.vol_lo + (args.vol_hi - args.vol_lo) * u;
  }

  timer.start("simulate");
  const AtlasPanel panel = atlas_simulate(params);
  const Eigen::MatrixXd by_rank = ranked_returns(panel);
  timer.stop();

  timer.start("write");
  ensure_out_dir(args.out_dir);
  const std::filesystem::path out(args.out_dir);
  csv::write_matrix(out / "returns.csv", panel.returns,
                    {"columns: arithmetic daily return per stock; one row per day"});

  std::ostringstream caps;
  caps << "# columns: date,asset,cap\n";
  for (Eigen::Index day = 0; day < panel.caps.rows(); ++day) {
    for (Eigen::Index i = 0; i < panel.caps.cols(); ++i) {
      caps << (day + 1) << ',' << (i + 1) << ',' << csv::format_double(panel.caps(day, i))
           << "\n";
    }
  }
  csv::write_text(out / "caps.csv", caps.str());

  std::ostringstream ranked;
  ranked << "# columns: group_id,value (group = capitalization rank, 1 = largest)\n";
  for (Eigen::Index r = 0; r < by_rank.cols(); ++r) {
    for (Eigen::Index day = 0; day < by_rank.rows(); ++day) {
      ranked << (r + 1) << ',' << csv::format_double(by_rank(day, r)) << "\n";
    }
  }
  csv::write_text(out / "ranked_returns.csv", ranked.str());
  timer.stop();

  json config{{"subcommand", "simulate-atlas"}, {"out", args.out_dir},
              {"stocks", args.stocks}, {"days", args.days}, {"dt", args.dt},
              {"gamma", args.gamma}, {"drift_lo", args.drift_lo}, {"drift_hi", args.drift_hi},
              {"vol_lo", args.vol_lo}, {"vol_hi", args.vol_hi}, {"seed", args.seed}};
  write_report(out, config, json::array(), timer);
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Nested convex PCA on polyhedral domains, with Wasserstein-GPCA and "
               "Aitchison front-ends"};
  app.require_subcommand(1);

  FitArgs fit_args;
  CLI::App* fit_cmd = app.add_subcommand("fit", "generic polyhedral CPCA on point data");
  fit_cmd->add_option("--points", fit_args.points, "N x d points CSV")->required();
  fit_cmd->add_option("--constraints", fit_args.constraints, "m x (d+1) [A | b] CSV")->required();
  fit_cmd->add_option("--out", fit_args.out_dir, "output directory")->required();
  fit_cmd->add_option("--ref", fit_args.ref_policy, "reference policy: mean, barycenter or file")
      ->check(CLI::IsMember({"mean", "barycenter", "file"}))
      ->capture_default_str();
  fit_cmd->add_option("--ref-file", fit_args.ref_file, "1 x d reference point CSV");
  attach_solver_opts(fit_cmd, fit_args.solver, 1);

  ProjectArgs project_args;
  CLI::App* project_cmd =
      app.add_subcommand("project", "apply a saved basis to new data points");
  project_cmd->add_option("--points", project_args.points, "N x d points CSV")->required();
  project_cmd->add_option("--constraints", project_args.constraints, "m x (d+1) CSV")->required();
  project_cmd->add_option("--components", project_args.components, "components.csv from fit")
      ->required();
  project_cmd->add_option("--reference", project_args.reference, "reference.csv from fit")
      ->required();
  project_cmd->add_option("--out", project_args.out_dir, "output directory")->required();
  project_cmd->add_option("--threads", project_args.threads, "parallelism hint")
      ->envname("CPCA_THREADS")
      ->capture_default_str();

  WgpcaArgs wgpca_args;
  CLI::App* wgpca_cmd =
      app.add_subcommand("wgpca", "Wasserstein geodesic PCA of sampled distributions");
  wgpca_cmd->add_option("--samples", wgpca_args.samples, "long CSV: group_id,value")->required();
  wgpca_cmd->add_option("--out", wgpca_args.out_dir, "output directory")->required();
  wgpca_cmd->add_option("--grid-n", wgpca_args.grid_n, "dyadic grid level (2^n cells)")
      ->capture_default_str();
  wgpca_cmd->add_option("--margin", wgpca_args.margin, "margin added around the sample range")
      ->capture_default_str();
  wgpca_cmd->add_option("--a", wgpca_args.a, "interval lower end (overrides the sample range)");
  wgpca_cmd->add_option("--b", wgpca_args.b, "interval upper end (overrides the sample range)");
  wgpca_cmd->add_option("--curve-eps", wgpca_args.curve_eps,
                        "perturbation half-width (0 = 2 x coefficient std)")
      ->capture_default_str();
  wgpca_cmd->add_option("--curve-steps", wgpca_args.curve_steps, "points per perturbation curve")
      ->capture_default_str();
  attach_solver_opts(wgpca_cmd, wgpca_args.solver, 2);

  AitchisonArgs aitchison_args;
  CLI::App* aitchison_cmd =
      app.add_subcommand("aitchison", "CPCA of ranked market weights in Aitchison geometry");
  aitchison_cmd->add_option("--caps", aitchison_args.caps, "long CSV: date,asset,cap")
      ->required();
  aitchison_cmd->add_option("--out", aitchison_args.out_dir, "output directory")->required();
  aitchison_cmd->add_option("--lambda", aitchison_args.lambda, "diversity exponent in (0,1)")
      ->capture_default_str();
  aitchison_cmd
      ->add_option("--zero-policy", aitchison_args.zero_policy,
                   "nonpositive capitalizations: error or floor")
      ->check(CLI::IsMember({"error", "floor"}))
      ->capture_default_str();
  aitchison_cmd->add_option("--zero-floor", aitchison_args.zero_floor,
                            "replacement value under --zero-policy floor")
      ->capture_default_str();
  attach_solver_opts(aitchison_cmd, aitchison_args.solver, 2);

  AtlasArgs atlas_args;
  CLI::App* atlas_cmd =
      app.add_subcommand("simulate-atlas", "synthetic rank-based market panel");
  atlas_cmd->add_option("--out", atlas_args.out_dir, "output directory")->required();
  atlas_cmd->add_option("--stocks", atlas_args.stocks, "number of stocks")->capture_default_str();
  atlas_cmd->add_option("--days", atlas_args.days, "number of days")->capture_default_str();
  atlas_cmd->add_option("--dt", atlas_args.dt, "time step in years")->capture_default_str();
  atlas_cmd->add_option("--gamma", atlas_args.gamma, "common drift")->capture_default_str();
  atlas_cmd->add_option("--drift-lo", atlas_args.drift_lo, "drift of the largest-stock rank")
      ->capture_default_str();
  atlas_cmd->add_option("--drift-hi", atlas_args.drift_hi, "drift of the smallest-stock rank")
      ->capture_default_str();
  atlas_cmd->add_option("--vol-lo", atlas_args.vol_lo, "volatility of the largest-stock rank")
      ->capture_default_str();
  atlas_cmd->add_option("--vol-hi", atlas_args.vol_hi, "volatility of the smallest-stock rank")
      ->capture_default_str();
  atlas_cmd->add_option("--seed", atlas_args.seed, "RNG seed")->capture_default_str();

  std::vector<std::string> full = args;
  full.insert(full.begin(), "cpca");
  std::vector<const char*> argv;
  argv.reserve(full.size());
  for (const std::string& s : full) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (app.got_subcommand(fit_cmd)) return run_fit(fit_args);
    if (app.got_subcommand(project_cmd)) return run_project(project_args);
    if (app.got_subcommand(wgpca_cmd)) return run_wgpca(wgpca_args);
    if (app.got_subcommand(aitchison_cmd)) return run_aitchison(aitchison_args);
    if (app.got_subcommand(atlas_cmd)) return run_simulate_atlas(atlas_args);
  } catch (const NotConverged& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace cpca
