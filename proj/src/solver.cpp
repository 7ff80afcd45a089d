#include "cpca/solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <thread>

namespace cpca {

namespace {

// Contiguous block split of [0, n) across a thread pool. Per-index work must
// be independent; callers own the determinism of any reduction.
void parallel_for(int n, int threads, const std::function<void(int, int)>& body) {
  if (threads <= 1 || n < 256) {
    body(0, n);
    return;
  }
  const int workers = std::min<int>(threads, n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const int chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const int lo = w * chunk;
    const int hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back(body, lo, hi);
  }
  for (auto& t : pool) t.join();
}

void fix_sign(Eigen::VectorXd& v) {
  int idx = 0;
  v.cwiseAbs().maxCoeff(&idx);
  if (v[idx] < 0.0) v = -v;
}

// Fast [t0, t1] without tie bookkeeping; ref_residual = A xbar - b.
void segment_bounds_core(const Eigen::MatrixXd& a, const Eigen::VectorXd& ref_residual,
                         const Eigen::VectorXd& p, double& t0, double& t1) {
  t0 = -std::numeric_limits<double>::infinity();
  t1 = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    const double den = a.row(i).dot(p);
    if (den == 0.0) continue;  // line parallel to this hyperplane
    const double alpha = -ref_residual[i] / den;
    // The sign of A_i^T p says which side the hyperplane caps. This agrees
    // with the sign of alpha for an interior reference and keeps t0 <= 0 <= t1
    // when the reference sits on a facet (alpha within rounding of 0).
    if (den > 0.0) {
      t0 = std::max(t0, std::min(alpha, 0.0));
    } else {
      t1 = std::min(t1, std::max(alpha, 0.0));
    }
  }
}

double clamp_coeff(double c, double t0, double t1) { return std::min(std::max(c, t0), t1); }

}  // namespace

double pairwise_sum(const double* data, std::ptrdiff_t n) {
  if (n <= 32) {
    double s = 0.0;
    for (std::ptrdiff_t i = 0; i < n; ++i) s += data[i];
    return s;
  }
  const std::ptrdiff_t half = n / 2;
  return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}

double pairwise_sum(const Eigen::VectorXd& v) { return pairwise_sum(v.data(), v.size()); }

Eigen::VectorXd pairwise_row_sum(const Eigen::MatrixXd& rows) {
  const Eigen::Index n = rows.rows();
  Eigen::VectorXd out(rows.cols());
  Eigen::VectorXd column(n);
  for (Eigen::Index j = 0; j < rows.cols(); ++j) {
    column = rows.col(j);
    out[j] = pairwise_sum(column.data(), n);
  }
  return out;
}

CpcaProblem::CpcaProblem(Eigen::MatrixXd data, Eigen::VectorXd reference, PolyhedralSet domain)
    : data_(std::move(data)), reference_(std::move(reference)), domain_(std::move(domain)) {
  const Eigen::Index n = data_.rows();
  const Eigen::Index d = data_.cols();
  if (n < 1) throw std::invalid_argument("CpcaProblem: need at least one data point");
  if (reference_.size() != d || domain_.dim() != d) {
    throw std::invalid_argument("CpcaProblem: dimension mismatch between data, reference, domain");
  }
  if (!domain_.contains(reference_)) {
    throw std::invalid_argument("CpcaProblem: reference point is infeasible");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!domain_.contains(data_.row(i).transpose())) {
      throw std::invalid_argument("CpcaProblem: data row " + std::to_string(i) +
                                  " violates the domain constraints");
    }
  }
  centered_ = data_.rowwise() - reference_.transpose();
  sq_norms_ = centered_.rowwise().squaredNorm();
  ref_residual_ = domain_.constraint_count() > 0
                      ? Eigen::VectorXd(domain_.residual(reference_))
                      : Eigen::VectorXd(0);
  total_variation_ = pairwise_sum(sq_norms_) / static_cast<double>(n);
  reference_on_boundary_ =
      ref_residual_.size() > 0 && ref_residual_.minCoeff() <= kFeasibilityTol;
}

SegmentBounds boundary_coefficients(const PolyhedralSet& domain, const Eigen::VectorXd& xbar,
                                    const Direction& p) {
  if (!domain.contains(xbar)) {
    throw std::invalid_argument("boundary_coefficients: xbar is infeasible");
  }
  const Eigen::MatrixXd& a = domain.a_matrix();
  const Eigen::VectorXd res = domain.constraint_count() > 0 ? Eigen::VectorXd(domain.residual(xbar))
                                                            : Eigen::VectorXd(0);
  SegmentBounds bounds;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    const double den = a.row(i).dot(p.vector());
    if (den == 0.0) continue;
    const double alpha = -res[i] / den;
    if (den > 0.0) {
      const double cand = std::min(alpha, 0.0);
      const double tol = 1e-9 * std::max(1.0, std::abs(bounds.t0));
      if (bounds.t0_row >= 0 && std::abs(cand - bounds.t0) <= tol) bounds.t0_tied = true;
      if (cand > bounds.t0) {
        if (bounds.t0_row >= 0 && cand - bounds.t0 > tol) bounds.t0_tied = false;
        bounds.t0 = cand;
        bounds.t0_row = static_cast<int>(i);
      }
    } else {
      const double cand = std::max(alpha, 0.0);
      const double tol = 1e-9 * std::max(1.0, std::abs(bounds.t1));
      if (bounds.t1_row >= 0 && std::abs(cand - bounds.t1) <= tol) bounds.t1_tied = true;
      if (cand < bounds.t1) {
        if (bounds.t1_row >= 0 && bounds.t1 - cand > tol) bounds.t1_tied = false;
        bounds.t1 = cand;
        bounds.t1_row = static_cast<int>(i);
      }
    }
  }
  return bounds;
}

SegmentProjection project_to_segment(const Eigen::VectorXd& x, const Eigen::VectorXd& xbar,
                                     const Direction& p, const SegmentBounds& bounds) {
  SegmentProjection out;
  const double c = (x - xbar).dot(p.vector());
  out.a_star = clamp_coeff(c, bounds.t0, bounds.t1);
  out.z_star = xbar + out.a_star * p.vector();
  out.sq_dist = (x - out.z_star).squaredNorm();
  return out;
}

double value_function(const CpcaProblem& problem, const Direction& p, int threads) {
  if (p.dim() != problem.dim()) {
    throw std::invalid_argument("value_function: direction dimension mismatch");
  }
  double t0, t1;
  segment_bounds_core(problem.domain().a_matrix(), problem.reference_residual(), p.vector(), t0,
                      t1);
  const Eigen::MatrixXd& centered = problem.centered();
  const int n = problem.n_points();
  Eigen::VectorXd sq(n);
  const Eigen::VectorXd& pv = p.vector();
  parallel_for(n, threads, [&](int lo, int hi) {
    for (int i = lo; i < hi; ++i) {
      const double a = clamp_coeff(centered.row(i).dot(pv), t0, t1);
      sq[i] = (centered.row(i).transpose() - a * pv).squaredNorm();
    }
  });
  return pairwise_sum(sq) / static_cast<double>(n);
}

void FitConfig::validate() const {
  if (k < 1) throw std::invalid_argument("FitConfig: k must be >= 1");
  if (!(grad_tol > 0.0) || !(obj_tol > 0.0) || !(fd_step > 0.0)) {
    throw std::invalid_argument("FitConfig: tolerances and fd_step must be positive");
  }
  if (max_iter < 1) throw std::invalid_argument("FitConfig: max_iter must be >= 1");
  if (restarts < 0) throw std::invalid_argument("FitConfig: restarts must be >= 0");
  if (threads < 1) throw std::invalid_argument("FitConfig: threads must be >= 1");
}

namespace {

double composed_value(const CpcaProblem& problem, const OrthonormalBasis& basis,
                      const Eigen::VectorXd& theta, int threads) {
  const Direction w = omega(SphericalAngles(theta));
  return value_function(problem, Direction::normalized(basis.columns() * w.vector()), threads);
}

}  // namespace

Eigen::VectorXd value_gradient_fd(const CpcaProblem& problem, const SphericalAngles& theta,
                                  const OrthonormalBasis& basis, double fd_step, int threads) {
  const int q = theta.size();
  if (basis.count() != q + 1) {
    throw std::invalid_argument("value_gradient_fd: basis/theta size mismatch");
  }
  Eigen::VectorXd grad(q);
  Eigen::VectorXd probe = theta.vector();
  for (int j = 0; j < q; ++j) {
    const double saved = probe[j];
    probe[j] = saved + fd_step;
    const double up = composed_value(problem, basis, probe, threads);
    probe[j] = saved - fd_step;
    const double down = composed_value(problem, basis, probe, threads);
    probe[j] = saved;
    grad[j] = (up - down) / (2.0 * fd_step);
  }
  return grad;
}

AnalyticGradient value_gradient_analytic(const CpcaProblem& problem, const Direction& p,
                                         int threads) {
  if (p.dim() != problem.dim()) {
    throw std::invalid_argument("value_gradient_analytic: direction dimension mismatch");
  }
  const SegmentBounds bounds = boundary_coefficients(problem.domain(), problem.reference(), p);
  const Eigen::MatrixXd& centered = problem.centered();
  const Eigen::MatrixXd& a_mat = problem.domain().a_matrix();
  const Eigen::VectorXd& pv = p.vector();
  const int n = problem.n_points();
  const int d = problem.dim();

  const double den_t0 = bounds.t0_row >= 0 ? a_mat.row(bounds.t0_row).dot(pv) : 0.0;
  const double den_t1 = bounds.t1_row >= 0 ? a_mat.row(bounds.t1_row).dot(pv) : 0.0;

  AnalyticGradient out;
  out.multipliers = Eigen::VectorXd::Zero(n);
  out.binding_row.assign(n, -1);
  Eigen::MatrixXd contrib(n, d);
  std::vector<std::uint8_t> nonsmooth_flags(n, 0);

  parallel_for(n, threads, [&](int lo, int hi) {
    for (int i = lo; i < hi; ++i) {
      const double c = centered.row(i).dot(pv);
      double a = c;
      int row = -1;
      double den = 0.0;
      bool tied = false;
      if (c > bounds.t1) {
        a = bounds.t1;
        row = bounds.t1_row;
        den = den_t1;
        tied = bounds.t1_tied;
      } else if (c < bounds.t0) {
        a = bounds.t0;
        row = bounds.t0_row;
        den = den_t0;
        tied = bounds.t0_tied;
      }
      // grad_p J_i at the saddle point; lambda adds the binding constraint.
      contrib.row(i) = -2.0 * a * (centered.row(i) - a * pv.transpose());
      if (row >= 0) {
        if (tied) nonsmooth_flags[i] = 1;
        const double lambda = 2.0 * (c - a) / (-den);
        out.multipliers[i] = lambda;
        out.binding_row[i] = row;
        contrib.row(i) -= (a * lambda) * a_mat.row(row);
      }
    }
  });

  for (int i = 0; i < n; ++i) {
    if (nonsmooth_flags[i]) {
      out.nonsmooth = true;
      out.first_nonsmooth_point = i;
      break;
    }
  }
  out.gradient = pairwise_row_sum(contrib) / static_cast<double>(n);
  return out;
}

Direction init_guess(const CpcaProblem& problem, const OrthonormalBasis& previous) {
  if (previous.count() > 0 && previous.dim() != problem.dim()) {
    throw std::invalid_argument("init_guess: basis dimension mismatch");
  }
  const double total = pairwise_sum(problem.centered_sq_norms());
  if (total <= 0.0) {
    throw std::invalid_argument("init_guess: data coincides with the reference point");
  }
  Eigen::MatrixXd projected = problem.centered();
  if (previous.count() > 0) {
    const Eigen::MatrixXd& prev = previous.columns();
    projected -= (projected * prev) * prev.transpose();
  }
  const double total_projected = projected.squaredNorm();
  if (total_projected <= 1e-18 * std::max(1.0, total)) {
    throw std::invalid_argument(
        "init_guess: projected data is zero (data lies in the span of previous components)");
  }
  const Eigen::MatrixXd scatter = projected.transpose() * projected;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(scatter);
  if (eig.info() != Eigen::Success) {
    throw std::runtime_error("init_guess: eigendecomposition failed");
  }
  Eigen::VectorXd v = eig.eigenvectors().col(problem.dim() - 1);
  if (previous.count() > 0) {
    const Eigen::MatrixXd& prev = previous.columns();
    v -= prev * (prev.transpose() * v);
  }
  fix_sign(v);
  return Direction::normalized(v);
}

namespace {

struct BfgsOutcome {
  Eigen::VectorXd theta;
  double value = std::numeric_limits<double>::infinity();
  int iterations = 0;
  bool converged = false;
  int fd_fallbacks = 0;
};

Eigen::VectorXd objective_gradient(const CpcaProblem& problem, const OrthonormalBasis& basis,
                                   const Eigen::VectorXd& theta, const FitConfig& config,
                                   int* fd_fallbacks) {
  if (config.gradient == GradientMode::kAnalytic) {
    const SphericalAngles ang(theta);
    const Direction p = Direction::normalized(basis.columns() * omega(ang).vector());
    const AnalyticGradient ag = value_gradient_analytic(problem, p, config.threads);
    if (!ag.nonsmooth) {
      return omega_jacobian(ang).transpose() * (basis.columns().transpose() * ag.gradient);
    }
    if (fd_fallbacks) ++(*fd_fallbacks);
  }
  return value_gradient_fd(problem, SphericalAngles(theta), basis, config.fd_step,
                           config.threads);
}

BfgsOutcome run_bfgs(const CpcaProblem& problem, const OrthonormalBasis& basis,
                     const Eigen::VectorXd& theta0, const FitConfig& config) {
  constexpr double kArmijoC1 = 1e-4;
  constexpr int kMaxBacktracks = 60;

  BfgsOutcome best;
  const int q = static_cast<int>(theta0.size());
  Eigen::VectorXd theta = theta0;
  double f = composed_value(problem, basis, theta, config.threads);
  Eigen::VectorXd g = objective_gradient(problem, basis, theta, config, &best.fd_fallbacks);
  Eigen::MatrixXd h_inv = Eigen::MatrixXd::Identity(q, q);

  best.theta = theta;
  best.value = f;

  for (int iter = 0; iter < config.max_iter; ++iter) {
    if (g.norm() <= config.grad_tol) {
      best.converged = true;
      break;
    }
    Eigen::VectorXd dir = -(h_inv * g);
    double slope = dir.dot(g);
    if (!(slope < 0.0)) {
      h_inv.setIdentity();
      dir = -g;
      slope = dir.dot(g);
    }
    double step = 1.0;
    double f_new = f;
    bool progressed = false;
    for (int ls = 0; ls < kMaxBacktracks; ++ls) {
      f_new = composed_value(problem, basis, theta + step * dir, config.threads);
      if (f_new <= f + kArmijoC1 * step * slope) {
        progressed = true;
        break;
      }
      step *= 0.5;
    }
    ++best.iterations;
    if (!progressed) break;  // stuck at numerical resolution

    const Eigen::VectorXd theta_new = theta + step * dir;
    Eigen::VectorXd g_new = objective_gradient(problem, basis, theta_new, config,
                                               &best.fd_fallbacks);
    const Eigen::VectorXd s = step * dir;
    const Eigen::VectorXd y = g_new - g;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      const double rho = 1.0 / sy;
      const Eigen::VectorXd hy = h_inv * y;
      // Sherman-Morrison form of the inverse BFGS update.
      h_inv += (sy + y.dot(hy)) * rho * rho * (s * s.transpose());
      h_inv -= rho * (hy * s.transpose() + s * hy.transpose());
    }
    const double change = std::abs(f - f_new);
    theta = theta_new;
    g = std::move(g_new);
    f = f_new;
    if (f < best.value) {
      best.value = f;
      best.theta = theta;
    }
    if (change <= config.obj_tol * std::max(1.0, std::abs(f))) {
      best.converged = true;
      break;
    }
  }
  return best;
}

}  // namespace

ComponentResult fit_component(const CpcaProblem& problem, const OrthonormalBasis& previous,
                              const FitConfig& config) {
  config.validate();
  const int d = problem.dim();
  const int r = previous.count();
  if (d - r < 1) {
    throw std::invalid_argument("fit_component: no dimensions left beyond previous components");
  }
  const Direction p0 = init_guess(problem, previous);
  const double initial_objective = value_function(problem, p0, config.threads);

  ComponentResult result;
  result.diagnostics.initial_objective = initial_objective;

  const OrthonormalBasis basis = orthonormal_complement(previous);
  if (d - r == 1) {
    Eigen::VectorXd dir = basis.columns().col(0);
    fix_sign(dir);
    result.direction = dir;
    result.objective = value_function(problem, Direction(dir), config.threads);
    result.diagnostics.converged = true;
    return result;
  }

  const Eigen::VectorXd w0 =
      Direction::normalized(basis.columns().transpose() * p0.vector()).vector();

  BfgsOutcome best = run_bfgs(problem, basis, angles_of(Direction(w0)).vector(), config);
  int starts = 1;
  std::mt19937_64 rng(config.seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(r + 1)));
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int s = 0; s < config.restarts; ++s) {
    Eigen::VectorXd w(d - r);
    for (int i = 0; i < d - r; ++i) w[i] = gauss(rng);
    if (w.norm() == 0.0) w[0] = 1.0;
    BfgsOutcome trial =
        run_bfgs(problem, basis, angles_of(Direction::normalized(w)).vector(), config);
    ++starts;
    best.fd_fallbacks += trial.fd_fallbacks;
    best.iterations += trial.iterations;
    if (trial.value < best.value) {
      best.value = trial.value;
      best.theta = trial.theta;
      best.converged = trial.converged;
    }
  }

  Eigen::VectorXd dir = basis.columns() * omega(SphericalAngles(best.theta)).vector();
  dir.normalize();
  fix_sign(dir);
  double objective = value_function(problem, Direction(dir), config.threads);
  if (objective > initial_objective) {
    // Rounding guard: never return worse than the warm start.
    dir = p0.vector();
    objective = initial_objective;
  }
  result.direction = dir;
  result.objective = objective;
  result.diagnostics.iterations = best.iterations;
  result.diagnostics.converged = best.converged;
  result.diagnostics.fd_fallbacks = best.fd_fallbacks;
  result.diagnostics.starts = starts;
  return result;
}

PrincipalBasis::PrincipalBasis(Eigen::MatrixXd directions, Eigen::VectorXd objectives,
                               Eigen::VectorXd ev, Eigen::VectorXd reference)
    : directions_(std::move(directions)),
      objectives_(std::move(objectives)),
      ev_(std::move(ev)),
      reference_(std::move(reference)) {
  const Eigen::Index k = directions_.cols();
  if (objectives_.size() != k || ev_.size() != k) {
    throw std::invalid_argument("PrincipalBasis: objectives/ev length must equal k");
  }
  if (reference_.size() != directions_.rows()) {
    throw std::invalid_argument("PrincipalBasis: reference dimension mismatch");
  }
  if (k > 0) {
    Eigen::MatrixXd gram = directions_.transpose() * directions_;
    gram -= Eigen::MatrixXd::Identity(k, k);
    if (gram.cwiseAbs().maxCoeff() > 1e-8) {
      throw std::invalid_argument("PrincipalBasis: directions not orthonormal within 1e-8");
    }
  }
  for (Eigen::Index j = 0; j < k; ++j) {
    if (ev_[j] < -1e-9 || ev_[j] > 1.0 + 1e-9) {
      throw std::invalid_argument("PrincipalBasis: EV outside [0, 1]");
    }
    if (j > 0 && ev_[j] < ev_[j - 1] - 1e-9) {
      throw std::invalid_argument("PrincipalBasis: EV must be non-decreasing");
    }
  }
}

NestedFitResult fit_nested(const CpcaProblem& problem, const FitConfig& config) {
  config.validate();
  const int d = problem.dim();
  if (config.k > d) {
    throw std::invalid_argument("fit_nested: k exceeds the ambient dimension");
  }
  if (!(problem.total_variation() > 0.0)) {
    throw std::invalid_argument("fit_nested: total variation is zero (all data at reference)");
  }
  Eigen::MatrixXd dirs(d, config.k);
  Eigen::VectorXd objectives(config.k);
  std::vector<ComponentDiagnostics> diags;
  bool all_converged = true;
  for (int j = 0; j < config.k; ++j) {
    OrthonormalBasis previous(dirs.leftCols(j));
    ComponentResult res;
    try {
      res = fit_component(problem, previous, config);
    } catch (const std::exception& e) {
      throw std::runtime_error("fit_nested: component " + std::to_string(j + 1) + ": " +
                               e.what());
    }
    dirs.col(j) = res.direction;
    objectives[j] = res.objective;
    all_converged = all_converged && res.diagnostics.converged;
    diags.push_back(res.diagnostics);
  }
  Eigen::VectorXd ev(config.k);
  for (int j = 1; j <= config.k; ++j) {
    ev[j - 1] = explained_variation(problem, dirs, j, config.threads);
  }
  return NestedFitResult{PrincipalBasis(std::move(dirs), std::move(objectives), std::move(ev),
                                        problem.reference()),
                         std::move(diags), all_converged};
}

namespace {

constexpr int kDykstraMaxCycles = 100000;

// Dykstra's alternating projections onto the halfspaces {a : g_i . a >= h_i},
// started from the unconstrained optimum c. Stationarity a = c + sum_i mu_i g_i
// holds by construction, so the stopping rule only checks primal feasibility
// and complementary slackness.
Eigen::VectorXd project_polyhedron_dykstra(const Eigen::MatrixXd& g, const Eigen::VectorXd& h,
                                           const Eigen::VectorXd& c) {
  const Eigen::Index m = g.rows();
  const Eigen::Index j = g.cols();
  Eigen::VectorXd a = c;
  Eigen::MatrixXd corrections = Eigen::MatrixXd::Zero(m, j);
  Eigen::VectorXd g_sq(m);
  std::vector<std::uint8_t> active(m, 1);
  for (Eigen::Index i = 0; i < m; ++i) {
    g_sq[i] = g.row(i).squaredNorm();
    if (g_sq[i] <= 1e-24) active[i] = 0;  // constraint orthogonal to the span
  }
  const double scale = std::max(1.0, c.norm());
  for (int cycle = 0; cycle < kDykstraMaxCycles; ++cycle) {
    for (Eigen::Index i = 0; i < m; ++i) {
      if (!active[i]) continue;
      const Eigen::VectorXd y = a - corrections.row(i).transpose();
      const double viol = h[i] - g.row(i).dot(y);
      if (viol > 0.0) {
        const double step = viol / g_sq[i];
        a = y + step * g.row(i).transpose();
        corrections.row(i) = step * g.row(i);
      } else {
        a = y;
        corrections.row(i).setZero();
      }
    }
    double feas = 0.0;
    double compl_res = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (!active[i]) continue;
      const double slack = g.row(i).dot(a) - h[i];
      feas = std::min(feas, slack);
      const double mu = corrections.row(i).dot(g.row(i)) / g_sq[i];
      compl_res += std::abs(mu * slack);
    }
    if (feas >= -1e-9 * scale && compl_res <= 1e-9 * scale) {
      return a;
    }
  }
  throw NotConverged("project_onto_component_set: projection QP did not converge");
}

}  // namespace

SetProjection project_onto_component_set(const Eigen::VectorXd& x,
                                         const Eigen::MatrixXd& directions,
                                         const Eigen::VectorXd& xbar,
                                         const PolyhedralSet& domain) {
  const Eigen::Index j = directions.cols();
  if (j < 1) throw std::invalid_argument("project_onto_component_set: need at least 1 direction");
  SetProjection out;
  if (j == 1) {
    const Direction p = Direction::normalized(directions.col(0));
    const SegmentBounds bounds = boundary_coefficients(domain, xbar, p);
    const SegmentProjection proj = project_to_segment(x, xbar, p, bounds);
    out.coeffs = Eigen::VectorXd::Constant(1, proj.a_star);
    out.point = proj.z_star;
    return out;
  }
  const Eigen::VectorXd c = directions.transpose() * (x - xbar);
  if (domain.constraint_count() == 0) {
    out.coeffs = c;
    out.point = xbar + directions * c;
    return out;
  }
  const Eigen::MatrixXd g = domain.a_matrix() * directions;
  const Eigen::VectorXd h = domain.b_vector() - domain.a_matrix() * xbar;
  out.coeffs = project_polyhedron_dykstra(g, h, c);
  out.point = xbar + directions * out.coeffs;
  return out;
}

SetProjection project_onto_component_set(const Eigen::VectorXd& x, const PrincipalBasis& basis,
                                         int up_to_j, const PolyhedralSet& domain) {
  if (up_to_j < 1 || up_to_j > basis.k()) {
    throw std::invalid_argument("project_onto_component_set: up_to_j out of range");
  }
  return project_onto_component_set(x, basis.directions().leftCols(up_to_j), basis.reference(),
                                    domain);
}

double explained_variation(const CpcaProblem& problem, const Eigen::MatrixXd& directions,
                           int up_to_j, int threads) {
  if (up_to_j < 0 || up_to_j > directions.cols()) {
    throw std::invalid_argument("explained_variation: up_to_j out of range");
  }
  if (up_to_j == 0) return 0.0;
  const double tv = problem.total_variation();
  if (!(tv > 0.0)) {
    throw std::invalid_argument("explained_variation: total variation is zero");
  }
  const int n = problem.n_points();
  Eigen::VectorXd explained(n);
  if (up_to_j == 1) {
    const Direction p = Direction::normalized(directions.col(0));
    const SegmentBounds bounds = boundary_coefficients(problem.domain(), problem.reference(), p);
    const Eigen::MatrixXd& centered = problem.centered();
    const Eigen::VectorXd& pv = p.vector();
    parallel_for(n, threads, [&](int lo, int hi) {
      for (int i = lo; i < hi; ++i) {
        const double a = clamp_coeff(centered.row(i).dot(pv), bounds.t0, bounds.t1);
        explained[i] = a * a;
      }
    });
  } else {
    const Eigen::MatrixXd p = directions.leftCols(up_to_j);
    parallel_for(n, threads, [&](int lo, int hi) {
      for (int i = lo; i < hi; ++i) {
        const SetProjection proj = project_onto_component_set(
            problem.data().row(i).transpose(), p, problem.reference(), problem.domain());
        explained[i] = (proj.point - problem.reference()).squaredNorm();
      }
    });
  }
  return (pairwise_sum(explained) / static_cast<double>(n)) / tv;
}

Eigen::MatrixXd project_data_coefficients(const CpcaProblem& problem,
                                          const Eigen::MatrixXd& directions, int threads) {
  const int n = problem.n_points();
  const int j = static_cast<int>(directions.cols());
  Eigen::MatrixXd coeffs(n, j);
  parallel_for(n, threads, [&](int lo, int hi) {
    for (int i = lo; i < hi; ++i) {
      const SetProjection proj = project_onto_component_set(
          problem.data().row(i).transpose(), directions, problem.reference(), problem.domain());
      coeffs.row(i) = proj.coeffs;
    }
  });
  return coeffs;
}

}  // namespace cpca
