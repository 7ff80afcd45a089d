#include "cpca/atlas.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

namespace cpca {

AtlasParams AtlasParams::defaults(int n_stocks, int n_days) {
  AtlasParams p;
  p.n_stocks = n_stocks;
  p.n_days = n_days;
  p.rank_drifts.resize(n_stocks);
  p.rank_vols.resize(n_stocks);
  p.initial_log_caps.resize(n_stocks);
  for (int r = 0; r < n_stocks; ++r) {
    const double u = n_stocks == 1 ? 0.0 : static_cast<double>(r) / (n_stocks - 1);
    p.rank_drifts[r] = -0.05 + 0.10 * u;
    p.rank_vols[r] = 0.15 + 0.30 * u;
    p.initial_log_caps[r] = -std::log(static_cast<double>(r + 1));
  }
  return p;
}

void AtlasParams::validate() const {
  if (n_stocks < 1) throw std::invalid_argument("AtlasParams: need at least one stock");
  if (n_days < 1) throw std::invalid_argument("AtlasParams: need at least one day");
  if (!(dt > 0.0)) throw std::invalid_argument("AtlasParams: dt must be positive");
  if (rank_drifts.size() != n_stocks || rank_vols.size() != n_stocks ||
      initial_log_caps.size() != n_stocks) {
    throw std::invalid_argument("AtlasParams: rank parameter lengths must equal n_stocks");
  }
  if (!(rank_vols.minCoeff() > 0.0)) {
    throw std::invalid_argument("AtlasParams: rank volatilities must be positive");
  }
}

namespace {

// Rank permutation by descending capitalization; ties keep index order.
void rank_order(const Eigen::VectorXd& log_caps, std::vector<int>& order) {
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return log_caps[i] > log_caps[j]; });
}

}  // namespace

AtlasPanel atlas_simulate(const AtlasParams& params) {
  params.validate();
  const int n = params.n_stocks;
  const int m = params.n_days;
  const double sqrt_dt = std::sqrt(params.dt);

  AtlasPanel panel;
  panel.returns.resize(m, n);
  panel.caps.resize(m, n);
  panel.initial_caps = params.initial_log_caps.array().exp();

  Eigen::VectorXd log_caps = params.initial_log_caps;
  std::vector<int> order(static_cast<std::size_t>(n));
  std::vector<int> rank_of(static_cast<std::size_t>(n));
  std::mt19937_64 rng(params.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  for (int day = 0; day < m; ++day) {
    rank_order(log_caps, order);
    for (int r = 0; r < n; ++r) rank_of[static_cast<std::size_t>(order[r])] = r;
    for (int i = 0; i < n; ++i) {
      const int r = rank_of[static_cast<std::size_t>(i)];
      const double drift = (params.base_drift + params.rank_drifts[r]) * params.dt;
      const double shock = params.rank_vols[r] * sqrt_dt * gauss(rng);
      const double d_log = drift + shock;
      panel.returns(day, i) = std::expm1(d_log);
      log_caps[i] += d_log;
      panel.caps(day, i) = std::exp(log_caps[i]);
    }
  }
  return panel;
}

Eigen::MatrixXd ranked_returns(const AtlasPanel& panel) {
  const int m = static_cast<int>(panel.returns.rows());
  const int n = static_cast<int>(panel.returns.cols());
  Eigen::MatrixXd out(m, n);
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int day = 0; day < m; ++day) {
    const Eigen::VectorXd start_caps =
        day == 0 ? panel.initial_caps : Eigen::VectorXd(panel.caps.row(day - 1));
    rank_order(start_caps, order);
    for (int r = 0; r < n; ++r) out(day, r) = panel.returns(day, order[static_cast<std::size_t>(r)]);
  }
  return out;
}

}  // namespace cpca
