#ifndef CPCA_ATLAS_HPP
#define CPCA_ATLAS_HPP

#include <cstdint>

#include <Eigen/Dense>

namespace cpca {

/// Rank-based diffusion of log-capitalizations: each day every stock
/// receives the drift and volatility assigned to its current capitalization
/// rank (rank 1 = largest), stepped by Euler-Maruyama.
struct AtlasParams {
  int n_stocks = 101;
  int n_days = 5000;
  double dt = 1.0 / 252.0;
  double base_drift = 0.0;             // common drift gamma
  Eigen::VectorXd rank_drifts;         // g_r, indexed by rank (0 = largest stock)
  Eigen::VectorXd rank_vols;           // sigma_r > 0, increasing toward small stocks
  Eigen::VectorXd initial_log_caps;
  std::uint64_t seed = 0;

  /// Drifts affine in normalized rank over [-0.05, 0.05], vols affine over
  /// [0.15, 0.45] (annualized), Zipf-shaped initial capitalizations.
  static AtlasParams defaults(int n_stocks = 101, int n_days = 5000);

  void validate() const;
};

struct AtlasPanel {
  Eigen::MatrixXd returns;       // M x n arithmetic returns per day and stock
  Eigen::MatrixXd caps;          // M x n capitalizations at the end of each day
  Eigen::VectorXd initial_caps;  // capitalizations before the first day
};

/// Simulate the panel. Reproducible from the seed.
AtlasPanel atlas_simulate(const AtlasParams& params);

/// Returns rearranged by start-of-day capitalization rank: column r holds the
/// daily returns of whichever stock held rank r that morning.
Eigen::MatrixXd ranked_returns(const AtlasPanel& panel);

}  // namespace cpca

#endif  // CPCA_ATLAS_HPP
