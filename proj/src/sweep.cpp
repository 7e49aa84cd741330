#include "pmeround/sweep.hpp"

#include <cmath>

#include "pmeround/game.hpp"
#include "pmeround/rounding.hpp"

namespace pmeround {

ExponentFit fit_exponent(const std::vector<Real>& xs, const std::vector<Real>& ys) {
  if (xs.size() != ys.size())
    fail(ErrorCode::DimensionMismatch, "fit inputs have different lengths");
  if (xs.size() < 2)
    fail(ErrorCode::InsufficientData, "exponent fit needs at least two points");
  const int n = static_cast<int>(xs.size());
  Real sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0))
      fail(ErrorCode::NonPositive, "exponent fit needs positive data");
    Real lx = std::log(xs[i]);
    Real ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  Real denom = n * sxx - sx * sx;
  if (std::abs(denom) < 1e-12)
    fail(ErrorCode::InsufficientData, "exponent fit needs distinct abscissae");
  ExponentFit fit;
  fit.c = (n * sxy - sx * sy) / denom;
  fit.C = std::exp((sy - fit.c * sx) / n);
  return fit;
}

SweepResult run_sweep(const SweepConfig& config) {
  if (config.levels.empty())
    fail(ErrorCode::InvalidArgument, "sweep needs at least one level");
  for (size_t i = 0; i < config.levels.size(); ++i) {
    if (!(config.levels[i] >= 0.0 && config.levels[i] <= 1.0))
      fail(ErrorCode::InvalidArgument, "sweep level outside [0, 1]");
    if (i > 0 && !(config.levels[i] < config.levels[i - 1]))
      fail(ErrorCode::InvalidArgument, "sweep levels must be strictly decreasing");
  }

  BuiltinGame bg = builtin_game(config.builtin_name);
  RVec nu_x = marginal_x(bg.game.nu);
  const int n = static_cast<int>(nu_x.size());
  RMat tilde(n, n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) tilde(x, y) = nu_x(x) * nu_x(y);

  SweepResult result;
  result.seed = config.seed;
  for (Real level : config.levels) {
    NoiseModel model{config.noise, level, config.seed};
    Strategy noisy = generate(config.builtin_name, model);
    RoundResult rr = projection_round(bg.game, noisy);

    SweepRow row;
    row.level = level;
    row.epsilon = rr.epsilon;
    row.delta_sync = rr.decomposition.diagnostics.delta_sync_in;
    row.delta_prime = rr.decomposition.diagnostics.delta_prime;
    row.commutation_defect = rr.decomposition.diagnostics.commutation_defect;
    row.residual = rr.decomposition.diagnostics.residual;
    row.mixture_value = rr.mixture_value;
    row.self_consistency = rr.self_consistency;
    row.l1_gap =
        mixture_correlation(rr.decomposition, rr.symmetrized.as_strategy(), tilde).l1_gap;
    result.rows.push_back(row);
  }

  auto fit_over = [&](auto key_x, auto key_y) -> std::optional<ExponentFit> {
    std::vector<Real> xs, ys;
    for (const auto& row : result.rows) {
      Real x = key_x(row);
      Real y = key_y(row);
      if (x > 0.0 && y > 0.0 && std::isfinite(x) && std::isfinite(y)) {
        xs.push_back(x);
        ys.push_back(y);
      }
    }
    if (xs.size() < 2) return std::nullopt;
    return fit_exponent(xs, ys);
  };
  result.residual_fit = fit_over([](const SweepRow& r) { return r.delta_sync; },
                                 [](const SweepRow& r) { return r.residual; });
  result.mixture_fit = fit_over([](const SweepRow& r) { return r.epsilon; },
                                [](const SweepRow& r) { return 1.0 - r.mixture_value; });
  return result;
}

}  // namespace pmeround
