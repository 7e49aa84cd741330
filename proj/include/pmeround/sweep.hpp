// Noise sweeps over the builtin games with empirical exponent fits.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pmeround/base.hpp"
#include "pmeround/noise.hpp"

namespace pmeround {

struct SweepConfig {
  std::string builtin_name;    // chsh | magic_square
  NoiseKind noise = NoiseKind::depolarize_state;
  std::uint64_t seed = 0;
  std::vector<Real> levels;    // nonempty, strictly decreasing
};

struct SweepRow {
  Real level = 0.0;
  Real epsilon = 0.0;      // 1 - game value
  Real delta_sync = 0.0;   // of the symmetrized Alice strategy
  Real delta_prime = 0.0;
  Real commutation_defect = 0.0;
  Real residual = 0.0;
  Real l1_gap = 0.0;
  Real mixture_value = 0.0;

  // Eq.-level tripwire: (1 - epsilon)^2 <= self consistency + slack must hold
  // on every row; carried so the acceptance harness can assert it.
  Real self_consistency = 0.0;
};

struct ExponentFit {
  Real c = 0.0;  // exponent
  Real C = 0.0;  // prefactor, y ~ C x^c
};

// Least squares of log y against log x.
ExponentFit fit_exponent(const std::vector<Real>& xs, const std::vector<Real>& ys);

struct SweepResult {
  std::vector<SweepRow> rows;
  std::optional<ExponentFit> residual_fit;  // residual vs delta_sync
  std::optional<ExponentFit> mixture_fit;   // 1 - mixture_value vs epsilon
  std::uint64_t seed = 0;
};

SweepResult run_sweep(const SweepConfig& config);

}  // namespace pmeround
