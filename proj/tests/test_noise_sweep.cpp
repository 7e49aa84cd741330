// Noise models over the builtin reference strategies and the sweep driver
// with its empirical exponent fits.
#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "pmeround/game.hpp"
#include "pmeround/linalg.hpp"
#include "pmeround/noise.hpp"
#include "pmeround/strategy.hpp"
#include "pmeround/sweep.hpp"

using namespace pmeround;

namespace {

constexpr Real kTight = 1e-12;

bool strategies_identical(const Strategy& a, const Strategy& b) {
  if ((a.state.amplitudes - b.state.amplitudes).norm() != 0.0) return false;
  for (const auto& [fa, fb] : {std::pair{&a.alice, &b.alice}, std::pair{&a.bob, &b.bob}}) {
    if (fa->questions != fb->questions) return false;
    for (int x = 0; x < fa->size(); ++x)
      for (int o = 0; o < fa->measurements[x].size(); ++o)
        if (frob(fa->measurements[x].elements[o] - fb->measurements[x].elements[o]) != 0.0)
          return false;
  }
  return true;
}

}  // namespace

TEST_CASE("noise kind names round-trip") {
  for (NoiseKind k :
       {NoiseKind::depolarize_state, NoiseKind::smooth_povm, NoiseKind::rotate_measurements})
    REQUIRE(noise_kind_from_string(noise_kind_name(k)) == k);
  REQUIRE_THROWS_AS(noise_kind_from_string("white_noise"), Error);
}

TEST_CASE("level zero reproduces the reference strategy bit for bit") {
  for (const char* name : {"chsh", "magic_square"}) {
    Strategy reference = builtin_game(name).reference;
    for (NoiseKind k :
         {NoiseKind::depolarize_state, NoiseKind::smooth_povm, NoiseKind::rotate_measurements})
      REQUIRE(strategies_identical(generate(name, {k, 0.0, 7}), reference));
  }
}

TEST_CASE("generate validates its inputs") {
  REQUIRE_THROWS_AS(generate("chsh", {NoiseKind::depolarize_state, -0.1, 0}), Error);
  REQUIRE_THROWS_AS(generate("chsh", {NoiseKind::depolarize_state, 1.5, 0}), Error);
  REQUIRE_THROWS_AS(generate("nonsense", {NoiseKind::depolarize_state, 0.1, 0}), Error);
}

TEST_CASE("depolarizing the state interpolates toward the mixed-state value") {
  for (const char* name : {"chsh", "magic_square"}) {
    BuiltinGame bg = builtin_game(name);
    Real v0 = game_value(bg.game, bg.reference);
    for (Real p : {0.1, 0.3, 1.0}) {
      Strategy noisy = generate(name, {NoiseKind::depolarize_state, p, 0});
      // Split-environment purification doubles each local register.
      REQUIRE(noisy.state.d_a == bg.reference.state.d_a * bg.reference.state.d_a);
      REQUIRE(noisy.state.d_b == bg.reference.state.d_b * bg.reference.state.d_b);
      // Both builtin games score exactly 1/2 on the maximally mixed state.
      REQUIRE(std::abs(game_value(bg.game, noisy) - ((1.0 - p) * v0 + 0.5 * p)) <= 1e-9);
      // The lifted measurements stay projective (A tensor Id).
      for (const auto& m : noisy.alice.measurements) REQUIRE(is_projective(m));
    }
  }
}

TEST_CASE("smoothing the POVM interpolates toward flat measurements") {
  BuiltinGame chsh = builtin_game("chsh");
  Strategy flat = generate("chsh", {NoiseKind::smooth_povm, 1.0, 0});
  REQUIRE(std::abs(game_value(chsh.game, flat) - 0.5) <= 1e-9);
  for (const auto& m : flat.alice.measurements) {
    REQUIRE(m.kind == MeasurementKind::general);
    for (const auto& e : m.elements)
      REQUIRE(frob(e - Mat::Identity(2, 2) * 0.5) <= kTight);
  }

  Strategy mild = generate("chsh", {NoiseKind::smooth_povm, 0.25, 0});
  REQUIRE(mild.state.d_a == 2);  // the state is untouched
  for (int x = 0; x < 2; ++x)
    for (int a = 0; a < 2; ++a) {
      Mat expected = 0.75 * chsh.reference.alice.measurements[x].elements[a] +
                     0.25 * Mat::Identity(2, 2) / 2.0;
      REQUIRE(frob(mild.alice.measurements[x].elements[a] - expected) <= kTight);
    }
}

TEST_CASE("rotating measurements is seeded, Alice-only and projective") {
  Strategy a = generate("chsh", {NoiseKind::rotate_measurements, 0.3, 11});
  Strategy b = generate("chsh", {NoiseKind::rotate_measurements, 0.3, 11});
  REQUIRE(strategies_identical(a, b));

  Strategy reference = builtin_game("chsh").reference;
  for (int y = 0; y < 2; ++y)
    for (int o = 0; o < 2; ++o)
      REQUIRE(frob(a.bob.measurements[y].elements[o] -
                   reference.bob.measurements[y].elements[o]) == 0.0);
  bool moved = false;
  for (int x = 0; x < 2; ++x)
    for (int o = 0; o < 2; ++o) {
      REQUIRE(is_projective(a.alice.measurements[x]));
      if (frob(a.alice.measurements[x].elements[o] -
               reference.alice.measurements[x].elements[o]) > 1e-6)
        moved = true;
    }
  REQUIRE(moved);

  Strategy other_seed = generate("chsh", {NoiseKind::rotate_measurements, 0.3, 12});
  REQUIRE_FALSE(strategies_identical(a, other_seed));

  // Unitary conjugation cannot raise the game value above the optimum.
  BuiltinGame chsh = builtin_game("chsh");
  REQUIRE(game_value(chsh.game, a) <= game_value(chsh.game, reference) + 1e-12);
}

TEST_CASE("fit_exponent recovers power laws and validates input") {
  std::vector<Real> xs = {0.1, 0.2, 0.4, 0.8};
  std::vector<Real> ys;
  for (Real x : xs) ys.push_back(4.0 * std::sqrt(x));
  ExponentFit fit = fit_exponent(xs, ys);
  REQUIRE(std::abs(fit.c - 0.5) <= 1e-9);
  REQUIRE(std::abs(fit.C - 4.0) <= 1e-9);

  ExponentFit linear = fit_exponent(xs, xs);
  REQUIRE(std::abs(linear.c - 1.0) <= 1e-9);
  REQUIRE(std::abs(linear.C - 1.0) <= 1e-9);

  REQUIRE_THROWS_AS(fit_exponent({0.1, 0.2}, {0.1}), Error);
  REQUIRE_THROWS_AS(fit_exponent({0.1}, {0.1}), Error);
  REQUIRE_THROWS_AS(fit_exponent({0.1, 0.0}, {0.1, 0.2}), Error);
  REQUIRE_THROWS_AS(fit_exponent({0.1, 0.2}, {0.1, -0.2}), Error);
  REQUIRE_THROWS_AS(fit_exponent({0.5, 0.5}, {0.1, 0.2}), Error);
}

TEST_CASE("run_sweep on depolarized CHSH matches the closed forms") {
  SweepConfig config;
  config.builtin_name = "chsh";
  config.noise = NoiseKind::depolarize_state;
  config.levels = {0.2, 0.1};
  SweepResult result = run_sweep(config);
  REQUIRE(result.rows.size() == 2);

  const Real v0 = (2.0 + std::sqrt(2.0)) / 4.0;
  for (size_t i = 0; i < result.rows.size(); ++i) {
    const SweepRow& row = result.rows[i];
    Real p = config.levels[i];
    REQUIRE(std::abs(row.epsilon - (1.0 - ((1.0 - p) * v0 + 0.5 * p))) <= 1e-9);
    // Depolarization at weight p costs exactly p/2 in Alice self-agreement.
    REQUIRE(std::abs(row.delta_sync - 0.5 * p) <= 1e-9);
    REQUIRE(row.commutation_defect <=
            2.0 * std::sqrt(2.0 * std::max(Real(0), row.delta_prime)) + 1e-8);
    REQUIRE((1.0 - row.epsilon) * (1.0 - row.epsilon) <= row.self_consistency + 1e-8);
  }
  // Less noise, better rounding.
  REQUIRE(result.rows[1].residual < result.rows[0].residual);
  REQUIRE(result.rows[1].l1_gap < result.rows[0].l1_gap);
  REQUIRE(result.rows[1].mixture_value > result.rows[0].mixture_value);

  REQUIRE(result.residual_fit.has_value());
  REQUIRE(result.mixture_fit.has_value());
  REQUIRE(result.residual_fit->c > 0.0);
  REQUIRE(result.mixture_fit->c > 0.0);
}

TEST_CASE("run_sweep on depolarized magic square pins the defect rate") {
  SweepConfig config;
  config.builtin_name = "magic_square";
  config.noise = NoiseKind::depolarize_state;
  config.levels = {0.2};
  SweepResult result = run_sweep(config);
  REQUIRE(result.rows.size() == 1);
  REQUIRE(std::abs(result.rows[0].epsilon - 0.1) <= 1e-9);
  // Depolarizing the two-EPR state at weight p costs 3p/4 in self-agreement.
  REQUIRE(std::abs(result.rows[0].delta_sync - 0.15) <= 1e-9);
  REQUIRE_FALSE(result.residual_fit.has_value());
  REQUIRE_FALSE(result.mixture_fit.has_value());
}

TEST_CASE("run_sweep handles the exact level and rejects bad level lists") {
  SweepConfig config;
  config.builtin_name = "magic_square";
  config.noise = NoiseKind::depolarize_state;
  config.levels = {0.0};
  SweepResult result = run_sweep(config);
  REQUIRE(result.rows.size() == 1);
  REQUIRE(result.rows[0].epsilon <= 1e-9);
  REQUIRE(result.rows[0].residual <= 1e-8);
  REQUIRE(result.rows[0].l1_gap <= 1e-6);
  REQUIRE(result.rows[0].mixture_value >= 1.0 - 1e-6);
  REQUIRE_FALSE(result.residual_fit.has_value());

  config.levels = {};
  REQUIRE_THROWS_AS(run_sweep(config), Error);
  config.levels = {0.1, 0.2};
  REQUIRE_THROWS_AS(run_sweep(config), Error);
  config.levels = {0.2, 0.2};
  REQUIRE_THROWS_AS(run_sweep(config), Error);
  config.levels = {1.5};
  REQUIRE_THROWS_AS(run_sweep(config), Error);
  config.builtin_name = "nonsense";
  config.levels = {0.1};
  REQUIRE_THROWS_AS(run_sweep(config), Error);
}
