// JSON/CSV interchange. Writers emit keys in a fixed order and serialize all
// reals with 17 significant digits so reruns are byte-identical and round
// trips are lossless; complex entries travel as [re, im] pairs and matrices
// as row-major nested arrays.
#pragma once

#include <cstdint>
#include <string>

#include "pmeround/game.hpp"
#include "pmeround/rounding.hpp"
#include "pmeround/strategy.hpp"
#include "pmeround/sweep.hpp"

namespace pmeround {

std::string format_real(Real v);  // %.17g

std::string strategy_to_json(const Strategy& s);
Strategy strategy_from_json(const std::string& text);

std::string game_to_json(const NonlocalGame& g);
NonlocalGame game_from_json(const std::string& text);

// Aligns a parsed strategy's question/outcome labels with the game tables
// (lookup by label, order-insensitive).
Strategy align_strategy_with_game(const Strategy& s, const NonlocalGame& g);

std::string game_report_to_json(const GameReport& r, std::uint64_t seed);

// Decomposition report: weights, step ranks, diagnostics, per-step value
// table plus the game-level summary fields when a game was supplied.
struct DecompositionReport {
  PMEDecomposition decomposition;
  std::vector<Real> per_step_values;
  std::optional<Real> mixture_value;
  std::optional<Real> epsilon;
  std::optional<Real> self_consistency;
  std::optional<Real> l1_gap;
};

std::string decomposition_report_to_json(const DecompositionReport& r, std::uint64_t seed);

std::string sweep_to_csv(const SweepResult& r);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace pmeround
