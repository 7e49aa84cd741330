// Nonlocal games: tables, value evaluation, structural predicates and the
// built-in benchmark games with hard-coded reference strategies.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pmeround/base.hpp"
#include "pmeround/strategy.hpp"

namespace pmeround {

struct NonlocalGame {
  std::vector<std::string> x_labels, y_labels, a_labels, b_labels;
  RMat nu;                      // |X| x |Y|, nonnegative, sums to 1
  std::vector<std::uint8_t> d;  // predicate, index ((x*|Y| + y)*|A| + a)*|B| + b

  int nx() const { return static_cast<int>(x_labels.size()); }
  int ny() const { return static_cast<int>(y_labels.size()); }
  int na() const { return static_cast<int>(a_labels.size()); }
  int nb() const { return static_cast<int>(b_labels.size()); }

  std::uint8_t predicate(int x, int y, int a, int b) const {
    return d[static_cast<size_t>(((x * ny() + y) * na() + a)) * nb() + b];
  }
};

// f[x][y][a] = unique accepted b, or -1 when no b is accepted.
struct ProjectionStructure {
  std::vector<std::vector<std::vector<int>>> f;
};

struct GameReport {
  Real value = 0.0;
  std::optional<Real> delta_sync_diag;  // absent when the game is not square
                                        // or the diagonal carries no mass
  bool synchronous = false;
  bool projection = false;
  bool symmetric = false;
};

Real game_value(const NonlocalGame& g, const Strategy& s);

bool detect_synchronous(const NonlocalGame& g);

std::optional<ProjectionStructure> detect_projection(const NonlocalGame& g);

// Whether label sets coincide and both nu and D are invariant under swapping
// the two players.
bool detect_symmetric(const NonlocalGame& g);

RVec diag_distribution(const RMat& nu);

// Marginal of nu on the first (Alice) coordinate.
RVec marginal_x(const RMat& nu);

GameReport analyze_game(const NonlocalGame& g, const Strategy& s);

struct BuiltinGame {
  NonlocalGame game;
  Strategy reference;
};

BuiltinGame builtin_game(const std::string& name);  // chsh | magic_square

}  // namespace pmeround
