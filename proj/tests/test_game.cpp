// Nonlocal games: value evaluation against a direct tensor oracle, the
// built-in benchmarks, structural predicates, distribution helpers, and the
// synchronicity bound for games that weight their diagonal.
#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "pmeround/game.hpp"
#include "pmeround/linalg.hpp"
#include "pmeround/rng.hpp"
#include "pmeround/strategy.hpp"

using namespace pmeround;

namespace {

constexpr Real kTight = 1e-10;

// Direct oracle: value = <psi| sum_{xyab} nu(x,y) D(x,y,a,b) A^x_a (x) B^y_b |psi>.
Real value_oracle(const NonlocalGame& g, const Strategy& s) {
  Mat op = Mat::Zero(s.state.d_a * s.state.d_b, s.state.d_a * s.state.d_b);
  for (int x = 0; x < g.nx(); ++x)
    for (int y = 0; y < g.ny(); ++y) {
      if (g.nu(x, y) == 0.0) continue;
      for (int a = 0; a < g.na(); ++a)
        for (int b = 0; b < g.nb(); ++b)
          if (g.predicate(x, y, a, b))
            op += g.nu(x, y) *
                  kron(s.alice.measurements[x].elements[a], s.bob.measurements[y].elements[b]);
    }
  return (s.state.amplitudes.adjoint() * op * s.state.amplitudes)(0, 0).real();
}

// Three-question graph-coloring game on a triangle: equal questions must get
// equal answers, adjacent questions different answers.
NonlocalGame triangle_coloring() {
  NonlocalGame g;
  g.x_labels = g.y_labels = {"0", "1", "2"};
  g.a_labels = g.b_labels = {"0", "1", "2"};
  g.nu = RMat::Constant(3, 3, 1.0 / 9.0);
  g.d.assign(81, 0);
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y)
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          bool win = (x == y) ? (a == b) : (a != b);
          g.d[static_cast<size_t>(((x * 3 + y) * 3 + a)) * 3 + b] = win ? 1 : 0;
        }
  return g;
}

// Scalar (dim-1) strategy answering question x with the noisy distribution
// (1-p) on answer x plus p/3 spread over all three answers.
Strategy noisy_coloring_strategy(Real p) {
  Strategy s;
  s.state = BipartiteState(1, 1, Vec::Ones(1));
  for (int x = 0; x < 3; ++x) {
    Measurement m;
    for (int a = 0; a < 3; ++a) {
      m.outcomes.push_back(std::to_string(a));
      Real w = (a == x ? 1.0 - p : 0.0) + p / 3.0;
      m.elements.push_back(Mat::Constant(1, 1, w));
    }
    m.kind = MeasurementKind::general;
    s.alice.questions.push_back(std::to_string(x));
    s.alice.measurements.push_back(m);
  }
  s.bob = s.alice;
  return s;
}

}  // namespace

TEST_CASE("built-in games hit their known optimal values") {
  BuiltinGame chsh = builtin_game("chsh");
  const Real tsirelson = (2.0 + std::sqrt(2.0)) / 4.0;
  REQUIRE(std::abs(game_value(chsh.game, chsh.reference) - tsirelson) <= 1e-9);

  BuiltinGame ms = builtin_game("magic_square");
  REQUIRE(std::abs(game_value(ms.game, ms.reference) - 1.0) <= 1e-9);

  REQUIRE_THROWS_AS(builtin_game("no_such_game"), Error);
}

TEST_CASE("game_value matches the direct tensor-product oracle") {
  BuiltinGame chsh = builtin_game("chsh");
  REQUIRE(std::abs(game_value(chsh.game, chsh.reference) -
                   value_oracle(chsh.game, chsh.reference)) <= kTight);

  BuiltinGame ms = builtin_game("magic_square");
  REQUIRE(std::abs(game_value(ms.game, ms.reference) - value_oracle(ms.game, ms.reference)) <=
          kTight);

  // Random strategy on the CHSH table.
  Rng rng(201);
  Strategy s;
  s.state = BipartiteState(3, 3, rng.state(9));
  for (int x = 0; x < 2; ++x) {
    s.alice.questions.push_back(std::to_string(x));
    s.bob.questions.push_back(std::to_string(x));
    Measurement ma, mb;
    ma.outcomes = mb.outcomes = {"0", "1"};
    ma.elements = rng.povm(3, 2);
    mb.elements = rng.povm(3, 2);
    ma.kind = mb.kind = MeasurementKind::general;
    s.alice.measurements.push_back(ma);
    s.bob.measurements.push_back(mb);
  }
  REQUIRE(std::abs(game_value(chsh.game, s) - value_oracle(chsh.game, s)) <= kTight);
}

TEST_CASE("classical CHSH strategies cap at 3/4") {
  BuiltinGame chsh = builtin_game("chsh");
  Real best = 0.0;
  // All 16 deterministic strategies: f,g : {0,1} -> {0,1}.
  for (int f = 0; f < 4; ++f)
    for (int g = 0; g < 4; ++g) {
      Real value = 0.0;
      for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
          int a = (f >> x) & 1, b = (g >> y) & 1;
          value += 0.25 * chsh.game.predicate(x, y, a, b);
        }
      best = std::max(best, value);

      // Cross-check one of them through the library with a dim-1 strategy.
      Strategy s;
      s.state = BipartiteState(1, 1, Vec::Ones(1));
      for (int x = 0; x < 2; ++x) {
        Measurement ma, mb;
        ma.outcomes = mb.outcomes = {"0", "1"};
        for (int o = 0; o < 2; ++o) {
          ma.elements.push_back(Mat::Constant(1, 1, ((f >> x) & 1) == o ? 1.0 : 0.0));
          mb.elements.push_back(Mat::Constant(1, 1, ((g >> x) & 1) == o ? 1.0 : 0.0));
        }
        ma.kind = mb.kind = MeasurementKind::projective;
        s.alice.questions.push_back(std::to_string(x));
        s.alice.measurements.push_back(ma);
        s.bob.questions.push_back(std::to_string(x));
        s.bob.measurements.push_back(mb);
      }
      REQUIRE(std::abs(game_value(chsh.game, s) - value) <= kTight);
    }
  REQUIRE(std::abs(best - 0.75) <= kTight);
}

TEST_CASE("detect_synchronous distinguishes coloring from CHSH") {
  REQUIRE(detect_synchronous(triangle_coloring()));
  // CHSH is square but x=1 demands differing answers on the diagonal.
  REQUIRE_FALSE(detect_synchronous(builtin_game("chsh").game));
  // Magic square has disjoint question roles, so the notion does not apply.
  REQUIRE_THROWS_AS(detect_synchronous(builtin_game("magic_square").game), Error);

  // Zero diagonal mass breaks the support condition.
  NonlocalGame starved = triangle_coloring();
  starved.nu.setConstant(1.0 / 6.0);
  for (int x = 0; x < 3; ++x) starved.nu(x, x) = 0.0;
  REQUIRE_FALSE(detect_synchronous(starved));
}

TEST_CASE("detect_projection recovers the answer map") {
  BuiltinGame ms = builtin_game("magic_square");
  auto structure = detect_projection(ms.game);
  REQUIRE(structure.has_value());
  for (int x = 0; x < ms.game.nx(); ++x)
    for (int y = 0; y < ms.game.ny(); ++y)
      for (int a = 0; a < ms.game.na(); ++a) {
        int fb = structure->f[x][y][a];
        if (fb < 0) {
          for (int b = 0; b < ms.game.nb(); ++b) REQUIRE(ms.game.predicate(x, y, a, b) == 0);
        } else {
          REQUIRE(ms.game.predicate(x, y, a, fb) == 1);
          for (int b = 0; b < ms.game.nb(); ++b)
            if (b != fb) REQUIRE(ms.game.predicate(x, y, a, b) == 0);
        }
      }

  REQUIRE(detect_projection(builtin_game("chsh").game).has_value());

  // A game accepting two answers for some (x, y, a) is not a projection game.
  NonlocalGame loose = triangle_coloring();
  loose.d.assign(loose.d.size(), 1);
  REQUIRE_FALSE(detect_projection(loose).has_value());

  // A question pair with no accepted b maps to -1.
  NonlocalGame dead = builtin_game("chsh").game;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) dead.d[static_cast<size_t>(((0 * 2 + 0) * 2 + a)) * 2 + b] = 0;
  auto ds = detect_projection(dead);
  REQUIRE(ds.has_value());
  REQUIRE(ds->f[0][0][0] == -1);
  REQUIRE(ds->f[0][0][1] == -1);
}

TEST_CASE("detect_symmetric checks labels, nu and the predicate") {
  REQUIRE(detect_symmetric(builtin_game("chsh").game));
  REQUIRE(detect_symmetric(triangle_coloring()));
  REQUIRE_FALSE(detect_symmetric(builtin_game("magic_square").game));

  // Symmetric labels but an asymmetric predicate.
  NonlocalGame skew = triangle_coloring();
  skew.d[static_cast<size_t>(((0 * 3 + 1) * 3 + 0)) * 3 + 1] = 0;
  REQUIRE_FALSE(detect_symmetric(skew));
}

TEST_CASE("diag_distribution and marginal_x normalize correctly") {
  RMat nu(2, 2);
  nu << 0.1, 0.2, 0.3, 0.4;
  RVec diag = diag_distribution(nu);
  REQUIRE(std::abs(diag(0) - 0.2) <= kTight);
  REQUIRE(std::abs(diag(1) - 0.8) <= kTight);
  RVec marg = marginal_x(nu);
  REQUIRE(std::abs(marg(0) - 0.3) <= kTight);
  REQUIRE(std::abs(marg(1) - 0.7) <= kTight);

  RMat off(2, 2);
  off << 0.0, 0.5, 0.5, 0.0;
  REQUIRE_THROWS_AS(diag_distribution(off), Error);
  REQUIRE_THROWS_AS(diag_distribution(RMat::Constant(2, 3, 1.0 / 6.0)), Error);
}

TEST_CASE("analyze_game assembles flags and the diagonal defect") {
  BuiltinGame chsh = builtin_game("chsh");
  GameReport r = analyze_game(chsh.game, chsh.reference);
  REQUIRE(std::abs(r.value - (2.0 + std::sqrt(2.0)) / 4.0) <= 1e-9);
  REQUIRE(r.symmetric);
  REQUIRE(r.projection);
  REQUIRE_FALSE(r.synchronous);
  REQUIRE(r.delta_sync_diag.has_value());
  // Optimal CHSH measurements answer each basis uniformly, so repeating the
  // question on both sides agrees only half the time.
  REQUIRE(std::abs(*r.delta_sync_diag - 0.5) <= 1e-9);

  // Magic square distributes no mass on the diagonal (x and y label sets
  // even differ), so the diagonal defect is absent.
  BuiltinGame ms = builtin_game("magic_square");
  GameReport rm = analyze_game(ms.game, ms.reference);
  REQUIRE(std::abs(rm.value - 1.0) <= 1e-9);
  REQUIRE_FALSE(rm.delta_sync_diag.has_value());
  REQUIRE_FALSE(rm.symmetric);
  REQUIRE(rm.projection);
}

TEST_CASE("diagonal mass converts game loss into a synchronicity bound") {
  // nu is uniform on all nine pairs, so nu(x,x) = (1/3) nu_marg(x): a game
  // loss of epsilon forces delta_sync over the diagonal below 3 epsilon.
  NonlocalGame g = triangle_coloring();
  for (Real p : {0.0, 0.05, 0.2, 0.5, 0.9}) {
    Strategy s = noisy_coloring_strategy(p);
    Real eps = 1.0 - game_value(g, s);
    Real delta = delta_sync(induce_correlation(s), diag_distribution(g.nu));
    REQUIRE(delta <= 3.0 * eps + 1e-8);
  }
}

TEST_CASE("symmetrizing the magic-square reference keeps it synchronous-free") {
  // The reference strategy is maximally entangled, so the symmetrized Alice
  // strategy against itself answers Alice questions consistently.
  BuiltinGame ms = builtin_game("magic_square");
  SymmetricStrategy sym = symmetrize_side(ms.reference, Subsystem::A);
  RVec nu_a = marginal_x(ms.game.nu);
  REQUIRE(delta_sync(sym, nu_a) <= 1e-8);
}
