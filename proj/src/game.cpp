#include "pmeround/game.hpp"

#include <cmath>

namespace pmeround {

namespace {

bool square_labels(const NonlocalGame& g) {
  return g.x_labels == g.y_labels && g.a_labels == g.b_labels;
}

void require_labels(const NonlocalGame& g, const Strategy& s) {
  if (s.alice.questions != g.x_labels || s.bob.questions != g.y_labels)
    fail(ErrorCode::LabelMismatch, "strategy question labels differ from the game");
  for (const auto& m : s.alice.measurements)
    if (m.outcomes != g.a_labels)
      fail(ErrorCode::LabelMismatch, "Alice outcome labels differ from the game");
  for (const auto& m : s.bob.measurements)
    if (m.outcomes != g.b_labels)
      fail(ErrorCode::LabelMismatch, "Bob outcome labels differ from the game");
}

}  // namespace

Real game_value(const NonlocalGame& g, const Strategy& s) {
  require_labels(g, s);
  Correlation c = induce_correlation(s);
  Real value = 0.0;
  for (int x = 0; x < g.nx(); ++x)
    for (int y = 0; y < g.ny(); ++y) {
      if (g.nu(x, y) == 0.0) continue;
      Real win = 0.0;
      for (int a = 0; a < g.na(); ++a)
        for (int b = 0; b < g.nb(); ++b)
          if (g.predicate(x, y, a, b)) win += c.at(x, y, a, b);
      value += g.nu(x, y) * win;
    }
  return value;
}

bool detect_synchronous(const NonlocalGame& g) {
  if (!square_labels(g))
    fail(ErrorCode::NotSquare, "synchronicity needs matching question and answer sets");
  for (int x = 0; x < g.nx(); ++x) {
    if (g.nu(x, x) <= 0.0) return false;
    for (int a = 0; a < g.na(); ++a)
      for (int b = 0; b < g.nb(); ++b)
        if (a != b && g.predicate(x, x, a, b)) return false;
  }
  return true;
}

std::optional<ProjectionStructure> detect_projection(const NonlocalGame& g) {
  ProjectionStructure ps;
  ps.f.assign(g.nx(), std::vector<std::vector<int>>(
                          g.ny(), std::vector<int>(g.na(), -1)));
  for (int x = 0; x < g.nx(); ++x)
    for (int y = 0; y < g.ny(); ++y) {
      bool supported = g.nu(x, y) > 0.0;
      for (int a = 0; a < g.na(); ++a) {
        int accepted = -1;
        int count = 0;
        for (int b = 0; b < g.nb(); ++b)
          if (g.predicate(x, y, a, b)) {
            accepted = b;
            ++count;
          }
        if (count > 1) {
          if (supported) return std::nullopt;
          accepted = -1;  // unsupported pair, structure unconstrained
        }
        ps.f[x][y][a] = accepted;
      }
    }
  return ps;
}

bool detect_symmetric(const NonlocalGame& g) {
  if (!square_labels(g)) return false;
  for (int x = 0; x < g.nx(); ++x)
    for (int y = 0; y < g.ny(); ++y) {
      if (std::abs(g.nu(x, y) - g.nu(y, x)) > tol::distribution) return false;
      for (int a = 0; a < g.na(); ++a)
        for (int b = 0; b < g.nb(); ++b)
          if (g.predicate(x, y, a, b) != g.predicate(y, x, b, a)) return false;
    }
  return true;
}

RVec diag_distribution(const RMat& nu) {
  if (nu.rows() != nu.cols())
    fail(ErrorCode::NotSquare, "joint distribution is not square");
  RVec diag = nu.diagonal();
  Real mass = diag.sum();
  if (mass <= 0.0)
    fail(ErrorCode::EmptyDiagonal, "joint distribution has no diagonal mass");
  return diag / mass;
}

RVec marginal_x(const RMat& nu) {
  RVec m = nu.rowwise().sum();
  Real mass = m.sum();
  if (mass <= 0.0) fail(ErrorCode::InvalidArgument, "distribution has no mass");
  return m / mass;
}

GameReport analyze_game(const NonlocalGame& g, const Strategy& s) {
  GameReport r;
  r.value = game_value(g, s);
  r.projection = detect_projection(g).has_value();
  r.symmetric = detect_symmetric(g);
  if (square_labels(g)) {
    r.synchronous = detect_synchronous(g);
    if (g.nu.diagonal().sum() > 0.0)
      r.delta_sync_diag = delta_sync(induce_correlation(s), diag_distribution(g.nu));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Built-in games
// ---------------------------------------------------------------------------

namespace {

Mat rank1(Real c0, Real c1) {
  Vec v(2);
  v << Cplx(c0, 0), Cplx(c1, 0);
  return v * v.adjoint();
}

BuiltinGame make_chsh() {
  BuiltinGame bg;
  NonlocalGame& g = bg.game;
  g.x_labels = g.y_labels = g.a_labels = g.b_labels = {"0", "1"};
  g.nu = RMat::Constant(2, 2, 0.25);
  g.d.assign(16, 0);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          g.d[static_cast<size_t>(((x * 2 + y) * 2 + a)) * 2 + b] =
              ((a ^ b) == (x & y)) ? 1 : 0;

  Vec amp(4);
  const Real r = 1.0 / std::sqrt(2.0);
  amp << Cplx(r, 0), Cplx(0, 0), Cplx(0, 0), Cplx(r, 0);
  Strategy& s = bg.reference;
  s.state = BipartiteState(2, 2, amp);

  const Real c8 = std::cos(EIGEN_PI / 8.0);
  const Real s8 = std::sin(EIGEN_PI / 8.0);
  s.alice.questions = {"0", "1"};
  s.alice.measurements = {
      {{"0", "1"}, {rank1(1, 0), rank1(0, 1)}, MeasurementKind::projective},
      {{"0", "1"}, {rank1(r, r), rank1(r, -r)}, MeasurementKind::projective}};
  s.bob.questions = {"0", "1"};
  s.bob.measurements = {
      {{"0", "1"}, {rank1(c8, s8), rank1(-s8, c8)}, MeasurementKind::projective},
      {{"0", "1"}, {rank1(c8, -s8), rank1(s8, c8)}, MeasurementKind::projective}};
  return bg;
}

BuiltinGame make_magic_square() {
  // Two-qubit Pauli observables of the Mermin square; rows multiply to +Id,
  // columns to -Id.
  Mat id2 = Mat::Identity(2, 2);
  Mat px(2, 2), py(2, 2), pz(2, 2);
  px << Cplx(0, 0), Cplx(1, 0), Cplx(1, 0), Cplx(0, 0);
  py << Cplx(0, 0), Cplx(0, -1), Cplx(0, 1), Cplx(0, 0);
  pz << Cplx(1, 0), Cplx(0, 0), Cplx(0, 0), Cplx(-1, 0);

  Mat cell[3][3];
  cell[0][0] = kron(id2, pz);
  cell[0][1] = kron(pz, id2);
  cell[0][2] = kron(pz, pz);
  cell[1][0] = kron(px, id2);
  cell[1][1] = kron(id2, px);
  cell[1][2] = kron(px, px);
  cell[2][0] = -kron(px, pz);
  cell[2][1] = -kron(pz, px);
  cell[2][2] = kron(py, py);

  BuiltinGame bg;
  NonlocalGame& g = bg.game;
  g.x_labels = {"r0", "r1", "r2", "c0", "c1", "c2"};
  g.y_labels = {"00", "01", "02", "10", "11", "12", "20", "21", "22"};
  g.a_labels = {"000", "001", "010", "011", "100", "101", "110", "111"};
  g.b_labels = {"0", "1"};

  // A question x is a row (indices 0..2) or a column (3..5); the cell (i, j)
  // lies on row i at position j and on column j at position i.
  auto incident = [](int x, int i, int j, int& pos, int& parity) {
    if (x < 3) {
      if (i != x) return false;
      pos = j;
      parity = 0;
      return true;
    }
    if (j != x - 3) return false;
    pos = i;
    parity = 1;
    return true;
  };

  g.nu = RMat::Zero(6, 9);
  g.d.assign(static_cast<size_t>(6) * 9 * 8 * 2, 0);
  for (int x = 0; x < 6; ++x)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        int pos = 0, parity = 0;
        if (!incident(x, i, j, pos, parity)) continue;
        int y = i * 3 + j;
        g.nu(x, y) = 1.0 / 18.0;
        for (int a = 0; a < 8; ++a) {
          int s0 = (a >> 2) & 1, s1 = (a >> 1) & 1, s2 = a & 1;
          if ((s0 ^ s1 ^ s2) != parity) continue;
          int bit = pos == 0 ? s0 : (pos == 1 ? s1 : s2);
          g.d[static_cast<size_t>(((x * 9 + y) * 8 + a)) * 2 + bit] = 1;
        }
      }

  Strategy& s = bg.reference;
  Vec amp = Vec::Zero(16);
  for (int i = 0; i < 4; ++i) amp(i * 4 + i) = Cplx(0.5, 0);
  s.state = BipartiteState(4, 4, amp);

  Mat id4 = Mat::Identity(4, 4);
  s.alice.questions = g.x_labels;
  for (int x = 0; x < 6; ++x) {
    Mat obs[3];
    if (x < 3)
      for (int j = 0; j < 3; ++j) obs[j] = cell[x][j];
    else
      for (int i = 0; i < 3; ++i) obs[i] = cell[i][x - 3];
    Measurement m;
    m.outcomes = g.a_labels;
    m.kind = MeasurementKind::projective;
    for (int a = 0; a < 8; ++a) {
      int bits[3] = {(a >> 2) & 1, (a >> 1) & 1, a & 1};
      Mat p = id4;
      for (int k = 0; k < 3; ++k)
        p = p * ((id4 + (bits[k] ? -1.0 : 1.0) * obs[k]) / 2.0);
      p = (p + p.adjoint()) / 2.0;  // clean roundoff, the factors commute
      m.elements.push_back(p);
    }
    s.alice.measurements.push_back(std::move(m));
  }

  s.bob.questions = g.y_labels;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      Measurement m;
      m.outcomes = g.b_labels;
      m.kind = MeasurementKind::projective;
      m.elements.push_back(Mat(((id4 + cell[i][j]) / 2.0).transpose()));
      m.elements.push_back(Mat(((id4 - cell[i][j]) / 2.0).transpose()));
      s.bob.measurements.push_back(std::move(m));
    }
  return bg;
}

}  // namespace

BuiltinGame builtin_game(const std::string& name) {
  if (name == "chsh") return make_chsh();
  if (name == "magic_square") return make_magic_square();
  fail(ErrorCode::UnknownName, "unknown builtin game: " + name);
}

}  // namespace pmeround
