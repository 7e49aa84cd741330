#include "pmeround/noise.hpp"

#include <cmath>

#include "pmeround/linalg.hpp"
#include "pmeround/rng.hpp"

namespace pmeround {

NoiseKind noise_kind_from_string(const std::string& s) {
  if (s == "depolarize_state") return NoiseKind::depolarize_state;
  if (s == "smooth_povm") return NoiseKind::smooth_povm;
  if (s == "rotate_measurements") return NoiseKind::rotate_measurements;
  fail(ErrorCode::UnknownName, "unknown noise kind: " + s);
}

const char* noise_kind_name(NoiseKind k) {
  switch (k) {
    case NoiseKind::depolarize_state:
      return "depolarize_state";
    case NoiseKind::smooth_povm:
      return "smooth_povm";
    case NoiseKind::rotate_measurements:
      return "rotate_measurements";
  }
  return "?";
}

namespace {

void require_level(Real p) {
  if (!(p >= 0.0 && p <= 1.0))
    fail(ErrorCode::InvalidArgument, "noise level must lie in [0, 1]");
}

MeasurementFamily extend_family(const MeasurementFamily& f, int env_dim) {
  Mat env = Mat::Identity(env_dim, env_dim);
  MeasurementFamily out;
  out.questions = f.questions;
  for (const auto& q : f.measurements) {
    Measurement m;
    m.outcomes = q.outcomes;
    m.kind = q.kind;
    for (const auto& e : q.elements) m.elements.push_back(kron(e, env));
    out.measurements.push_back(std::move(m));
  }
  return out;
}

}  // namespace

Strategy depolarize_state(const Strategy& s, Real p) {
  require_level(p);
  const int da = s.state.d_a;
  const int db = s.state.d_b;
  const int n = da * db;
  Mat sigma = (1.0 - p) * (s.state.amplitudes * s.state.amplitudes.adjoint()) +
              p / static_cast<Real>(n) * Mat::Identity(n, n);
  auto [purified, basis] = canonical_purification((sigma + sigma.adjoint()) / 2.0);
  (void)basis;

  // Split the purifying register between the players:
  // ((i,j),(i',j')) -> ((i,i'),(j,j')).
  Vec amp = Vec::Zero(static_cast<Eigen::Index>(n) * n);
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < db; ++j)
      for (int ip = 0; ip < da; ++ip)
        for (int jp = 0; jp < db; ++jp)
          amp(static_cast<Eigen::Index>(i * da + ip) * (static_cast<Eigen::Index>(db) * db) +
              j * db + jp) =
              purified.amplitudes(static_cast<Eigen::Index>(i * db + j) * n + ip * db + jp);

  Strategy out;
  out.state = BipartiteState(da * da, db * db, std::move(amp));
  out.alice = extend_family(s.alice, da);
  out.bob = extend_family(s.bob, db);
  return out;
}

Strategy smooth_povm(const Strategy& s, Real p) {
  require_level(p);
  Strategy out = s;
  for (auto* family : {&out.alice, &out.bob}) {
    for (auto& q : family->measurements) {
      const Real m = static_cast<Real>(q.size());
      Mat id = Mat::Identity(q.dim(), q.dim());
      for (auto& e : q.elements) e = (1.0 - p) * e + (p / m) * id;
      if (p > 0.0) q.kind = MeasurementKind::general;
    }
  }
  return out;
}

Strategy rotate_measurements(const Strategy& s, Real theta, std::uint64_t seed) {
  require_level(theta);
  Rng rng(seed);
  Mat g = rng.hermitian(s.state.d_a);
  HermitianEigensystem es = eigh(g);
  Real spectral = std::max(std::abs(es.values(0)), std::abs(es.values(es.values.size() - 1)));
  if (spectral <= 0.0) fail(ErrorCode::InvalidArgument, "degenerate rotation generator");

  Vec phases(es.values.size());
  for (int i = 0; i < es.values.size(); ++i) {
    Real angle = theta * es.values(i) / spectral;
    phases(i) = Cplx(std::cos(angle), std::sin(angle));
  }
  Mat u = es.vectors * phases.asDiagonal() * es.vectors.adjoint();

  Strategy out = s;
  for (auto& q : out.alice.measurements)
    for (auto& e : q.elements) e = u * e * u.adjoint();
  return out;
}

Strategy generate(const std::string& builtin_name, const NoiseModel& model) {
  require_level(model.level);
  BuiltinGame bg = builtin_game(builtin_name);
  if (model.level == 0.0) return bg.reference;
  switch (model.kind) {
    case NoiseKind::depolarize_state:
      return depolarize_state(bg.reference, model.level);
    case NoiseKind::smooth_povm:
      return smooth_povm(bg.reference, model.level);
    case NoiseKind::rotate_measurements:
      return rotate_measurements(bg.reference, model.level, model.seed);
  }
  fail(ErrorCode::InvalidArgument, "unhandled noise kind");
}

}  // namespace pmeround
