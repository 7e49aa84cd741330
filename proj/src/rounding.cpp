#include "pmeround/rounding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pmeround {

namespace {

Mat matrix_sqrt(const Mat& h) {
  return spectral_map(h, [](Real v) { return v > 0.0 ? std::sqrt(v) : 0.0; });
}

Mat hermitize(const Mat& m) { return (m + m.adjoint()) / 2.0; }

void require_joint(const RMat& p, const char* what) {
  Real sum = 0.0;
  for (int i = 0; i < p.rows(); ++i)
    for (int j = 0; j < p.cols(); ++j) {
      if (!std::isfinite(p(i, j)) || p(i, j) < -tol::distribution)
        fail(ErrorCode::InvalidArgument,
             std::string(what) + " has a negative or non-finite entry");
      sum += p(i, j);
    }
  if (std::abs(sum - 1.0) > tol::distribution)
    fail(ErrorCode::InvalidArgument, std::string(what) + " does not sum to one");
}

int uniform_outcome_count(const MeasurementFamily& f, const char* side) {
  if (f.size() == 0)
    fail(ErrorCode::DimensionMismatch, std::string(side) + " family is empty");
  int m = f.measurements.front().size();
  for (const auto& q : f.measurements)
    if (q.size() != m || q.dim() != f.dim())
      fail(ErrorCode::DimensionMismatch, std::string(side) + " family is ragged");
  return m;
}

}  // namespace

Mat SpectralLadder::projector(int k) const {
  const Mat& v = isometries[k].matrix;
  return v * v.adjoint();
}

// ---------------------------------------------------------------------------
// Naimark dilation
// ---------------------------------------------------------------------------

namespace {

MeasurementFamily dilate_family(const MeasurementFamily& f, int outcomes) {
  const int dim = f.dim();
  MeasurementFamily out;
  out.questions = f.questions;
  out.measurements.reserve(f.measurements.size());
  for (const auto& q : f.measurements) {
    // Isometry |phi>|0> -> sum_a sqrt(E_a)|phi> |a>, completed to a unitary;
    // the dilated elements are conjugated outcome projectors.
    Mat v(static_cast<Eigen::Index>(dim) * outcomes, dim);
    for (int a = 0; a < outcomes; ++a) {
      Mat root = matrix_sqrt(q.elements[a]);
      for (int i = 0; i < dim; ++i) v.row(static_cast<Eigen::Index>(i) * outcomes + a) = root.row(i);
    }
    std::vector<int> positions(dim);
    for (int j = 0; j < dim; ++j) positions[j] = j * outcomes;
    Mat u = complete_columns_at(v, positions);

    Measurement m;
    m.outcomes = q.outcomes;
    m.kind = MeasurementKind::projective;
    for (int a = 0; a < outcomes; ++a) {
      Mat rows(dim, static_cast<Eigen::Index>(dim) * outcomes);
      for (int i = 0; i < dim; ++i) rows.row(i) = u.row(static_cast<Eigen::Index>(i) * outcomes + a);
      m.elements.push_back(hermitize(rows.adjoint() * rows));
    }
    out.measurements.push_back(std::move(m));
  }
  return out;
}

}  // namespace

Strategy naimark_dilate(const Strategy& s, int dimension_cap) {
  const int ma = uniform_outcome_count(s.alice, "Alice");
  const int mb = uniform_outcome_count(s.bob, "Bob");
  const int da = s.state.d_a;
  const int db = s.state.d_b;
  if (s.alice.dim() != da || s.bob.dim() != db)
    fail(ErrorCode::DimensionMismatch, "measurement dimension differs from the state");
  const long long total = static_cast<long long>(da) * ma * db * mb;
  if (total > dimension_cap)
    fail(ErrorCode::DimensionOverflow, "dilated dimension exceeds the configured cap");

  Strategy out;
  out.alice = dilate_family(s.alice, ma);
  out.bob = dilate_family(s.bob, mb);

  // |psi> (x) |0>_auxA (x) |0>_auxB with the aux index minor on each side.
  Vec amp = Vec::Zero(total);
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < db; ++j)
      amp(static_cast<Eigen::Index>(i * ma) * (static_cast<Eigen::Index>(db) * mb) + j * mb) =
          s.state.amplitudes(static_cast<Eigen::Index>(i) * db + j);
  out.state = BipartiteState(da * ma, db * mb, std::move(amp));
  return out;
}

// ---------------------------------------------------------------------------
// Orthonormalization
// ---------------------------------------------------------------------------

Measurement orthonormalize(const Measurement& q, const Mat& rho) {
  const int dim = q.dim();
  if (dim == 0) fail(ErrorCode::DimensionMismatch, "empty measurement");
  if (rho.rows() != dim || rho.cols() != dim)
    fail(ErrorCode::DimensionMismatch, "density dimension differs from the measurement");
  Mat id = Mat::Identity(dim, dim);
  Mat sum = Mat::Zero(dim, dim);
  for (const auto& e : q.elements) sum += e;
  if (frob(sum - id) > 1e-6)
    fail(ErrorCode::InvalidArgument, "orthonormalize needs a full measurement");

  if (is_projective(q)) {
    Measurement out = q;
    out.kind = MeasurementKind::projective;
    return out;
  }

  const int m = q.size();
  std::vector<Real> weight(m);
  for (int a = 0; a < m; ++a) weight[a] = (q.elements[a] * rho).trace().real();
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return weight[a] > weight[b]; });

  // Greedy sequential subspace rounding: threshold each element at 1/2,
  // compress onto the complement of everything already assigned, keep the
  // solidly-present part.
  std::vector<Mat> p(m, Mat::Zero(dim, dim));
  Mat assigned = Mat::Zero(dim, dim);
  for (int idx : order) {
    Mat comp = id - assigned;
    Mat d = spectral_map(q.elements[idx], [](Real v) { return chi_ge(0.5, v); });
    Mat c = hermitize(comp * d * comp);
    p[idx] = hermitize(spectral_map(c, [](Real v) { return chi_ge(0.5, v); }));
    assigned += p[idx];
  }

  // Hand every leftover direction to the outcome that wants it most.
  HermitianEigensystem rest = eigh(hermitize(id - assigned));
  for (int i = 0; i < dim; ++i) {
    if (rest.values(i) < 0.5) continue;
    Vec v = rest.vectors.col(i);
    int best = 0;
    Real best_score = -1.0;
    for (int a = 0; a < m; ++a) {
      Real score = (v.adjoint() * q.elements[a] * v).real()(0, 0);
      if (score > best_score + 1e-15) {
        best_score = score;
        best = a;
      }
    }
    p[best] += v * v.adjoint();
  }

  Measurement out;
  out.outcomes = q.outcomes;
  out.kind = MeasurementKind::projective;
  for (int a = 0; a < m; ++a) out.elements.push_back(hermitize(p[a]));
  return out;
}

Real orthonormalize_closeness(const Measurement& p, const Measurement& q, const Mat& rho) {
  if (p.size() != q.size() || p.dim() != q.dim())
    fail(ErrorCode::DimensionMismatch, "measurements do not share shape");
  Real total = 0.0;
  for (int a = 0; a < p.size(); ++a) {
    Mat e = p.elements[a] - q.elements[a];
    total += (e * e * rho).trace().real();
  }
  return total;
}

// ---------------------------------------------------------------------------
// Spectral ladder
// ---------------------------------------------------------------------------

SpectralLadder build_ladder_from_spectrum(const Mat& basis, const RVec& weights) {
  if (basis.rows() != basis.cols() || basis.rows() != weights.size())
    fail(ErrorCode::DimensionMismatch, "basis and spectrum shapes disagree");
  for (int i = 1; i < weights.size(); ++i)
    if (weights(i) > weights(i - 1) + 1e-12)
      fail(ErrorCode::InvalidArgument, "spectrum is not sorted non-increasing");

  SpectralLadder ladder;
  auto clusters = cluster_eigenvalues(weights);
  int cumulative = 0;
  for (const auto& [mean, count] : clusters) {
    cumulative += count;
    if (mean <= tol::eig_merge) continue;
    ladder.breakpoints.push_back(mean);
    ladder.ranks.push_back(cumulative);
    ladder.isometries.emplace_back(Mat(basis.leftCols(cumulative)));
  }
  if (ladder.breakpoints.empty())
    fail(ErrorCode::NotDensity, "spectrum has no positive part");
  for (size_t k = 0; k < ladder.breakpoints.size(); ++k) {
    Real next = k + 1 < ladder.breakpoints.size() ? ladder.breakpoints[k + 1] : 0.0;
    ladder.weights.push_back(ladder.ranks[k] * (ladder.breakpoints[k] - next));
  }
  return ladder;
}

SpectralLadder build_ladder(const Mat& rho) {
  if (rho.rows() != rho.cols())
    fail(ErrorCode::NotDensity, "density matrix must be square");
  HermitianEigensystem es = eigh(rho);
  if (es.values(es.values.size() - 1) < -tol::psd)
    fail(ErrorCode::NotDensity, "density matrix has a negative eigenvalue");
  if (std::abs(es.values.sum() - 1.0) > tol::trace_one)
    fail(ErrorCode::NotDensity, "density matrix trace differs from one");
  return build_ladder_from_spectrum(es.vectors, es.values);
}

Real commutation_defect(const MeasurementFamily& family, const SpectralLadder& ladder,
                        const RVec& nu) {
  if (!is_projective(family))
    fail(ErrorCode::NotProjective, "commutation defect is defined for projective families");
  require_distribution(nu, "question distribution");
  if (nu.size() != family.size())
    fail(ErrorCode::DimensionMismatch, "distribution length differs from question count");
  if (!ladder.isometries.empty() && ladder.isometries.front().matrix.rows() != family.dim())
    fail(ErrorCode::DimensionMismatch, "ladder dimension differs from the family");

  Real total = 0.0;
  for (int k = 0; k < ladder.steps(); ++k) {
    Mat p = ladder.projector(k);
    Real inner = 0.0;
    for (int x = 0; x < family.size(); ++x) {
      if (nu(x) == 0.0) continue;
      Real sx = 0.0;
      for (const auto& e : family.measurements[x].elements)
        sx += (e * p - p * e).squaredNorm();
      inner += nu(x) * sx;
    }
    total += ladder.gap(k) * inner;
  }
  return total;
}

Real threshold_projector_distance_integral(const Mat& rho, const Mat& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols())
    fail(ErrorCode::DimensionMismatch, "operands have different shapes");
  HermitianEigensystem er = eigh(rho);
  HermitianEigensystem es = eigh(sigma);
  auto cr = cluster_eigenvalues(er.values);
  auto cs = cluster_eigenvalues(es.values);

  std::vector<Real> raw;
  for (const auto& [v, n] : cr) {
    (void)n;
    if (v > tol::eig_merge) raw.push_back(v);
  }
  for (const auto& [v, n] : cs) {
    (void)n;
    if (v > tol::eig_merge) raw.push_back(v);
  }
  std::sort(raw.begin(), raw.end());
  std::vector<Real> breakpoints;  // ascending, chained-merged union
  size_t i = 0;
  while (i < raw.size()) {
    size_t j = i + 1;
    while (j < raw.size() && raw[j] - raw[j - 1] <= tol::eig_merge) ++j;
    Real mean = 0.0;
    for (size_t k = i; k < j; ++k) mean += raw[k];
    breakpoints.push_back(mean / static_cast<Real>(j - i));
    i = j;
  }

  auto rank_at = [](const std::vector<std::pair<Real, int>>& clusters, Real t) {
    int r = 0;
    for (const auto& [v, n] : clusters)
      if (v >= t - tol::eig_merge) r += n;
    return r;
  };

  // The integrand is constant on each interval between breakpoints; evaluate
  // the closed-threshold projectors at the right endpoint.
  Real total = 0.0;
  Real prev = 0.0;
  for (Real b : breakpoints) {
    int rr = rank_at(cr, b);
    int rs = rank_at(cs, b);
    Mat p = rr > 0 ? Mat(er.vectors.leftCols(rr) * er.vectors.leftCols(rr).adjoint())
                   : Mat(Mat::Zero(rho.rows(), rho.cols()));
    Mat q = rs > 0 ? Mat(es.vectors.leftCols(rs) * es.vectors.leftCols(rs).adjoint())
                   : Mat(Mat::Zero(rho.rows(), rho.cols()));
    total += (b - prev) * (p - q).squaredNorm();
    prev = b;
  }
  return total;
}

// ---------------------------------------------------------------------------
// PME decomposition
// ---------------------------------------------------------------------------

namespace {

void require_symmetric_strategy(const SymmetricStrategy& s) {
  const int d = static_cast<int>(s.basis.rows());
  if (d == 0 || s.basis.cols() != d || s.schmidt_weights.size() != d)
    fail(ErrorCode::DimensionMismatch, "basis and weights shapes disagree");
  Mat gram = s.basis.adjoint() * s.basis - Mat::Identity(d, d);
  if (gram.norm() > 1e-8) fail(ErrorCode::NotIsometry, "carried basis is not unitary");
  for (int i = 0; i < d; ++i)
    if (!std::isfinite(s.schmidt_weights(i)) || s.schmidt_weights(i) < -tol::psd)
      fail(ErrorCode::NotDensity, "negative or non-finite Schmidt weight");
  if (std::abs(s.schmidt_weights.sum() - 1.0) > tol::trace_one)
    fail(ErrorCode::NotDensity, "Schmidt weights do not sum to one");
  if (s.family.dim() != d)
    fail(ErrorCode::DimensionMismatch, "measurement dimension differs from the basis");
}

}  // namespace

PMEDecomposition pme_decompose(const SymmetricStrategy& s, const RVec& nu) {
  require_symmetric_strategy(s);
  require_distribution(nu, "question distribution");
  if (nu.size() != s.family.size())
    fail(ErrorCode::DimensionMismatch, "distribution length differs from question count");
  uniform_outcome_count(s.family, "symmetric");

  Mat rho = s.rho();
  PMEDecomposition d;
  d.diagnostics.delta_sync_in = delta_sync(s, nu);

  // Exactly consistent projective rho-commuting inputs bypass the rounding so
  // the exact case is reproduced bit-for-bit.
  bool shortcut = d.diagnostics.delta_sync_in <= tol::sync_shortcut && is_projective(s.family);
  if (shortcut) {
    for (const auto& q : s.family.measurements)
      for (const auto& e : q.elements)
        if (frob(e * rho - rho * e) > tol::rho_commute) {
          shortcut = false;
          break;
        }
  }

  MeasurementFamily b_family;
  b_family.questions = s.family.questions;
  for (const auto& q : s.family.measurements) {
    if (shortcut) {
      Measurement copy = q;
      copy.kind = MeasurementKind::projective;
      b_family.measurements.push_back(std::move(copy));
    } else {
      b_family.measurements.push_back(orthonormalize(q, rho));
    }
  }

  SymmetricStrategy rounded{s.basis, s.schmidt_weights, b_family};
  d.diagnostics.delta_prime = delta_sync(rounded, nu);

  d.ladder = build_ladder_from_spectrum(s.basis, s.schmidt_weights);

  for (int k = 0; k < d.ladder.steps(); ++k) {
    const Mat& v = d.ladder.isometries[k].matrix;
    const int r = d.ladder.ranks[k];
    Mat step_mixed = Mat::Identity(r, r) / static_cast<Real>(r);
    MeasurementFamily fam;
    fam.questions = s.family.questions;
    for (const auto& q : b_family.measurements) {
      Measurement compressed;
      compressed.outcomes = q.outcomes;
      compressed.kind = MeasurementKind::general;
      for (const auto& e : q.elements)
        compressed.elements.push_back(hermitize(v.adjoint() * e * v));
      fam.measurements.push_back(orthonormalize(compressed, step_mixed));
    }
    d.step_families.push_back(std::move(fam));
  }

  d.diagnostics.commutation_defect = commutation_defect(b_family, d.ladder, nu);
  Mat recon = Mat::Zero(rho.rows(), rho.cols());
  for (int k = 0; k < d.ladder.steps(); ++k) recon += d.ladder.gap(k) * d.ladder.projector(k);
  d.diagnostics.reconstruction_error = frob(recon - rho);
  d.diagnostics.residual = residual(d, s, nu);
  return d;
}

Real residual(const PMEDecomposition& d, const SymmetricStrategy& original, const RVec& nu) {
  require_distribution(nu, "question distribution");
  if (nu.size() != original.family.size())
    fail(ErrorCode::DimensionMismatch, "distribution length differs from question count");
  if (d.step_families.size() != static_cast<size_t>(d.ladder.steps()))
    fail(ErrorCode::DimensionMismatch, "one step family per ladder step required");
  if (!d.ladder.isometries.empty() &&
      d.ladder.isometries.front().matrix.rows() != original.family.dim())
    fail(ErrorCode::DimensionMismatch, "ladder dimension differs from the family");

  Real total = 0.0;
  for (int k = 0; k < d.ladder.steps(); ++k) {
    const Mat& v = d.ladder.isometries[k].matrix;
    const int r = d.ladder.ranks[k];
    Mat p = d.ladder.projector(k);
    const MeasurementFamily& fam = d.step_families[k];
    if (fam.size() != original.family.size())
      fail(ErrorCode::DimensionMismatch, "step family question count differs");
    Real ex = 0.0;
    for (int x = 0; x < fam.size(); ++x) {
      if (nu(x) == 0.0) continue;
      const auto& orig = original.family.measurements[x];
      const auto& step = fam.measurements[x];
      if (orig.size() != step.size())
        fail(ErrorCode::DimensionMismatch, "step family outcome count differs");
      Real sx = 0.0;
      for (int a = 0; a < orig.size(); ++a) {
        Mat e = orig.elements[a] - v * step.elements[a] * v.adjoint();
        sx += (e * e * p).trace().real();
      }
      ex += nu(x) * sx;
    }
    total += d.ladder.weights[k] * ex / static_cast<Real>(r);
  }
  return total;
}

// ---------------------------------------------------------------------------
// Correlation mixtures
// ---------------------------------------------------------------------------

MixtureResult mixture_correlation(const PMEDecomposition& d, const Strategy& original,
                                  const RMat& tilde_nu) {
  if (!is_projective(original.alice) || !is_projective(original.bob))
    fail(ErrorCode::NotProjective, "mixture comparison needs a projective original");
  if (d.step_families.empty())
    fail(ErrorCode::DimensionMismatch, "decomposition has no steps");
  const int n = d.step_families.front().size();
  const int na = d.step_families.front().measurements.front().size();
  if (original.alice.size() != n || original.bob.size() != n)
    fail(ErrorCode::DimensionMismatch, "original question count differs from the steps");
  if (original.alice.measurements.front().size() != na ||
      original.bob.measurements.front().size() != na)
    fail(ErrorCode::DimensionMismatch, "original outcome count differs from the steps");
  if (tilde_nu.rows() != n || tilde_nu.cols() != n)
    fail(ErrorCode::DimensionMismatch, "joint distribution shape differs");
  require_joint(tilde_nu, "joint distribution");

  MixtureResult out;
  out.mixed.nx = out.mixed.ny = n;
  out.mixed.na = out.mixed.nb = na;
  out.mixed.table.assign(static_cast<size_t>(n) * n * na * na, 0.0);
  for (int k = 0; k < d.ladder.steps(); ++k) {
    const Real w = d.ladder.weights[k];
    const Real r = static_cast<Real>(d.ladder.ranks[k]);
    const MeasurementFamily& fam = d.step_families[k];
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        for (int a = 0; a < na; ++a)
          for (int b = 0; b < na; ++b)
            out.mixed.at(x, y, a, b) +=
                w *
                (fam.measurements[x].elements[a] * fam.measurements[y].elements[b])
                    .trace()
                    .real() /
                r;
  }

  Correlation reference = induce_correlation(original);
  Real gap = 0.0;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      if (tilde_nu(x, y) == 0.0) continue;
      Real s = 0.0;
      for (int a = 0; a < na; ++a)
        for (int b = 0; b < na; ++b)
          s += std::abs(reference.at(x, y, a, b) - out.mixed.at(x, y, a, b));
      gap += tilde_nu(x, y) * s;
    }
  out.l1_gap = gap;
  return out;
}

// ---------------------------------------------------------------------------
// Projection-game rounding
// ---------------------------------------------------------------------------

RoundResult projection_round(const NonlocalGame& g, const Strategy& s,
                             std::optional<ProjectionStructure> structure,
                             int dimension_cap) {
  if (!structure) {
    structure = detect_projection(g);
    if (!structure)
      fail(ErrorCode::NotProjectionGame, "game is not a projection game");
  }

  RoundResult out;
  if (is_projective(s.alice) && is_projective(s.bob)) {
    out.dilated = s;
    for (auto& m : out.dilated.alice.measurements) m.kind = MeasurementKind::projective;
    for (auto& m : out.dilated.bob.measurements) m.kind = MeasurementKind::projective;
  } else {
    out.dilated = naimark_dilate(s, dimension_cap);
  }
  const Strategy& ds = out.dilated;

  Real value = game_value(g, ds);
  out.epsilon = 1.0 - value;

  // Bob-side sub-measurements indexed by Alice's questions:
  // B^x_a = E_{y ~ nu(.|x)} sum_b D(a,b|x,y) B^y_b. For a projection game the
  // inner sum has at most one term; the family sums to at most a multiple of
  // the identity, not necessarily below it, so it is carried as raw matrices.
  const int nx = g.nx();
  const int na = g.na();
  const int db = ds.state.d_b;
  RVec nu_a = marginal_x(g.nu);
  std::vector<std::vector<Mat>> bsub(
      nx, std::vector<Mat>(na, Mat::Zero(db, db)));
  for (int x = 0; x < nx; ++x) {
    Real row = g.nu.row(x).sum();
    if (row <= 0.0) continue;
    for (int y = 0; y < g.ny(); ++y) {
      if (g.nu(x, y) == 0.0) continue;
      Real cond = g.nu(x, y) / row;
      for (int a = 0; a < na; ++a)
        for (int b = 0; b < g.nb(); ++b)
          if (g.predicate(x, y, a, b))
            bsub[x][a] += cond * ds.bob.measurements[y].elements[b];
    }
  }

  // One canonical eigendecomposition of rho_A supplies the symmetrized side,
  // the ladder basis and the Schmidt pairing for the step states.
  Mat psi = ds.state.reshaped();
  Mat rho_a = hermitize(psi * psi.adjoint());
  HermitianEigensystem es = eigh(rho_a);
  out.symmetrized.basis = es.vectors;
  out.symmetrized.schmidt_weights = es.values.cwiseMax(0.0);
  out.symmetrized.schmidt_weights /= out.symmetrized.schmidt_weights.sum();
  out.symmetrized.family = ds.alice;

  out.decomposition = pme_decompose(out.symmetrized, nu_a);
  out.self_consistency = 1.0 - out.decomposition.diagnostics.delta_sync_in;

  // Schmidt right vectors paired with the ladder basis columns.
  const SpectralLadder& ladder = out.decomposition.ladder;
  const int depth = ladder.ranks.back();
  Mat beta(db, depth);
  for (int i = 0; i < depth; ++i) {
    Real si = std::sqrt(std::max(Real(0), es.values(i)));
    Vec b = psi.transpose() * es.vectors.col(i).conjugate();
    beta.col(i) = si > 1e-12 ? Vec(b / si) : Vec(b.normalized());
  }

  out.mixture_value = 0.0;
  for (int k = 0; k < ladder.steps(); ++k) {
    const int r = ladder.ranks[k];
    const Mat& v = ladder.isometries[k].matrix;
    // Maximally entangled step state through the Schmidt pairing, as a
    // d_A x d_B reshaped matrix.
    Mat psi_k = Mat::Zero(psi.rows(), db);
    for (int i = 0; i < r; ++i)
      psi_k += es.vectors.col(i) * beta.col(i).transpose();
    psi_k /= psi_k.norm();

    Real omega = 0.0;
    const MeasurementFamily& fam = out.decomposition.step_families[k];
    for (int x = 0; x < nx; ++x) {
      if (nu_a(x) == 0.0) continue;
      Real sx = 0.0;
      for (int a = 0; a < na; ++a) {
        Mat embedded = v * fam.measurements[x].elements[a] * v.adjoint();
        sx += (psi_k.adjoint() * embedded * psi_k * bsub[x][a].transpose())
                  .trace()
                  .real();
      }
      omega += nu_a(x) * sx;
    }
    out.step_values.push_back(omega);
    out.mixture_value += ladder.weights[k] * omega;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Measurement lifting
// ---------------------------------------------------------------------------

MeasurementFamily lift_measurements(const PMEDecomposition& d,
                                    const std::vector<MeasurementFamily>& per_step,
                                    const Mat& rho) {
  const int steps = d.ladder.steps();
  if (static_cast<int>(per_step.size()) != steps)
    fail(ErrorCode::DimensionMismatch, "one family per ladder step required");
  const int dim = static_cast<int>(d.ladder.isometries.front().matrix.rows());
  if (rho.rows() != dim || rho.cols() != dim)
    fail(ErrorCode::DimensionMismatch, "density dimension differs from the ladder");

  const MeasurementFamily& first = per_step.front();
  const int ny = first.size();
  for (int k = 0; k < steps; ++k) {
    if (per_step[k].size() != ny || per_step[k].questions != first.questions)
      fail(ErrorCode::DimensionMismatch, "per-step families have different questions");
    if (per_step[k].dim() != d.ladder.ranks[k])
      fail(ErrorCode::DimensionMismatch, "step family dimension differs from its rank");
    for (int y = 0; y < ny; ++y)
      if (per_step[k].measurements[y].outcomes != first.measurements[y].outcomes)
        fail(ErrorCode::DimensionMismatch, "per-step families have different outcomes");
  }

  HermitianEigensystem es = eigh(rho);
  int support = 0;
  for (const auto& [v, n] : cluster_eigenvalues(es.values))
    if (v > tol::eig_merge) support += n;
  if (support != d.ladder.ranks.back())
    fail(ErrorCode::SingularRho, "support of rho differs from the ladder support");
  Mat inv_sqrt = spectral_map(
      rho, [](Real v) { return v > tol::eig_merge ? 1.0 / std::sqrt(v) : 0.0; });

  MeasurementFamily out;
  out.questions = first.questions;
  for (int y = 0; y < ny; ++y) {
    Measurement m;
    m.outcomes = first.measurements[y].outcomes;
    m.kind = MeasurementKind::general;
    const int nb = first.measurements[y].size();
    for (int b = 0; b < nb; ++b) {
      Mat glue = Mat::Zero(dim, dim);
      for (int k = 0; k < steps; ++k) {
        const Mat& v = d.ladder.isometries[k].matrix;
        glue += d.ladder.gap(k) * (v * per_step[k].measurements[y].elements[b] * v.adjoint());
      }
      m.elements.push_back(hermitize(inv_sqrt * glue * inv_sqrt));
    }
    out.measurements.push_back(std::move(m));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Commutators and global consistency
// ---------------------------------------------------------------------------

Real commutator_defect(const SymmetricStrategy& s, int x0, int x1) {
  if (x0 < 0 || x0 >= s.family.size() || x1 < 0 || x1 >= s.family.size())
    fail(ErrorCode::InvalidArgument, "question index out of range");
  const Measurement& m0 = s.family.measurements[x0];
  const Measurement& m1 = s.family.measurements[x1];
  if (m0.size() != 2 || m1.size() != 2)
    fail(ErrorCode::NotBinary, "commutator defect needs binary questions");
  if (!is_projective(m0) || !is_projective(m1))
    fail(ErrorCode::NotProjective, "commutator defect needs projective questions");
  Mat a0 = m0.elements[0] - m0.elements[1];
  Mat a1 = m1.elements[0] - m1.elements[1];
  Mat k = a0 * a1 - a1 * a0;
  return (k.adjoint() * k * s.rho()).trace().real();
}

Real global_consistency(const Strategy& s, const MeasurementFamily& m, const RMat& p,
                        const std::vector<std::vector<std::vector<std::vector<int>>>>& g) {
  const int nx = s.alice.size();
  const int ny = m.size();
  if (p.rows() != nx || p.cols() != ny)
    fail(ErrorCode::DimensionMismatch, "joint distribution shape differs");
  require_joint(p, "joint distribution");
  if (m.dim() != s.state.d_b)
    fail(ErrorCode::DimensionMismatch, "measurement dimension differs from the state");
  if (static_cast<int>(g.size()) != nx)
    fail(ErrorCode::DimensionMismatch, "subset map shape differs");

  Real total = 0.0;
  for (int x = 0; x < nx; ++x) {
    if (static_cast<int>(g[x].size()) != ny)
      fail(ErrorCode::DimensionMismatch, "subset map shape differs");
    const int na = s.alice.measurements[x].size();
    for (int y = 0; y < ny; ++y) {
      if (static_cast<int>(g[x][y].size()) != na)
        fail(ErrorCode::DimensionMismatch, "subset map shape differs");
      const int nb = m.measurements[y].size();
      std::vector<bool> seen(nb, false);
      for (int a = 0; a < na; ++a)
        for (int b : g[x][y][a]) {
          if (b < 0 || b >= nb)
            fail(ErrorCode::InvalidArgument, "subset entry out of range");
          if (seen[b]) fail(ErrorCode::OverlappingSets, "answer sets overlap");
          seen[b] = true;
        }
      if (p(x, y) == 0.0) continue;
      Real sx = 0.0;
      for (int a = 0; a < na; ++a) {
        if (g[x][y][a].empty()) continue;
        Mat ms = Mat::Zero(m.dim(), m.dim());
        for (int b : g[x][y][a]) ms += m.measurements[y].elements[b];
        sx += pair_expectation(s.state, s.alice.measurements[x].elements[a], ms).real();
      }
      total += p(x, y) * sx;
    }
  }
  return total;
}

}  // namespace pmeround
