#include "pmeround/strategy.hpp"

#include <cmath>

namespace pmeround {

BipartiteState::BipartiteState(int da, int db, Vec amp)
    : d_a(da), d_b(db), amplitudes(std::move(amp)) {
  if (d_a <= 0 || d_b <= 0 ||
      amplitudes.size() != static_cast<Eigen::Index>(d_a) * d_b)
    fail(ErrorCode::DimensionMismatch, "state length is not d_a * d_b");
  if (!amplitudes.allFinite())
    fail(ErrorCode::NonFinite, "state has NaN or Inf amplitudes");
  if (std::abs(amplitudes.norm() - 1.0) > tol::state_norm)
    fail(ErrorCode::NotNormalized, "state is not unit norm");
}

Mat BipartiteState::reshaped() const {
  Mat m(d_a, d_b);
  for (int i = 0; i < d_a; ++i)
    for (int j = 0; j < d_b; ++j) m(i, j) = amplitudes(i * d_b + j);
  return m;
}

Mat SymmetricStrategy::rho() const {
  return basis * schmidt_weights.cast<Cplx>().asDiagonal() * basis.adjoint();
}

Vec SymmetricStrategy::state_amplitudes() const {
  const int d = static_cast<int>(basis.rows());
  Vec psi = Vec::Zero(static_cast<Eigen::Index>(d) * d);
  for (int k = 0; k < schmidt_weights.size(); ++k) {
    Real s = std::sqrt(std::max(Real(0), schmidt_weights(k)));
    if (s == 0.0) continue;
    psi += s * kron_vec(basis.col(k), basis.col(k));
  }
  return psi;
}

Mat SymmetricStrategy::transpose_in_basis(const Mat& m) const {
  // T_U(M) = U (U^dag M U)^T U^dag
  Mat in_basis = basis.adjoint() * m * basis;
  return basis * in_basis.transpose() * basis.adjoint();
}

Strategy SymmetricStrategy::as_strategy() const {
  const int d = static_cast<int>(basis.rows());
  Strategy s;
  s.state = BipartiteState(d, d, state_amplitudes().normalized());
  s.alice = family;
  s.bob.questions = family.questions;
  s.bob.measurements.reserve(family.measurements.size());
  for (const auto& m : family.measurements) {
    Measurement t;
    t.outcomes = m.outcomes;
    t.kind = m.kind;
    t.elements.reserve(m.elements.size());
    for (const auto& e : m.elements) t.elements.push_back(transpose_in_basis(e));
    s.bob.measurements.push_back(std::move(t));
  }
  return s;
}

MeasurementDiagnostics validate(const Measurement& m) {
  MeasurementDiagnostics d;
  if (m.elements.empty()) return d;
  const int dim = m.dim();
  Mat sum = Mat::Zero(dim, dim);
  for (const auto& e : m.elements) {
    HermitianEigensystem es = eigh(e);
    Real min_eig = es.values(es.values.size() - 1);
    d.min_eigenvalues.push_back(min_eig);
    Real defect = 0.0;
    for (int i = 0; i < es.values.size(); ++i) {
      Real l = es.values(i);
      defect = std::max(defect, std::abs(l - l * l));
    }
    d.element_spectral_defect.push_back(defect);
    d.projectivity_defect = std::max(d.projectivity_defect, frob(e * e - e));
    if (min_eig < -tol::psd) d.psd_ok = false;
    sum += e;
  }
  d.completeness_defect = frob(sum - Mat::Identity(dim, dim));
  HermitianEigensystem gap = eigh(Mat::Identity(dim, dim) - sum);
  d.sub_defect = std::max(Real(0), -gap.values(gap.values.size() - 1));
  switch (m.kind) {
    case MeasurementKind::sub:
      d.complete_ok = d.sub_defect <= tol::sub_measure;
      break;
    case MeasurementKind::projective:
      d.complete_ok = d.completeness_defect <= tol::completeness;
      d.projective_ok = d.projectivity_defect <= tol::projectivity;
      break;
    case MeasurementKind::general:
      d.complete_ok = d.completeness_defect <= tol::completeness;
      break;
  }
  return d;
}

Cplx pair_expectation(const BipartiteState& state, const Mat& a, const Mat& b) {
  if (a.rows() != state.d_a || a.cols() != state.d_a ||
      b.rows() != state.d_b || b.cols() != state.d_b)
    fail(ErrorCode::DimensionMismatch, "operator does not match its side");
  Mat psi = state.reshaped();
  return (psi.adjoint() * a * psi * b.transpose()).trace();
}

Correlation induce_correlation(const Strategy& s) {
  Correlation c;
  c.nx = s.alice.size();
  c.ny = s.bob.size();
  if (c.nx == 0 || c.ny == 0)
    fail(ErrorCode::DimensionMismatch, "strategy has an empty question side");
  c.na = s.alice.measurements.front().size();
  c.nb = s.bob.measurements.front().size();
  for (const auto& m : s.alice.measurements)
    if (m.size() != c.na || m.dim() != s.state.d_a)
      fail(ErrorCode::DimensionMismatch, "ragged Alice measurement family");
  for (const auto& m : s.bob.measurements)
    if (m.size() != c.nb || m.dim() != s.state.d_b)
      fail(ErrorCode::DimensionMismatch, "ragged Bob measurement family");

  c.table.assign(static_cast<size_t>(c.nx) * c.ny * c.na * c.nb, 0.0);
  Mat psi = s.state.reshaped();
  for (int x = 0; x < c.nx; ++x) {
    for (int a = 0; a < c.na; ++a) {
      Mat left = psi.adjoint() * s.alice.measurements[x].elements[a] * psi;
      for (int y = 0; y < c.ny; ++y) {
        for (int b = 0; b < c.nb; ++b) {
          Cplx v = (left * s.bob.measurements[y].elements[b].transpose()).trace();
          if (std::abs(v.imag()) > tol::correlation_im)
            fail(ErrorCode::NonHermitian, "correlation entry has a large imaginary part");
          c.at(x, y, a, b) = v.real();
        }
      }
    }
  }
  return c;
}

Real delta_sync(const Correlation& c, const RVec& nu) {
  if (c.nx != c.ny || c.na != c.nb)
    fail(ErrorCode::DimensionMismatch, "synchronicity needs matching question/answer sets");
  require_distribution(nu, "question distribution");
  if (nu.size() != c.nx)
    fail(ErrorCode::DimensionMismatch, "distribution length differs from question count");
  Real d = 0.0;
  for (int x = 0; x < c.nx; ++x) {
    if (nu(x) == 0.0) continue;
    Real off = 0.0;
    for (int a = 0; a < c.na; ++a)
      for (int b = 0; b < c.nb; ++b)
        if (a != b) off += c.at(x, x, a, b);
    d += nu(x) * off;
  }
  return d;
}

Real delta_sync(const Strategy& s, const RVec& nu) {
  return delta_sync(induce_correlation(s), nu);
}

Real delta_sync(const SymmetricStrategy& s, const RVec& nu) {
  require_distribution(nu, "question distribution");
  if (nu.size() != s.family.size())
    fail(ErrorCode::DimensionMismatch, "distribution length differs from question count");
  // Bob's implied element is the basis transpose of Alice's, and the tracial
  // identity collapses the pair term to Tr(A sqrt(rho) A sqrt(rho)).
  Mat rho = s.rho();
  Mat sqrt_rho = spectral_map(rho, [](Real x) { return x > 0.0 ? std::sqrt(x) : 0.0; });
  Real d = 0.0;
  for (int x = 0; x < s.family.size(); ++x) {
    if (nu(x) == 0.0) continue;
    Real agree = 0.0;
    for (const auto& e : s.family.measurements[x].elements)
      agree += (e * sqrt_rho * e * sqrt_rho).trace().real();
    d += nu(x) * (1.0 - agree);
  }
  return d;
}

Cplx tracial_eval(const Mat& rho, const Mat& x, const Mat& y, const Mat& basis) {
  Mat sqrt_rho = spectral_map(rho, [](Real v) { return v > 0.0 ? std::sqrt(v) : 0.0; });
  Mat y_t = basis * (basis.adjoint() * y * basis).transpose() * basis.adjoint();
  return (x * sqrt_rho * y_t * sqrt_rho).trace();
}

std::pair<BipartiteState, Mat> canonical_purification(const Mat& rho) {
  if (rho.rows() != rho.cols())
    fail(ErrorCode::NotSquare, "density matrix must be square");
  HermitianEigensystem es = eigh(rho);
  if (es.values(es.values.size() - 1) < -tol::psd)
    fail(ErrorCode::NotDensity, "density matrix has a negative eigenvalue");
  if (std::abs(es.values.sum() - 1.0) > tol::trace_one)
    fail(ErrorCode::NotDensity, "density matrix trace differs from one");
  const int d = static_cast<int>(rho.rows());
  Vec psi = Vec::Zero(static_cast<Eigen::Index>(d) * d);
  for (int k = 0; k < d; ++k) {
    Real w = std::max(Real(0), es.values(k));
    if (w == 0.0) continue;
    psi += std::sqrt(w) * kron_vec(es.vectors.col(k), es.vectors.col(k));
  }
  return {BipartiteState(d, d, psi.normalized()), es.vectors};
}

SymmetricStrategy symmetrize_side(const Strategy& s, Subsystem side) {
  Mat psi = s.state.reshaped();
  Mat rho = side == Subsystem::A ? Mat(psi * psi.adjoint())
                                 : Mat(psi.transpose() * psi.conjugate());
  HermitianEigensystem es = eigh(rho);
  SymmetricStrategy out;
  out.basis = es.vectors;
  out.schmidt_weights = es.values.cwiseMax(0.0);
  Real total = out.schmidt_weights.sum();
  if (total <= 0.0) fail(ErrorCode::NotDensity, "reduced state has no weight");
  out.schmidt_weights /= total;
  out.family = side == Subsystem::A ? s.alice : s.bob;
  if (out.family.dim() != out.basis.rows())
    fail(ErrorCode::DimensionMismatch, "measurement dimension differs from reduced state");
  return out;
}

bool is_projective(const Measurement& m, Real tolerance) {
  const int dim = m.dim();
  Mat sum = Mat::Zero(dim, dim);
  for (const auto& e : m.elements) {
    if (frob(e * e - e) > tolerance) return false;
    sum += e;
  }
  return frob(sum - Mat::Identity(dim, dim)) <= tol::completeness;
}

bool is_projective(const MeasurementFamily& f, Real tolerance) {
  for (const auto& m : f.measurements)
    if (!is_projective(m, tolerance)) return false;
  return true;
}

void require_distribution(const RVec& nu, const char* what) {
  if (nu.size() == 0) fail(ErrorCode::DimensionMismatch, std::string(what) + " is empty");
  Real sum = 0.0;
  for (int i = 0; i < nu.size(); ++i) {
    if (!std::isfinite(nu(i)) || nu(i) < -tol::distribution)
      fail(ErrorCode::InvalidArgument, std::string(what) + " has a negative or non-finite entry");
    sum += nu(i);
  }
  if (std::abs(sum - 1.0) > tol::distribution)
    fail(ErrorCode::InvalidArgument, std::string(what) + " does not sum to one");
}

}  // namespace pmeround
