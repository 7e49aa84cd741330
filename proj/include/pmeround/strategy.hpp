// States, measurements, strategies, correlations, the synchronicity defect,
// the tracial evaluation formula and canonical symmetrization.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pmeround/base.hpp"
#include "pmeround/linalg.hpp"

namespace pmeround {

struct BipartiteState {
  int d_a = 0;
  int d_b = 0;
  Vec amplitudes;  // length d_a * d_b, row-major over (i, j); unit norm

  BipartiteState() = default;
  BipartiteState(int da, int db, Vec amp);

  // Matrix view Psi(i, j) = amplitudes(i * d_b + j).
  Mat reshaped() const;
};

enum class MeasurementKind { general, projective, sub };

struct Measurement {
  std::vector<std::string> outcomes;
  std::vector<Mat> elements;  // one PSD matrix per outcome, common dimension
  MeasurementKind kind = MeasurementKind::general;

  int dim() const { return elements.empty() ? 0 : static_cast<int>(elements.front().rows()); }
  int size() const { return static_cast<int>(elements.size()); }
};

struct MeasurementFamily {
  std::vector<std::string> questions;
  std::vector<Measurement> measurements;  // aligned with questions

  int dim() const { return measurements.empty() ? 0 : measurements.front().dim(); }
  int size() const { return static_cast<int>(measurements.size()); }
};

struct Strategy {
  BipartiteState state;
  MeasurementFamily alice;  // on dimension d_a
  MeasurementFamily bob;    // on dimension d_b
};

// Symmetric strategy: shared state sum_i sqrt(w_i) |u_i>|u_i> with Bob's
// measurements implied as transposes of Alice's in the carried basis {u_i}.
// The basis is carried explicitly because every tracial formula below is
// basis-dependent and silent basis drift is the main correctness hazard.
struct SymmetricStrategy {
  Mat basis;              // unitary, columns u_i
  RVec schmidt_weights;   // nonnegative, sum 1, sorted non-increasing
  MeasurementFamily family;

  Mat rho() const;             // basis diag(weights) basis^dag
  Vec state_amplitudes() const;  // sum_i sqrt(w_i) u_i (x) u_i
  Mat transpose_in_basis(const Mat& m) const;
  Strategy as_strategy() const;  // explicit two-sided view
};

struct Correlation {
  int nx = 0, ny = 0, na = 0, nb = 0;
  std::vector<Real> table;  // index ((x*ny + y)*na + a)*nb + b

  Real at(int x, int y, int a, int b) const {
    return table[static_cast<size_t>(((x * ny + y) * na + a)) * nb + b];
  }
  Real& at(int x, int y, int a, int b) {
    return table[static_cast<size_t>(((x * ny + y) * na + a)) * nb + b];
  }
};

// Diagnostics record of validate(); pure report, never throws.
struct MeasurementDiagnostics {
  std::vector<Real> min_eigenvalues;        // per element
  std::vector<Real> element_spectral_defect;  // per element max |l - l^2|
  Real completeness_defect = 0.0;           // || sum E - Id ||_F
  Real projectivity_defect = 0.0;           // max_e || E^2 - E ||_F
  Real sub_defect = 0.0;                    // max(0, -min eig(Id - sum E))
  bool psd_ok = true;
  bool complete_ok = true;    // judged per declared kind
  bool projective_ok = true;  // only meaningful for kind projective
};

MeasurementDiagnostics validate(const Measurement& m);

// <psi| A (x) B |psi> for the given bipartite state, via the reshape identity
// <psi| A (x) B |psi> = Tr(Psi^dag A Psi B^T).
Cplx pair_expectation(const BipartiteState& state, const Mat& a, const Mat& b);

Correlation induce_correlation(const Strategy& s);

Real delta_sync(const Strategy& s, const RVec& nu);
Real delta_sync(const Correlation& c, const RVec& nu);
Real delta_sync(const SymmetricStrategy& s, const RVec& nu);

// Tr(X rho^{1/2} Y^T rho^{1/2}) with the transpose taken in the given basis.
Cplx tracial_eval(const Mat& rho, const Mat& x, const Mat& y, const Mat& basis);

// Canonical purification sum_i sqrt(l_i) |u_i>|u_i> of a density matrix,
// returned with the (canonical) eigenbasis that defines it.
std::pair<BipartiteState, Mat> canonical_purification(const Mat& rho);

SymmetricStrategy symmetrize_side(const Strategy& s, Subsystem side);

bool is_projective(const Measurement& m, Real tolerance = tol::projectivity);
bool is_projective(const MeasurementFamily& f, Real tolerance = tol::projectivity);

void require_distribution(const RVec& nu, const char* what);

}  // namespace pmeround
