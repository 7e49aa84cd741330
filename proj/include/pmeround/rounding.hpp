// The rounding machinery: Naimark dilation, orthonormalization of almost
// consistent measurements into projective ones, the spectral ladder of
// threshold projectors, the decomposition into projective maximally
// entangled step strategies, correlation mixtures, projection-game rounding,
// measurement lifting and commutator defects.
#pragma once

#include <optional>
#include <vector>

#include "pmeround/base.hpp"
#include "pmeround/game.hpp"
#include "pmeround/linalg.hpp"
#include "pmeround/strategy.hpp"

namespace pmeround {

// Threshold projectors of a density at its distinct (merged) positive
// eigenvalues l_1 > ... > l_m > 0.  Step k embeds C^{r_k} onto the span of
// the top r_k eigenvectors; w_k = r_k (l_k - l_{k+1}) with l_{m+1} = 0 makes
// the weights a probability measure and sum_k (l_k - l_{k+1}) P_k = rho.
struct SpectralLadder {
  std::vector<Real> breakpoints;     // l_1 > ... > l_m > 0
  std::vector<Isometry> isometries;  // V_k, dim x r_k, nested ranges
  std::vector<Real> weights;         // w_k = r_k (l_k - l_{k+1})
  std::vector<int> ranks;            // r_k, strictly increasing

  int steps() const { return static_cast<int>(breakpoints.size()); }
  Mat projector(int k) const;  // P_k = V_k V_k^dag
  // Interval length l_k - l_{k+1}; equals weights[k] / ranks[k].
  Real gap(int k) const { return weights[k] / ranks[k]; }
};

struct DecompositionDiagnostics {
  Real delta_sync_in = 0.0;       // synchronicity defect of the input
  Real delta_prime = 0.0;         // defect after orthonormalization
  Real commutation_defect = 0.0;  // integrated squared commutator norms
  Real residual = 0.0;            // weighted distance input vs step families
  Real reconstruction_error = 0.0;  // || sum (l_k - l_{k+1}) P_k - rho ||_F
};

struct PMEDecomposition {
  SpectralLadder ladder;
  // step_families[k]: projective family on C^{r_k} (step coordinates).
  std::vector<MeasurementFamily> step_families;
  DecompositionDiagnostics diagnostics;
};

Strategy naimark_dilate(const Strategy& s, int dimension_cap = kDefaultDilationCap);

// Rounds a full measurement to a projective one close to it in the
// rho-weighted sense.  Greedy sequential subspace rounding: outcomes ordered
// by decreasing Tr(Q_a rho); D_a = chi_{>=1/2}(Q_a) compressed onto the
// complement of previously assigned ranges; leftover directions are handed
// to the outcome with the largest diagonal expectation. Projective inputs
// are returned unchanged.
Measurement orthonormalize(const Measurement& q, const Mat& rho);

// Closeness functional of the orthonormalization guarantee:
// sum_i Tr((P_i - Q_i)^2 rho).
Real orthonormalize_closeness(const Measurement& p, const Measurement& q, const Mat& rho);

SpectralLadder build_ladder(const Mat& rho);

// Ladder from an already-diagonalized density (carried basis + weights);
// avoids a second eigendecomposition and thus any basis drift.
SpectralLadder build_ladder_from_spectrum(const Mat& basis, const RVec& weights);

// Discretized integral over the ladder intervals of
// E_x sum_a || B^x_a P_l - P_l B^x_a ||_F^2.
Real commutation_defect(const MeasurementFamily& family, const SpectralLadder& ladder,
                        const RVec& nu);

// Exactly discretized integral over lambda of
// || chi_{>= sqrt(l)}(rho^{1/2}) - chi_{>= sqrt(l)}(sigma^{1/2}) ||_F^2;
// the integrand is piecewise constant between merged eigenvalue breakpoints.
Real threshold_projector_distance_integral(const Mat& rho, const Mat& sigma);

PMEDecomposition pme_decompose(const SymmetricStrategy& s, const RVec& nu);

Real residual(const PMEDecomposition& d, const SymmetricStrategy& original, const RVec& nu);

struct MixtureResult {
  Correlation mixed;
  Real l1_gap = 0.0;
};

// Mixed correlation sum_k w_k C^{(k)} of the step strategies, compared to the
// correlation of the (projective) original under the joint distribution.
MixtureResult mixture_correlation(const PMEDecomposition& d, const Strategy& original,
                                  const RMat& tilde_nu);

struct RoundResult {
  PMEDecomposition decomposition;  // on the Alice side
  Real mixture_value = 0.0;        // sum_k w_k omega_k
  Real epsilon = 0.0;              // 1 - value of the (dilated) input strategy
  Real self_consistency = 0.0;     // 1 - delta_sync of the symmetrized side
  std::vector<Real> step_values;   // omega_k
  SymmetricStrategy symmetrized;   // Alice side, basis aligned with the ladder
  Strategy dilated;                // projective strategy actually rounded
};

RoundResult projection_round(const NonlocalGame& g, const Strategy& s,
                             std::optional<ProjectionStructure> structure = std::nullopt,
                             int dimension_cap = kDefaultDilationCap);

// Glue measurements on the support of rho out of per-step measurements:
// M^y_b = rho^{-1/2} (sum_k (w_k / r_k) V_k M^{(k),y}_b V_k^dag) rho^{-1/2}.
MeasurementFamily lift_measurements(const PMEDecomposition& d,
                                    const std::vector<MeasurementFamily>& per_step,
                                    const Mat& rho);

// Tr([A^{x0}, A^{x1}]^dag [A^{x0}, A^{x1}] rho) for the observables
// A^x = A^x_0 - A^x_1 of two binary projective questions.
Real commutator_defect(const SymmetricStrategy& s, int x0, int x1);

// E_{(x,y)~p} sum_a <psi| A^x_a (x) M^y_[g_xy(a)] |psi> with
// M_[S] = sum_{b in S} M_b; the answer sets g_xy(a) must be pairwise
// disjoint for fixed (x,y).
Real global_consistency(const Strategy& s, const MeasurementFamily& m, const RMat& p,
                        const std::vector<std::vector<std::vector<std::vector<int>>>>& g);

}  // namespace pmeround
