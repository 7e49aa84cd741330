// Dense complex linear algebra kernels: canonical Hermitian eigensystems,
// spectral functional calculus, partial trace, Schmidt decomposition and
// deterministic unitary completion. All eigenbases are post-processed into a
// solver-independent canonical form so downstream spectral constructions are
// reproducible bit-for-bit.
#pragma once

#include <functional>
#include <vector>

#include "pmeround/base.hpp"

namespace pmeround {

struct HermitianEigensystem {
  RVec values;   // sorted non-increasing
  Mat vectors;   // unitary; column i pairs with values[i]
};

struct Isometry {
  Mat matrix;  // rows >= cols, V^dag V = Id

  Isometry() = default;
  explicit Isometry(Mat m);
};

enum class Subsystem { A, B };

// Eigendecomposition of a Hermitian matrix with deterministic basis choice:
// eigenvalues sorted non-increasing; inside every degeneracy cluster (gap
// <= tol::eig_merge) the basis is rebuilt by Gram-Schmidt over projected
// standard basis vectors in index order; each vector's largest-magnitude
// entry is made real positive.
HermitianEigensystem eigh(const Mat& h);

// V f(diag) V^dag through eigh.
Mat spectral_map(const Mat& h, const std::function<Real(Real)>& f);

// Closed-threshold indicator: 1 on [lambda, inf), 0 below.  Measure-zero
// boundary resolved identically everywhere in the code base.
inline Real chi_ge(Real lambda, Real x) { return x >= lambda ? 1.0 : 0.0; }

Mat partial_trace(const Mat& m, int d_a, int d_b, Subsystem keep);

struct SchmidtDecomposition {
  RVec coefficients;  // non-increasing, positive part only
  Mat left;           // columns orthonormal in C^{d_a}
  Mat right;          // columns orthonormal in C^{d_b}
};

SchmidtDecomposition schmidt(const Vec& psi, int d_a, int d_b);

// Extends an isometry to a unitary; the added columns come from Gram-Schmidt
// against the standard basis taken in index order (deterministic).
Mat complete_to_unitary(const Isometry& v);

// Generalization used by the dilation construction: produce a unitary whose
// column at positions[j] equals cols.col(j); the remaining columns fill the
// free positions in index order, again via standard-basis Gram-Schmidt.
Mat complete_columns_at(const Mat& cols, const std::vector<int>& positions);

Mat kron(const Mat& a, const Mat& b);
Vec kron_vec(const Vec& a, const Vec& b);

// Cluster a non-increasing eigenvalue sequence at absolute gap tol::eig_merge.
// Returns (value, multiplicity) pairs, values replaced by cluster means.
std::vector<std::pair<Real, int>> cluster_eigenvalues(const RVec& sorted_desc);

inline Real frob(const Mat& m) { return m.norm(); }

}  // namespace pmeround
