#include "pmeround/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace pmeround {

namespace {

// Rotate the global phase of a column so its largest-magnitude entry (lowest
// index on ties) becomes real positive. Deterministic representative of the
// U(1) orbit.
void canonical_phase(Eigen::Ref<Vec> column) {
  int pivot = 0;
  Real best = -1.0;
  for (int i = 0; i < column.size(); ++i) {
    Real mag = std::abs(column(i));
    if (mag > best + 1e-12) {
      best = mag;
      pivot = i;
    }
  }
  if (best <= 0.0) return;
  Cplx phase = column(pivot) / best;
  column *= std::conj(phase);
}

// Rebuild the basis of a degenerate cluster from standard basis projections,
// Gram-Schmidt in index order. The output spans the same subspace but no
// longer depends on the solver's arbitrary in-cluster choice.
void canonicalize_cluster(Mat& vectors, int begin, int count) {
  if (count <= 1) {
    canonical_phase(vectors.col(begin));
    return;
  }
  const int d = static_cast<int>(vectors.rows());
  Mat block = vectors.middleCols(begin, count);
  Mat proj = block * block.adjoint();  // projector onto the cluster subspace
  Mat rebuilt(d, count);
  int found = 0;
  for (int j = 0; j < d && found < count; ++j) {
    Vec cand = proj.col(j);  // proj * e_j
    for (int k = 0; k < found; ++k) cand -= rebuilt.col(k).dot(cand) * rebuilt.col(k);
    // second pass for numerical orthogonality
    for (int k = 0; k < found; ++k) cand -= rebuilt.col(k).dot(cand) * rebuilt.col(k);
    Real n = cand.norm();
    if (n > 1e-6) rebuilt.col(found++) = cand / n;
  }
  // Fallback: keep solver vectors orthonormalized against what we have.
  for (int j = 0; j < count && found < count; ++j) {
    Vec cand = block.col(j);
    for (int k = 0; k < found; ++k) cand -= rebuilt.col(k).dot(cand) * rebuilt.col(k);
    Real n = cand.norm();
    if (n > 1e-6) rebuilt.col(found++) = cand / n;
  }
  for (int k = 0; k < count; ++k) canonical_phase(rebuilt.col(k));
  vectors.middleCols(begin, count) = rebuilt;
}

}  // namespace

Isometry::Isometry(Mat m) : matrix(std::move(m)) {
  if (matrix.rows() < matrix.cols())
    fail(ErrorCode::NotIsometry, "more columns than rows");
  Mat gram = matrix.adjoint() * matrix;
  gram -= Mat::Identity(matrix.cols(), matrix.cols());
  if (gram.norm() > 1e-8)
    fail(ErrorCode::NotIsometry, "columns are not orthonormal");
}

std::vector<std::pair<Real, int>> cluster_eigenvalues(const RVec& sorted_desc) {
  std::vector<std::pair<Real, int>> clusters;
  int i = 0;
  const int n = static_cast<int>(sorted_desc.size());
  while (i < n) {
    int j = i + 1;
    while (j < n && sorted_desc(j - 1) - sorted_desc(j) <= tol::eig_merge) ++j;
    Real mean = 0.0;
    for (int k = i; k < j; ++k) mean += sorted_desc(k);
    mean /= (j - i);
    clusters.emplace_back(mean, j - i);
    i = j;
  }
  return clusters;
}

HermitianEigensystem eigh(const Mat& h) {
  if (h.rows() != h.cols())
    fail(ErrorCode::NonHermitian, "matrix is not square");
  if (!h.allFinite())
    fail(ErrorCode::NonFinite, "matrix has NaN or Inf entries");
  Real scale = std::max(Real(1), h.norm());
  if ((h - h.adjoint()).norm() > tol::hermitian * scale)
    fail(ErrorCode::NonHermitian, "matrix is not Hermitian within tolerance");

  Mat sym = (h + h.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Mat> solver(sym);
  const int d = static_cast<int>(h.rows());

  HermitianEigensystem es;
  es.values = RVec(d);
  es.vectors = Mat(d, d);
  for (int i = 0; i < d; ++i) {  // Eigen sorts increasing; flip
    es.values(i) = solver.eigenvalues()(d - 1 - i);
    es.vectors.col(i) = solver.eigenvectors().col(d - 1 - i);
  }

  auto clusters = cluster_eigenvalues(es.values);
  int offset = 0;
  for (const auto& [value, count] : clusters) {
    (void)value;
    canonicalize_cluster(es.vectors, offset, count);
    offset += count;
  }
  return es;
}

Mat spectral_map(const Mat& h, const std::function<Real(Real)>& f) {
  HermitianEigensystem es = eigh(h);
  RVec mapped(es.values.size());
  for (int i = 0; i < es.values.size(); ++i) mapped(i) = f(es.values(i));
  return es.vectors * mapped.asDiagonal() * es.vectors.adjoint();
}

Mat partial_trace(const Mat& m, int d_a, int d_b, Subsystem keep) {
  if (m.rows() != m.cols() || m.rows() != static_cast<Eigen::Index>(d_a) * d_b)
    fail(ErrorCode::DimensionMismatch, "matrix does not factor as d_a * d_b");
  if (keep == Subsystem::A) {
    Mat out = Mat::Zero(d_a, d_a);
    for (int i = 0; i < d_a; ++i)
      for (int k = 0; k < d_a; ++k)
        for (int j = 0; j < d_b; ++j) out(i, k) += m(i * d_b + j, k * d_b + j);
    return out;
  }
  Mat out = Mat::Zero(d_b, d_b);
  for (int j = 0; j < d_b; ++j)
    for (int l = 0; l < d_b; ++l)
      for (int i = 0; i < d_a; ++i) out(j, l) += m(i * d_b + j, i * d_b + l);
  return out;
}

SchmidtDecomposition schmidt(const Vec& psi, int d_a, int d_b) {
  if (psi.size() != static_cast<Eigen::Index>(d_a) * d_b)
    fail(ErrorCode::DimensionMismatch, "state length is not d_a * d_b");
  if (std::abs(psi.norm() - 1.0) > tol::state_norm)
    fail(ErrorCode::NotNormalized, "state is not unit norm");

  // Left vectors from the canonical eigendecomposition of Psi Psi^dag keeps
  // the whole pipeline on one deterministic basis convention.
  Mat m(d_a, d_b);
  for (int i = 0; i < d_a; ++i)
    for (int j = 0; j < d_b; ++j) m(i, j) = psi(i * d_b + j);
  HermitianEigensystem es = eigh(m * m.adjoint());

  // Rank cutoff sits at the eigensolver noise floor; squared Schmidt
  // coefficients below it are indistinguishable from zero in double precision.
  const Real floor = 1e-14 * std::max(Real(1), es.values.size() > 0 ? es.values(0) : Real(1));
  int rank = 0;
  while (rank < es.values.size() && es.values(rank) > floor) ++rank;
  if (rank == 0) rank = 1;

  SchmidtDecomposition sd;
  sd.coefficients = RVec(rank);
  sd.left = Mat(d_a, rank);
  sd.right = Mat(d_b, rank);
  for (int k = 0; k < rank; ++k) {
    Real s = std::sqrt(std::max(Real(0), es.values(k)));
    sd.coefficients(k) = s;
    sd.left.col(k) = es.vectors.col(k);
    // Psi = sum_k s_k u_k v_k^T  =>  v_k = Psi^T conj(u_k) / s_k
    Vec v = m.transpose() * es.vectors.col(k).conjugate();
    sd.right.col(k) = s > 1e-15 ? Vec(v / s) : Vec(v.normalized());
  }
  return sd;
}

namespace {

// Shared Gram-Schmidt filler: completes `have` prescribed orthonormal columns
// to a full unitary, drawing candidates from the standard basis in index
// order and writing them into the free column positions in order.
Mat gram_schmidt_complete(const Mat& prescribed, const std::vector<int>& positions) {
  const int d = static_cast<int>(prescribed.rows());
  const int c = static_cast<int>(prescribed.cols());
  Mat u = Mat::Zero(d, d);
  std::vector<bool> taken(d, false);
  for (int j = 0; j < c; ++j) {
    u.col(positions[j]) = prescribed.col(j);
    taken[positions[j]] = true;
  }
  std::vector<int> filled(positions.begin(), positions.end());
  std::vector<int> free_slots;
  for (int j = 0; j < d; ++j)
    if (!taken[j]) free_slots.push_back(j);

  size_t next_slot = 0;
  for (int j = 0; j < d && next_slot < free_slots.size(); ++j) {
    Vec cand = Vec::Zero(d);
    cand(j) = 1.0;
    for (int pass = 0; pass < 2; ++pass)
      for (int p : filled) cand -= u.col(p).dot(cand) * u.col(p);
    Real n = cand.norm();
    if (n > 1e-8) {
      int slot = free_slots[next_slot++];
      u.col(slot) = cand / n;
      filled.push_back(slot);
    }
  }
  if (next_slot != free_slots.size())
    fail(ErrorCode::InvalidArgument, "unitary completion ran out of directions");
  return u;
}

}  // namespace

Mat complete_to_unitary(const Isometry& v) {
  const int c = static_cast<int>(v.matrix.cols());
  std::vector<int> positions(c);
  for (int j = 0; j < c; ++j) positions[j] = j;
  return gram_schmidt_complete(v.matrix, positions);
}

Mat complete_columns_at(const Mat& cols, const std::vector<int>& positions) {
  if (static_cast<int>(positions.size()) != cols.cols())
    fail(ErrorCode::DimensionMismatch, "one position per prescribed column required");
  Mat gram = cols.adjoint() * cols;
  gram -= Mat::Identity(cols.cols(), cols.cols());
  if (gram.norm() > 1e-8)
    fail(ErrorCode::NotIsometry, "prescribed columns are not orthonormal");
  return gram_schmidt_complete(cols, positions);
}

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Vec kron_vec(const Vec& a, const Vec& b) {
  Vec out(a.size() * b.size());
  for (int i = 0; i < a.size(); ++i)
    for (int j = 0; j < b.size(); ++j) out(i * b.size() + j) = a(i) * b(j);
  return out;
}

}  // namespace pmeround
