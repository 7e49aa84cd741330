// Linear algebra kernels: canonical eigensystems, spectral calculus, partial
// trace, Schmidt decomposition, deterministic completion.
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <unsupported/Eigen/KroneckerProduct>

#include "pmeround/linalg.hpp"
#include "pmeround/rng.hpp"

using namespace pmeround;

namespace {

constexpr Real kTight = 1e-12;
constexpr Real kLoose = 1e-8;

}  // namespace

TEST_CASE("eigh reconstructs and sorts") {
  Rng rng(11);
  for (int d = 2; d <= 12; ++d) {
    Mat h = rng.hermitian(d);
    HermitianEigensystem es = eigh(h);
    for (int i = 0; i + 1 < d; ++i) REQUIRE(es.values(i) >= es.values(i + 1));
    Mat rebuilt = es.vectors * es.values.asDiagonal().toDenseMatrix().cast<Cplx>() *
                  es.vectors.adjoint();
    REQUIRE(frob(rebuilt - h) <= tol::reconstruct * std::max(1.0, frob(h)));
    REQUIRE(frob(es.vectors.adjoint() * es.vectors - Mat::Identity(d, d)) <= tol::unitary * 10);
  }
}

TEST_CASE("eigh is deterministic across calls") {
  Rng rng(12);
  Mat h = rng.hermitian(7);
  HermitianEigensystem a = eigh(h);
  HermitianEigensystem b = eigh(h);
  REQUIRE((a.values - b.values).norm() == 0.0);
  REQUIRE(frob(a.vectors - b.vectors) == 0.0);
}

TEST_CASE("eigh canonicalizes degenerate eigenspaces to the standard basis") {
  HermitianEigensystem id3 = eigh(Mat::Identity(3, 3));
  REQUIRE(frob(id3.vectors - Mat::Identity(3, 3)) <= kTight);

  Mat h = Mat::Zero(3, 3);
  h(0, 0) = 2.0;
  h(1, 1) = 1.0;
  h(2, 2) = 1.0;
  HermitianEigensystem es = eigh(h);
  REQUIRE(es.values(0) == 2.0);
  // The two-fold eigenspace span{e1, e2} must come out as e1, e2 exactly.
  REQUIRE(frob(es.vectors - Mat::Identity(3, 3)) <= kTight);
}

TEST_CASE("eigh rejects bad input") {
  REQUIRE_THROWS_AS(eigh(Mat::Zero(2, 3)), Error);
  Rng rng(13);
  Mat g = rng.ginibre(3, 3);
  g(0, 1) += Cplx(1.0, 0.0);  // clearly non-Hermitian
  REQUIRE_THROWS_AS(eigh(g + Mat::Identity(3, 3) * 5.0), Error);
  Mat nan = Mat::Identity(2, 2);
  nan(0, 0) = Cplx(std::nan(""), 0.0);
  REQUIRE_THROWS_AS(eigh(nan), Error);
}

TEST_CASE("spectral_map composes") {
  Rng rng(21);
  auto g = [](Real x) { return std::tanh(x); };
  auto f = [](Real x) { return x * x + 1.0; };
  for (int d = 2; d <= 12; ++d) {
    Mat h = rng.hermitian(d);
    Mat lhs = spectral_map(h, [&](Real x) { return f(g(x)); });
    Mat rhs = spectral_map(spectral_map(h, g), f);
    REQUIRE(frob(lhs - rhs) <= kLoose);
  }
}

TEST_CASE("spectral square root squares back") {
  Rng rng(22);
  Mat rho = rng.density(6);
  Mat s = spectral_map(rho, [](Real x) { return std::sqrt(std::max(0.0, x)); });
  REQUIRE(frob(s * s - rho) <= 1e-10);
}

TEST_CASE("chi_ge uses a closed threshold") {
  REQUIRE(chi_ge(0.5, 0.5) == 1.0);
  REQUIRE(chi_ge(0.5, 0.5 - 1e-12) == 0.0);
  REQUIRE(chi_ge(0.0, 0.0) == 1.0);
}

TEST_CASE("partial_trace preserves trace and positivity") {
  Rng rng(31);
  for (auto [da, db] : {std::pair{2, 3}, std::pair{3, 4}, std::pair{4, 2}}) {
    Mat m = rng.density(da * db);
    Mat ta = partial_trace(m, da, db, Subsystem::A);
    Mat tb = partial_trace(m, da, db, Subsystem::B);
    REQUIRE(std::abs(ta.trace().real() - 1.0) <= kTight);
    REQUIRE(std::abs(tb.trace().real() - 1.0) <= kTight);
    REQUIRE(eigh(ta).values.minCoeff() >= -1e-10);
    REQUIRE(eigh(tb).values.minCoeff() >= -1e-10);
  }
}

TEST_CASE("partial_trace of a product factors") {
  Rng rng(32);
  Mat a = rng.density(3), b = rng.density(4);
  Mat m = kron(a, b);
  REQUIRE(frob(partial_trace(m, 3, 4, Subsystem::A) - a) <= kTight);
  REQUIRE(frob(partial_trace(m, 3, 4, Subsystem::B) - b) <= kTight);
}

TEST_CASE("schmidt of the EPR pair") {
  Vec psi(4);
  const Real r = 1.0 / std::sqrt(2.0);
  psi << r, 0.0, 0.0, r;
  SchmidtDecomposition sd = schmidt(psi, 2, 2);
  REQUIRE(sd.coefficients.size() == 2);
  REQUIRE(std::abs(sd.coefficients(0) - r) <= kTight);
  REQUIRE(std::abs(sd.coefficients(1) - r) <= kTight);
  // Degenerate spectrum: canonical basis is the standard basis on both sides.
  REQUIRE(frob(sd.left - Mat::Identity(2, 2)) <= kTight);
  REQUIRE(frob(sd.right - Mat::Identity(2, 2)) <= kTight);
}

TEST_CASE("schmidt matches the reduced-density oracle and reconstructs") {
  Rng rng(41);
  for (auto [da, db] : {std::pair{2, 2}, std::pair{3, 5}, std::pair{6, 3}}) {
    Vec psi = rng.state(da * db);
    SchmidtDecomposition sd = schmidt(psi, da, db);
    Mat rho_a = partial_trace(Mat(psi * psi.adjoint()), da, db, Subsystem::A);
    RVec ev = eigh(rho_a).values;
    for (int i = 0; i < sd.coefficients.size(); ++i)
      REQUIRE(std::abs(sd.coefficients(i) * sd.coefficients(i) - ev(i)) <= kLoose);
    Vec rebuilt = Vec::Zero(da * db);
    for (int i = 0; i < sd.coefficients.size(); ++i)
      rebuilt += sd.coefficients(i) * kron_vec(sd.left.col(i), sd.right.col(i));
    REQUIRE((rebuilt - psi).norm() <= 1e-9);
    REQUIRE(frob(sd.left.adjoint() * sd.left -
                 Mat::Identity(sd.coefficients.size(), sd.coefficients.size())) <= 1e-10);
    REQUIRE(frob(sd.right.adjoint() * sd.right -
                 Mat::Identity(sd.coefficients.size(), sd.coefficients.size())) <= 1e-10);
  }
}

TEST_CASE("schmidt of a product state has a single coefficient") {
  Rng rng(42);
  Vec a = rng.state(3), b = rng.state(4);
  SchmidtDecomposition sd = schmidt(kron_vec(a, b), 3, 4);
  REQUIRE(sd.coefficients.size() == 1);
  REQUIRE(std::abs(sd.coefficients(0) - 1.0) <= kTight);
}

TEST_CASE("schmidt rejects unnormalized input") {
  Vec psi = Vec::Zero(4);
  psi(0) = 2.0;
  REQUIRE_THROWS_AS(schmidt(psi, 2, 2), Error);
}

TEST_CASE("complete_to_unitary keeps prescribed columns and is deterministic") {
  Rng rng(51);
  for (int d : {3, 5, 8}) {
    int c = d / 2 + 1;
    Mat cols = rng.unitary(d).leftCols(c);
    Mat u1 = complete_to_unitary(Isometry(cols));
    Mat u2 = complete_to_unitary(Isometry(cols));
    REQUIRE(frob(u1 - u2) == 0.0);
    REQUIRE(frob(u1.leftCols(c) - cols) == 0.0);
    REQUIRE(frob(u1.adjoint() * u1 - Mat::Identity(d, d)) <= 1e-10);
  }
}

TEST_CASE("complete_columns_at places columns at the requested positions") {
  Rng rng(52);
  Mat cols = rng.unitary(6).leftCols(2);
  Mat u = complete_columns_at(cols, {0, 3});
  REQUIRE(frob(u.col(0) - cols.col(0)) == 0.0);
  REQUIRE(frob(u.col(3) - cols.col(1)) == 0.0);
  REQUIRE(frob(u.adjoint() * u - Mat::Identity(6, 6)) <= 1e-10);
  REQUIRE_THROWS_AS(complete_columns_at(cols, {0}), Error);
}

TEST_CASE("Isometry constructor validates orthonormality") {
  Rng rng(53);
  REQUIRE_THROWS_AS(Isometry(rng.ginibre(4, 2) * 3.0), Error);
  REQUIRE_NOTHROW(Isometry(rng.unitary(4).leftCols(2)));
  REQUIRE_THROWS_AS(Isometry(rng.unitary(3).topRows(2).transpose().eval().leftCols(3)), Error);
}

TEST_CASE("kron agrees with the Eigen kronecker product") {
  Rng rng(61);
  Mat a = rng.ginibre(3, 2), b = rng.ginibre(2, 4);
  Mat reference = Eigen::kroneckerProduct(a, b);
  REQUIRE(frob(kron(a, b) - reference) <= 1e-15);
  Vec va = rng.state(3), vb = rng.state(4);
  Vec kv = kron_vec(va, vb);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 4; ++j) REQUIRE(std::abs(kv(i * 4 + j) - va(i) * vb(j)) == 0.0);
}

TEST_CASE("cluster_eigenvalues merges by chained gaps") {
  RVec v(3);
  v << 1.0, 1.0 - 5e-11, 0.5;
  auto clusters = cluster_eigenvalues(v);
  REQUIRE(clusters.size() == 2);
  REQUIRE(clusters[0].second == 2);
  REQUIRE(std::abs(clusters[0].first - (1.0 - 2.5e-11)) <= 1e-15);
  REQUIRE(clusters[1].second == 1);

  RVec chain(3);
  chain << 1.0, 1.0 - 6e-11, 1.0 - 1.2e-10;  // ends differ by > tol but chain merges
  auto merged = cluster_eigenvalues(chain);
  REQUIRE(merged.size() == 1);
  REQUIRE(merged[0].second == 3);

  RVec split(2);
  split << 1.0, 0.9;
  REQUIRE(cluster_eigenvalues(split).size() == 2);
}
