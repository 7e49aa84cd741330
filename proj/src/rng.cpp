#include "pmeround/rng.hpp"

#include <cmath>

#include "pmeround/linalg.hpp"

namespace pmeround {

Real Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  Real u, v, s;
  do {
    u = real(-1.0, 1.0);
    v = real(-1.0, 1.0);
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  Real factor = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * factor;
  have_spare_ = true;
  return u * factor;
}

int Rng::uniform_int(int n) {
  if (n <= 0) fail(ErrorCode::InvalidArgument, "uniform_int needs n > 0");
  // Rejection sampling for exact uniformity.
  const std::uint64_t bound = UINT64_MAX - UINT64_MAX % static_cast<std::uint64_t>(n);
  std::uint64_t r;
  do {
    r = raw();
  } while (r >= bound);
  return static_cast<int>(r % static_cast<std::uint64_t>(n));
}

Vec Rng::state(int dim) {
  Vec v(dim);
  for (int i = 0; i < dim; ++i) v(i) = cnormal();
  Real n = v.norm();
  while (n < 1e-12) {  // essentially impossible, but keep the contract total
    for (int i = 0; i < dim; ++i) v(i) = cnormal();
    n = v.norm();
  }
  return v / n;
}

Mat Rng::ginibre(int rows, int cols) {
  Mat g(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) g(i, j) = cnormal();
  return g;
}

Mat Rng::hermitian(int dim) {
  Mat g = ginibre(dim, dim);
  return (g + g.adjoint()) / 2.0;
}

Mat Rng::density(int dim) {
  Mat g = ginibre(dim, dim);
  Mat rho = g * g.adjoint();
  return rho / rho.trace().real();
}

Mat Rng::unitary(int dim) {
  Mat g = ginibre(dim, dim);
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ() * Mat::Identity(dim, dim);
  Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phase ambiguity so the result depends only on the draws.
  for (int j = 0; j < dim; ++j) {
    Cplx d = r(j, j);
    Real mag = std::abs(d);
    if (mag > 1e-15) q.col(j) *= d / mag;
  }
  return q;
}

std::vector<Mat> Rng::pvm(int dim, int outcomes) {
  // Random unitary basis, columns dealt to outcomes round-robin so every
  // outcome gets at least one rank when outcomes <= dim.
  Mat u = unitary(dim);
  std::vector<Mat> p(outcomes, Mat::Zero(dim, dim));
  for (int j = 0; j < dim; ++j) {
    int a = j % outcomes;
    p[a] += u.col(j) * u.col(j).adjoint();
  }
  return p;
}

std::vector<Mat> Rng::povm(int dim, int outcomes) {
  // E_a = S^{-1/2} G_a G_a^dag S^{-1/2} with S the sum: positive, complete.
  std::vector<Mat> raw(outcomes);
  Mat sum = Mat::Zero(dim, dim);
  for (int a = 0; a < outcomes; ++a) {
    Mat g = ginibre(dim, dim);
    raw[a] = g * g.adjoint();
    sum += raw[a];
  }
  Mat inv_sqrt = spectral_map(sum, [](Real x) { return x > 1e-14 ? 1.0 / std::sqrt(x) : 0.0; });
  std::vector<Mat> e(outcomes);
  for (int a = 0; a < outcomes; ++a) {
    Mat m = inv_sqrt * raw[a] * inv_sqrt;
    e[a] = (m + m.adjoint()) / 2.0;
  }
  return e;
}

}  // namespace pmeround
