// Seedable random source with an implementation-independent mapping from raw
// 64-bit draws to reals, plus generators for the random test instances
// (states, densities, POVM/PVM families). The generator algorithm identifier
// is recorded in every report that consumed randomness.
#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "pmeround/base.hpp"

namespace pmeround {

inline constexpr const char* kRngAlgorithm = "mt19937_64";

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t raw() { return gen_(); }

  // Uniform in [0, 1) from the top 53 bits; avoids distribution objects whose
  // output is not pinned down by the standard.
  Real real() { return static_cast<Real>(gen_() >> 11) * 0x1.0p-53; }

  Real real(Real lo, Real hi) { return lo + (hi - lo) * real(); }

  // Marsaglia polar method on the pinned uniform source.
  Real normal();

  Cplx cnormal() { return Cplx(normal(), normal()) / std::sqrt(2.0); }

  int uniform_int(int n);  // uniform in {0, ..., n-1}

  Vec state(int dim);                      // Haar-like unit vector
  Mat ginibre(int rows, int cols);         // iid complex gaussian entries
  Mat hermitian(int dim);                  // (G + G^dag)/2
  Mat density(int dim);                    // G G^dag normalized to trace 1
  Mat unitary(int dim);                    // Q factor of a Ginibre matrix
  std::vector<Mat> pvm(int dim, int outcomes);   // projective, may contain zeros
  std::vector<Mat> povm(int dim, int outcomes);  // full-rank style POVM

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  Real spare_ = 0.0;
};

}  // namespace pmeround
