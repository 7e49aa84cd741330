// Shared scalar/matrix aliases, error taxonomy and central numeric tolerances.
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace pmeround {

using Real = double;
using Cplx = std::complex<double>;
using Mat  = Eigen::MatrixXcd;
using Vec  = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

// Machine-readable failure categories. Every throwing operation documents
// which of these it can raise; anything else surfaces as InvalidArgument.
enum class ErrorCode {
  NonHermitian,
  NonFinite,
  DimensionMismatch,
  NotNormalized,
  NotIsometry,
  NotSquare,
  NotDensity,
  LabelMismatch,
  EmptyDiagonal,
  UnknownName,
  DimensionOverflow,
  NotProjective,
  NotProjectionGame,
  SingularRho,
  NotBinary,
  OverlappingSets,
  InsufficientData,
  NonPositive,
  ParseError,
  InvalidArgument,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

// Central tolerance constants. Single knob for numerics audits; the values
// are referenced by the validation contracts and the test suite alike.
namespace tol {
inline constexpr Real hermitian      = 1e-9;   // relative symmetry defect in eigh
inline constexpr Real unitary        = 1e-10;  // column orthonormality
inline constexpr Real reconstruct    = 1e-9;   // V diag(l) V^dag vs input
inline constexpr Real state_norm     = 1e-9;   // bipartite state normalization
inline constexpr Real psd            = 1e-9;   // admissible negative eigenvalue
inline constexpr Real completeness   = 1e-8;   // || sum E - Id ||_F
inline constexpr Real projectivity   = 1e-8;   // || E^2 - E ||_F
inline constexpr Real sub_measure    = 1e-9;   // Id - sum E PSD slack
inline constexpr Real distribution   = 1e-9;   // probability vectors sum to 1
inline constexpr Real correlation_im = 1e-8;   // imaginary residue treated as error
inline constexpr Real eig_merge      = 1e-10;  // degenerate eigenvalue clustering
inline constexpr Real sync_shortcut  = 1e-12;  // exact-synchronous pipeline switch
inline constexpr Real rho_commute    = 1e-8;   // family-commutes-with-state check
inline constexpr Real trace_one      = 1e-9;   // density trace normalization
}  // namespace tol

inline constexpr int kDefaultDilationCap = 512;  // max total dilated dimension

}  // namespace pmeround
