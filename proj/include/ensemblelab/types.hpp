#ifndef ENSEMBLELAB_TYPES_HPP
#define ENSEMBLELAB_TYPES_HPP

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace ensemblelab {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;
using VectorRef = Eigen::Ref<const Eigen::VectorXd>;

// Domain error with a stable machine-readable code (surfaced by the CLI as
// {"error": code, "message": ...} on exit code 2).
class Error : public std::runtime_error {
 public:
  Error(std::string_view code, const std::string& msg)
      : std::runtime_error(msg), code_(code) {}
  std::string_view code() const noexcept { return code_; }

 private:
  std::string_view code_;
};

#define ENSEMBLELAB_ERROR(Name, code_str)                            \
  class Name : public Error {                                        \
   public:                                                           \
    explicit Name(const std::string& msg) : Error(code_str, msg) {}  \
  }

ENSEMBLELAB_ERROR(DimensionMismatch, "dimension_mismatch");
ENSEMBLELAB_ERROR(InvalidState, "invalid_state");
ENSEMBLELAB_ERROR(InfeasibleMacrostate, "infeasible_macrostate");
ENSEMBLELAB_ERROR(SingletonClass, "singleton_class");
ENSEMBLELAB_ERROR(OutOfRange, "out_of_range");
ENSEMBLELAB_ERROR(DegenerateSpectrum, "degenerate_spectrum");
ENSEMBLELAB_ERROR(ZeroBeta, "zero_beta");
ENSEMBLELAB_ERROR(ZeroHamiltonian, "zero_hamiltonian");
ENSEMBLELAB_ERROR(TrivialHamiltonian, "trivial_hamiltonian");
ENSEMBLELAB_ERROR(DimensionTooSmall, "dimension_too_small");
ENSEMBLELAB_ERROR(SizeLimit, "size_limit");
ENSEMBLELAB_ERROR(IncompatibleState, "incompatible_state");
ENSEMBLELAB_ERROR(ChargeRangeOverflow, "charge_range_overflow");
ENSEMBLELAB_ERROR(NonpositiveBeta, "nonpositive_beta");
ENSEMBLELAB_ERROR(ZeroVariance, "zero_variance");
ENSEMBLELAB_ERROR(OrderTooHigh, "order_too_high");
ENSEMBLELAB_ERROR(SamplingExhausted, "sampling_exhausted");
ENSEMBLELAB_ERROR(SolverFailure, "solver_failure");

#undef ENSEMBLELAB_ERROR

// Shared numeric tolerances. Operations take these as defaulted arguments so
// callers can tighten or relax them per invocation.
struct ToleranceConfig {
  double compatibility = 1e-10;  // |<Q^j> - v^j| for class membership
  double normalization = 1e-12;  // probability-vector sum
  double fit = 1e-10;            // ensemble-fit residual
  double decision = 1e-9;        // reachability margin
  double lp = 1e-9;              // simplex pivot / feasibility
};

// Joint spectrum of n commuting observables on d levels: row j holds the
// eigenvalues q^j_1..q^j_d. For n == 1 the row is kept sorted non-decreasing;
// originalIndex() maps internal (sorted) level positions back to the order
// the spectrum was supplied in.
class ObservableSet {
 public:
  explicit ObservableSet(Matrix charges);
  static ObservableSet hamiltonian(Vector spectrum);

  int levels() const { return static_cast<int>(charges_.cols()); }
  int observables() const { return static_cast<int>(charges_.rows()); }

  const Matrix& charges() const { return charges_; }
  // Single-observable spectrum (requires n == 1).
  Vector spectrum() const;

  const std::vector<int>& originalIndex() const { return original_index_; }
  Vector toOriginalOrder(VectorRef internal) const;
  Vector fromOriginalOrder(VectorRef original) const;
  Matrix chargesOriginalOrder() const;

  double minCharge(int j) const { return charges_.row(j).minCoeff(); }
  double maxCharge(int j) const { return charges_.row(j).maxCoeff(); }

 private:
  Matrix charges_;                  // n x d, internal level order
  std::vector<int> original_index_; // internal k -> supplied index
};

// Probability vector over the d joint eigenlevels (a density matrix diagonal
// in the common eigenbasis).
class DiagonalState {
 public:
  explicit DiagonalState(Vector p, double norm_tol = 1e-12);
  const Vector& p() const { return p_; }
  int size() const { return static_cast<int>(p_.size()); }

 private:
  Vector p_;
};

// Dense complex density matrix; only consumed by dephase().
class HermitianState {
 public:
  explicit HermitianState(ComplexMatrix rho, double herm_tol = 1e-12,
                          double eig_tol = 1e-10);
  const ComplexMatrix& matrix() const { return rho_; }
  int size() const { return static_cast<int>(rho_.rows()); }

 private:
  ComplexMatrix rho_;
};

// Partial information (v, Q): one mean value per observable.
class Macrostate {
 public:
  Macrostate(ObservableSet obs, Vector values);
  Macrostate(ObservableSet obs, double energy);  // n == 1 convenience

  const ObservableSet& observables() const { return obs_; }
  const Vector& values() const { return values_; }
  double energy() const;  // n == 1

 private:
  ObservableSet obs_;
  Vector values_;
};

}  // namespace ensemblelab

#endif  // ENSEMBLELAB_TYPES_HPP
