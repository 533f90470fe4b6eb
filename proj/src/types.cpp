#include "ensemblelab/types.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

namespace ensemblelab {

ObservableSet::ObservableSet(Matrix charges) : charges_(std::move(charges)) {
  const int n = static_cast<int>(charges_.rows());
  const int d = static_cast<int>(charges_.cols());
  if (n < 1) throw InvalidState("observable count must be >= 1");
  if (d < 2) throw InvalidState("level count must be >= 2");
  if (!charges_.allFinite()) throw InvalidState("eigenvalues must be finite");

  original_index_.resize(d);
  std::iota(original_index_.begin(), original_index_.end(), 0);
  if (n == 1) {
    std::stable_sort(original_index_.begin(), original_index_.end(),
                     [&](int a, int b) { return charges_(0, a) < charges_(0, b); });
    Matrix sorted(1, d);
    for (int k = 0; k < d; ++k) sorted(0, k) = charges_(0, original_index_[k]);
    charges_ = std::move(sorted);
  }
}

ObservableSet ObservableSet::hamiltonian(Vector spectrum) {
  Matrix m(1, spectrum.size());
  m.row(0) = spectrum.transpose();
  return ObservableSet(std::move(m));
}

Vector ObservableSet::spectrum() const {
  if (observables() != 1)
    throw DimensionMismatch("spectrum() requires a single observable");
  return charges_.row(0).transpose();
}

Vector ObservableSet::toOriginalOrder(VectorRef internal) const {
  if (internal.size() != levels())
    throw DimensionMismatch("vector length does not match level count");
  Vector out(internal.size());
  for (int k = 0; k < levels(); ++k) out[original_index_[k]] = internal[k];
  return out;
}

Vector ObservableSet::fromOriginalOrder(VectorRef original) const {
  if (original.size() != levels())
    throw DimensionMismatch("vector length does not match level count");
  Vector out(original.size());
  for (int k = 0; k < levels(); ++k) out[k] = original[original_index_[k]];
  return out;
}

Matrix ObservableSet::chargesOriginalOrder() const {
  Matrix out(observables(), levels());
  for (int k = 0; k < levels(); ++k)
    out.col(original_index_[k]) = charges_.col(k);
  return out;
}

DiagonalState::DiagonalState(Vector p, double norm_tol) : p_(std::move(p)) {
  if (p_.size() < 1) throw InvalidState("empty probability vector");
  if (!p_.allFinite()) throw InvalidState("probabilities must be finite");
  double min = p_.minCoeff();
  if (min < -norm_tol)
    throw InvalidState("negative probability entry " + std::to_string(min));
  if (min < 0.0) p_ = p_.cwiseMax(0.0);
  const double sum = p_.sum();
  if (std::abs(sum - 1.0) > norm_tol)
    throw InvalidState("probabilities sum to " + std::to_string(sum));
}

HermitianState::HermitianState(ComplexMatrix rho, double herm_tol,
                               double eig_tol)
    : rho_(std::move(rho)) {
  if (rho_.rows() != rho_.cols() || rho_.rows() < 2)
    throw InvalidState("density matrix must be square with dim >= 2");
  const double herm_err = (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
  if (herm_err > herm_tol)
    throw InvalidState("matrix not Hermitian, deviation " +
                       std::to_string(herm_err));
  const double tr_err = std::abs(rho_.trace().real() - 1.0) +
                        std::abs(rho_.trace().imag());
  if (tr_err > herm_tol)
    throw InvalidState("trace differs from one by " + std::to_string(tr_err));
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho_,
                                                  Eigen::EigenvaluesOnly);
  const double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < -eig_tol)
    throw InvalidState("matrix not positive semidefinite, min eigenvalue " +
                       std::to_string(min_eig));
}

Macrostate::Macrostate(ObservableSet obs, Vector values)
    : obs_(std::move(obs)), values_(std::move(values)) {
  if (values_.size() != obs_.observables())
    throw DimensionMismatch("one mean value per observable required");
  for (int j = 0; j < obs_.observables(); ++j) {
    if (values_[j] < obs_.minCharge(j) || values_[j] > obs_.maxCharge(j))
      throw OutOfRange("value " + std::to_string(values_[j]) +
                       " outside the spectral hull of observable " +
                       std::to_string(j));
  }
}

Macrostate::Macrostate(ObservableSet obs, double energy)
    : Macrostate(std::move(obs), Vector::Constant(1, energy)) {}

double Macrostate::energy() const {
  if (values_.size() != 1)
    throw DimensionMismatch("energy() requires a single observable");
  return values_[0];
}

}  // namespace ensemblelab
