#pragma once

// Dense complex linear algebra over small Hilbert spaces: state vectors,
// overlaps, tensor products, Gram matrices and deterministic completion of
// orthonormal column sets to unitaries.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qorder/error.hpp"

namespace qorder {

using Complex = std::complex<double>;

namespace tolerance {
inline constexpr double kNorm = 1e-9;
inline constexpr double kUnitary = 1e-9;
inline constexpr double kHermitian = 1e-12;
inline constexpr double kPsd = 1e-9;
// Gram-Schmidt candidates with a smaller residual norm are dropped.
inline constexpr double kCompletionDrop = 1e-6;
}  // namespace tolerance

/// Normalized pure state in a finite-dimensional Hilbert space.
class StateVector {
 public:
  explicit StateVector(std::vector<Complex> amplitudes)
      : amps_(std::move(amplitudes)) {
    if (amps_.empty()) throw Error("empty-state", "a state needs at least one amplitude");
    const double n = norm_of(amps_);
    if (std::abs(n - 1.0) > tolerance::kNorm) {
      throw Error("not-normalized", "norm is " + std::to_string(n));
    }
  }

  StateVector(std::initializer_list<Complex> amplitudes)
      : StateVector(std::vector<Complex>(amplitudes)) {}

  /// Scales `amplitudes` to unit norm. Throws "zero-vector" on a null input.
  static StateVector normalized(std::vector<Complex> amplitudes) {
    const double n = norm_of(amplitudes);
    if (amplitudes.empty()) throw Error("empty-state");
    if (n == 0.0) throw Error("zero-vector", "cannot normalize the zero vector");
    for (auto& a : amplitudes) a /= n;
    return StateVector(std::move(amplitudes));
  }

  /// Canonical basis state e_k of dimension `dim` (k is 0-based).
  static StateVector basis(std::size_t dim, std::size_t k) {
    if (k >= dim) throw Error("bad-index", "basis index out of range");
    std::vector<Complex> a(dim);
    a[k] = 1.0;
    return StateVector(std::move(a));
  }

  std::size_t dim() const noexcept { return amps_.size(); }
  std::span<const Complex> amplitudes() const noexcept { return amps_; }
  const Complex& operator[](std::size_t k) const { return amps_[k]; }
  double norm() const { return norm_of(amps_); }

  friend bool operator==(const StateVector&, const StateVector&) = default;

 private:
  static double norm_of(std::span<const Complex> a) {
    double s = 0.0;
    for (const auto& z : a) s += std::norm(z);
    return std::sqrt(s);
  }

  std::vector<Complex> amps_;
};

/// Row-major dense complex matrix.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const Complex> data() const noexcept { return data_; }

  ComplexMatrix adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
    return out;
  }

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols_ != b.rows_) throw Error("dim-mismatch", "matrix product shapes differ");
    ComplexMatrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Complex aik = a(i, k);
        if (aik == Complex{}) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
      }
    return out;
  }

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

/// Max-entry distance between M†M and the identity.
inline double unitarity_defect(const ComplexMatrix& m) {
  if (!m.square()) throw Error("not-square");
  const std::size_t n = m.rows();
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Complex s{};
      for (std::size_t k = 0; k < n; ++k) s += std::conj(m(k, i)) * m(k, j);
      if (i == j) s -= 1.0;
      worst = std::max(worst, std::abs(s));
    }
  return worst;
}

/// True iff ‖M†M − I‖_max ≤ tol. Non-square input is never unitary.
inline bool is_unitary(const ComplexMatrix& m, double tol) {
  return m.square() && unitarity_defect(m) <= tol;
}

/// Square matrix checked for unitarity (at tolerance::kUnitary) on
/// construction.
class UnitaryMatrix {
 public:
  explicit UnitaryMatrix(ComplexMatrix m) : m_(std::move(m)) {
    if (!m_.square()) throw Error("not-unitary", "matrix is not square");
    if (m_.rows() == 0) throw Error("not-unitary", "empty matrix");
    const double defect = unitarity_defect(m_);
    if (defect > tolerance::kUnitary) {
      throw Error("not-unitary", "|U^dag U - I|_max = " + std::to_string(defect));
    }
  }

  static UnitaryMatrix identity(std::size_t n) { return UnitaryMatrix(ComplexMatrix::identity(n)); }

  std::size_t dim() const noexcept { return m_.rows(); }
  const ComplexMatrix& matrix() const noexcept { return m_; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return m_(r, c); }

  UnitaryMatrix adjoint() const { return UnitaryMatrix(m_.adjoint()); }

  friend bool operator==(const UnitaryMatrix&, const UnitaryMatrix&) = default;

 private:
  ComplexMatrix m_;
};

/// ⟨a|b⟩ = Σ conj(a_k) b_k.
inline Complex inner_product(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim()) {
    throw Error("dim-mismatch",
                std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
  }
  Complex s{};
  for (std::size_t k = 0; k < a.dim(); ++k) s += std::conj(a[k]) * b[k];
  return s;
}

/// a ⊗ b with the index of `a` outermost: (a⊗b)[i·dim(b) + j] = a_i b_j.
inline StateVector tensor(const StateVector& a, const StateVector& b) {
  std::vector<Complex> out;
  out.reserve(a.dim() * b.dim());
  for (const auto& x : a.amplitudes())
    for (const auto& y : b.amplitudes()) out.push_back(x * y);
  // Renormalize to absorb the last-ulp rounding of the products.
  return StateVector::normalized(std::move(out));
}

inline StateVector tensor(std::span<const StateVector> factors) {
  if (factors.empty()) throw Error("empty-set", "tensor of no factors");
  StateVector acc = factors.front();
  for (std::size_t k = 1; k < factors.size(); ++k) acc = tensor(acc, factors[k]);
  return acc;
}

/// Pairwise overlaps G(i, j) = ⟨ψ_i|ψ_j⟩ of a state list.
class GramMatrix {
 public:
  explicit GramMatrix(ComplexMatrix entries) : g_(std::move(entries)) {
    if (!g_.square()) throw Error("not-square", "Gram matrix must be square");
  }

  std::size_t size() const noexcept { return g_.rows(); }
  const ComplexMatrix& entries() const noexcept { return g_; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return g_(i, j); }

  bool is_hermitian(double tol = tolerance::kHermitian) const {
    for (std::size_t i = 0; i < size(); ++i)
      for (std::size_t j = i; j < size(); ++j)
        if (std::abs(g_(i, j) - std::conj(g_(j, i))) > tol) return false;
    return true;
  }

  bool has_unit_diagonal(double tol = tolerance::kNorm) const {
    for (std::size_t i = 0; i < size(); ++i)
      if (std::abs(g_(i, i) - 1.0) > tol) return false;
    return true;
  }

  /// Smallest eigenvalue of the Hermitian part.
  double min_eigenvalue() const {
    const auto n = static_cast<Eigen::Index>(size());
    Eigen::MatrixXcd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        m(i, j) = 0.5 * (g_(i, j) + std::conj(g_(j, i)));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
  }

  bool is_positive_semidefinite(double tol = tolerance::kPsd) const {
    return min_eigenvalue() >= -tol;
  }

 private:
  ComplexMatrix g_;
};

inline GramMatrix gram_matrix(std::span<const StateVector> states) {
  if (states.empty()) throw Error("empty-set", "Gram matrix of an empty set");
  const std::size_t n = states.size();
  ComplexMatrix g(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    g(i, i) = inner_product(states[i], states[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      g(i, j) = inner_product(states[i], states[j]);
      g(j, i) = std::conj(g(i, j));
    }
  }
  return GramMatrix(std::move(g));
}

/// Extends orthonormal `columns` to a dim×dim unitary whose first columns are
/// the inputs. The remaining columns come from Gram-Schmidt over the
/// canonical basis e_0, e_1, ... in index order, so the result is
/// deterministic.
inline UnitaryMatrix complete_to_unitary(std::span<const StateVector> columns, std::size_t dim) {
  if (dim == 0) throw Error("dim-mismatch", "dimension must be positive");
  if (columns.size() > dim) {
    throw Error("not-isometry", std::to_string(columns.size()) +
                                    " columns cannot be orthonormal in dimension " +
                                    std::to_string(dim));
  }
  for (const auto& c : columns)
    if (c.dim() != dim) throw Error("dim-mismatch", "column dimension differs from target");
  for (std::size_t i = 0; i < columns.size(); ++i)
    for (std::size_t j = i + 1; j < columns.size(); ++j)
      if (std::abs(inner_product(columns[i], columns[j])) > tolerance::kNorm) {
        throw Error("not-isometry", "columns " + std::to_string(i) + " and " +
                                        std::to_string(j) + " are not orthogonal");
      }

  std::vector<std::vector<Complex>> basis;
  basis.reserve(dim);
  for (const auto& c : columns) basis.emplace_back(c.amplitudes().begin(), c.amplitudes().end());

  for (std::size_t b = 0; b < dim && basis.size() < dim; ++b) {
    std::vector<Complex> v(dim);
    v[b] = 1.0;
    // Two sweeps of modified Gram-Schmidt keep the result orthogonal to
    // working precision.
    for (int sweep = 0; sweep < 2; ++sweep) {
      for (const auto& u : basis) {
        Complex proj{};
        for (std::size_t k = 0; k < dim; ++k) proj += std::conj(u[k]) * v[k];
        for (std::size_t k = 0; k < dim; ++k) v[k] -= proj * u[k];
      }
    }
    double n = 0.0;
    for (const auto& z : v) n += std::norm(z);
    n = std::sqrt(n);
    if (n < tolerance::kCompletionDrop) continue;
    for (auto& z : v) z /= n;
    basis.push_back(std::move(v));
  }
  if (basis.size() != dim) throw Error("not-isometry", "completion ran out of candidates");

  ComplexMatrix m(dim, dim);
  for (std::size_t c = 0; c < dim; ++c)
    for (std::size_t r = 0; r < dim; ++r) m(r, c) = basis[c][r];
  return UnitaryMatrix(std::move(m));
}

/// The unitary V_out·V_in† sending each `inputs[k]` to `outputs[k]`, where
/// both lists are orthonormal and of equal length; the complements are
/// matched in completion order.
inline UnitaryMatrix unitary_from_columns(std::span<const StateVector> inputs,
                                          std::span<const StateVector> outputs, std::size_t dim) {
  if (inputs.size() != outputs.size()) throw Error("dim-mismatch", "column count differs");
  const auto vin = complete_to_unitary(inputs, dim);
  const auto vout = complete_to_unitary(outputs, dim);
  return UnitaryMatrix(vout.matrix() * vin.matrix().adjoint());
}

}  // namespace qorder
