#pragma once

// Random generators and independent oracles shared by the test suites.
// Oracles here go through Eigen or plain loops, never through the qorder
// routines they check.

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <string>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "qorder/linalg.hpp"
#include "qorder/ordering.hpp"

namespace qorder::testing {

using Rng = std::mt19937_64;

inline std::vector<Complex> gaussian_vector(Rng& rng, std::size_t dim) {
  std::normal_distribution<double> g;
  std::vector<Complex> v(dim);
  for (auto& z : v) z = {g(rng), g(rng)};
  return v;
}

inline StateVector random_state(Rng& rng, std::size_t dim) {
  return StateVector::normalized(gaussian_vector(rng, dim));
}

/// Haar-distributed unitary from a phase-corrected QR decomposition.
inline Eigen::MatrixXcd random_unitary_eigen(Rng& rng, std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  Eigen::MatrixXcd a(n, n);
  std::normal_distribution<double> g;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = {g(rng), g(rng)};
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR();
  for (Eigen::Index j = 0; j < n; ++j) q.col(j) *= r(j, j) / std::abs(r(j, j));
  return q;
}

inline ComplexMatrix to_matrix(const Eigen::MatrixXcd& m) {
  ComplexMatrix out(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      out(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = m(i, j);
  return out;
}

inline Eigen::VectorXcd to_eigen(const StateVector& v) {
  Eigen::VectorXcd out(static_cast<Eigen::Index>(v.dim()));
  for (std::size_t k = 0; k < v.dim(); ++k) out(static_cast<Eigen::Index>(k)) = v[k];
  return out;
}

inline StateVector from_eigen(const Eigen::VectorXcd& v) {
  return StateVector::normalized(std::vector<Complex>(v.data(), v.data() + v.size()));
}

inline StateVector rotate(const Eigen::MatrixXcd& w, const StateVector& v) {
  return from_eigen(w * to_eigen(v));
}

/// First `count` columns of a random unitary.
inline OrderedStateSet random_orthonormal_set(Rng& rng, std::size_t dim, std::size_t count) {
  const auto w = random_unitary_eigen(rng, dim);
  std::vector<StateVector> members;
  for (std::size_t k = 0; k < count; ++k) members.push_back(from_eigen(w.col(static_cast<Eigen::Index>(k))));
  return OrderedStateSet(std::move(members));
}

/// Product of `count` Givens rotations with random planes, angles and phases.
inline ComplexMatrix random_givens_product(Rng& rng, std::size_t dim, std::size_t count) {
  std::uniform_int_distribution<std::size_t> pick(0, dim - 1);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  ComplexMatrix m = ComplexMatrix::identity(dim);
  for (std::size_t r = 0; r < count; ++r) {
    std::size_t p = pick(rng);
    std::size_t q = pick(rng);
    while (q == p) q = pick(rng);
    const double th = angle(rng);
    const Complex phase = std::polar(1.0, angle(rng));
    ComplexMatrix g = ComplexMatrix::identity(dim);
    g(p, p) = std::cos(th);
    g(q, q) = std::cos(th);
    g(p, q) = -std::sin(th) * std::conj(phase);
    g(q, p) = std::sin(th) * phase;
    m = g * m;
  }
  return m;
}

/// Σ conj(a_k) b_k written out independently of qorder::inner_product.
inline Complex dot_oracle(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  Complex s{};
  for (std::size_t k = 0; k < a.size(); ++k) s += std::conj(a[k]) * b[k];
  return s;
}

inline std::vector<Complex> amplitudes(const StateVector& v) {
  return {v.amplitudes().begin(), v.amplitudes().end()};
}

/// Orthogonal Procrustes: the unitary W minimizing Σ‖W·in_k − out_k‖² is
/// U·V† for the SVD M = U·S·V† of M = Σ out_k·in_k†. Returns that minimum.
inline double procrustes_residual(const std::vector<StateVector>& in, const std::vector<StateVector>& out) {
  const auto n = static_cast<Eigen::Index>(in.front().dim());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t k = 0; k < in.size(); ++k) m += to_eigen(out[k]) * to_eigen(in[k]).adjoint();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::MatrixXcd w = svd.matrixU() * svd.matrixV().adjoint();
  double res = 0.0;
  for (std::size_t k = 0; k < in.size(); ++k) res += (w * to_eigen(in[k]) - to_eigen(out[k])).squaredNorm();
  return res;
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) worst = std::max(worst, std::abs(a(i, j) - b(i, j)));
  return worst;
}

/// Runs fn and checks it throws qorder::Error with the given code.
inline void expect_code(const std::function<void()>& fn, const std::string& code) {
  try {
    fn();
    ADD_FAILURE() << "expected error " << code;
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

inline const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

inline StateVector ket0() { return StateVector{1.0, 0.0}; }
inline StateVector ket1() { return StateVector{0.0, 1.0}; }
inline StateVector ket_plus() { return StateVector{kInvSqrt2, kInvSqrt2}; }
inline StateVector ket_minus() { return StateVector{kInvSqrt2, -kInvSqrt2}; }

}  // namespace qorder::testing
