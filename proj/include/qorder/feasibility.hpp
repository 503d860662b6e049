#pragma once

// Decides whether a requested state transformation can be carried out by a
// unitary machine. A map ψ_k ↦ φ_k on finitely many states extends to a
// unitary exactly when it preserves every overlap ⟨ψ_i|ψ_j⟩ = ⟨φ_i|φ_j⟩;
// comparator and sorter checks are specializations of that condition.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qorder/error.hpp"
#include "qorder/linalg.hpp"
#include "qorder/ordering.hpp"

namespace qorder {

inline constexpr double kDefaultTolerance = 1e-9;

/// Requested transformation, one (input, output) pair per defining row.
/// Inputs and outputs must live in the same space; pad the smaller side
/// with an ancilla before building the spec.
class PartialIsometrySpec {
 public:
  using Pair = std::pair<StateVector, StateVector>;

  explicit PartialIsometrySpec(std::vector<Pair> pairs) : pairs_(std::move(pairs)) {
    if (pairs_.empty()) throw Error("bad-spec", "no pairs");
    const std::size_t d = pairs_.front().first.dim();
    for (std::size_t k = 0; k < pairs_.size(); ++k) {
      if (pairs_[k].first.dim() != d || pairs_[k].second.dim() != d) {
        throw Error("bad-spec", "pair " + std::to_string(k + 1) +
                                    ": inputs and outputs must share one dimension");
      }
    }
  }

  std::size_t size() const noexcept { return pairs_.size(); }
  std::size_t in_dim() const noexcept { return pairs_.front().first.dim(); }
  std::size_t out_dim() const noexcept { return pairs_.front().second.dim(); }
  const std::vector<Pair>& pairs() const noexcept { return pairs_; }

 private:
  std::vector<Pair> pairs_;
};

enum class Verdict { Feasible, Infeasible, NecessaryTestsPassed };

inline std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Feasible: return "Feasible";
    case Verdict::Infeasible: return "Infeasible";
    case Verdict::NecessaryTestsPassed: return "NecessaryTestsPassed";
  }
  return "?";
}

/// One violated constraint. `indices` holds the 1-based pair (i, j) or, for
/// sorter checks, the triple (i, j, q).
struct Violation {
  std::vector<std::size_t> indices;
  Complex lhs;
  Complex rhs;
  double residual = 0.0;
};

struct FeasibilityReport {
  Verdict verdict = Verdict::Feasible;
  std::vector<Violation> violations;
  double max_residual = 0.0;
  double tolerance = kDefaultTolerance;
};

namespace detail {

inline void record(FeasibilityReport& r, std::vector<std::size_t> indices, Complex lhs,
                   Complex rhs, double residual) {
  r.max_residual = std::max(r.max_residual, residual);
  if (residual > r.tolerance) r.violations.push_back({std::move(indices), lhs, rhs, residual});
}

}  // namespace detail

/// Compares ⟨input_i|input_j⟩ (lhs) with ⟨output_i|output_j⟩ (rhs) for every
/// i < j. Feasible iff every |lhs − rhs| ≤ tol.
inline FeasibilityReport unitary_extension_feasible(const PartialIsometrySpec& spec,
                                                    double tol = kDefaultTolerance) {
  FeasibilityReport r;
  r.tolerance = tol;
  const auto& p = spec.pairs();
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      const Complex lhs = inner_product(p[i].first, p[j].first);
      const Complex rhs = inner_product(p[i].second, p[j].second);
      detail::record(r, {i + 1, j + 1}, lhs, rhs, std::abs(lhs - rhs));
    }
  r.verdict = r.violations.empty() ? Verdict::Feasible : Verdict::Infeasible;
  return r;
}

/// A comparator needs ⟨ψ_j|ψ_i⟩⟨ψ_i|ψ_j⟩ = |⟨ψ_i|ψ_j⟩|² = 0 for every i ≠ j.
inline FeasibilityReport comparator_feasible(const OrderedStateSet& set,
                                             double tol = kDefaultTolerance) {
  if (set.size() < 2) throw Error("too-few-states", "a comparator needs at least two states");
  FeasibilityReport r;
  r.tolerance = tol;
  const auto g = gram_matrix(set);
  for (std::size_t i = 0; i < set.size(); ++i)
    for (std::size_t j = i + 1; j < set.size(); ++j) {
      const Complex product = std::norm(g(i, j));
      detail::record(r, {i + 1, j + 1}, product, Complex{}, std::abs(product));
    }
  r.verdict = r.violations.empty() ? Verdict::Feasible : Verdict::Infeasible;
  return r;
}

/// Sorting ψ_i, ψ_j, ψ_q (i < j < q) forces
/// ⟨ψ_q|ψ_i⟩ = ⟨ψ_j|ψ_i⟩⟨ψ_q|ψ_j⟩⟨Σ″|Σ′⟩ for some ancilla overlap of modulus
/// at most 1, so |⟨ψ_q|ψ_i⟩| ≤ |⟨ψ_j|ψ_i⟩|·|⟨ψ_q|ψ_j⟩| is necessary. The
/// residual of a triple is the excess of the left side over the right.
///
/// Passing every triple only proves sortability for orthogonal sets; other
/// sets get NecessaryTestsPassed.
inline FeasibilityReport sorter_feasible(const OrderedStateSet& set,
                                         double tol = kDefaultTolerance) {
  if (set.size() < 3) throw Error("too-few-states", "the sorter check needs at least three states");
  FeasibilityReport r;
  r.tolerance = tol;
  const auto g = gram_matrix(set);
  const std::size_t n = set.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t q = j + 1; q < n; ++q) {
        const double lhs = std::abs(g(q, i));
        const double rhs = std::abs(g(j, i)) * std::abs(g(q, j));
        detail::record(r, {i + 1, j + 1, q + 1}, lhs, rhs, std::max(0.0, lhs - rhs));
      }
  if (!r.violations.empty()) {
    r.verdict = Verdict::Infeasible;
  } else {
    r.verdict = is_mutually_orthogonal(set) ? Verdict::Feasible : Verdict::NecessaryTestsPassed;
  }
  return r;
}

}  // namespace qorder
