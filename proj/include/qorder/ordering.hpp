#pragma once

#include <cmath>
#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qorder/error.hpp"
#include "qorder/linalg.hpp"

namespace qorder {

/// Finite list of states of one shared dimension, totally ordered by position:
/// member i precedes member j iff i < j. Indices are 1-based.
class OrderedStateSet {
 public:
  OrderedStateSet() = default;

  explicit OrderedStateSet(std::vector<StateVector> members) : members_(std::move(members)) {
    for (const auto& m : members_)
      if (m.dim() != members_.front().dim()) {
        throw Error("dim-mismatch", "set members must share one dimension");
      }
  }

  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }
  std::size_t dim() const noexcept { return members_.empty() ? 0 : members_.front().dim(); }
  std::span<const StateVector> members() const noexcept { return members_; }

  /// Member with 1-based index k.
  const StateVector& state(std::size_t k) const {
    if (k < 1 || k > members_.size()) {
      throw Error("bad-index", "index " + std::to_string(k) + " outside 1.." +
                                   std::to_string(members_.size()));
    }
    return members_[k - 1];
  }

  friend bool operator==(const OrderedStateSet&, const OrderedStateSet&) = default;

 private:
  std::vector<StateVector> members_;
};

inline GramMatrix gram_matrix(const OrderedStateSet& set) { return gram_matrix(set.members()); }

/// Nonnegative value attached to each canonical basis state.
class Valuation {
 public:
  explicit Valuation(std::vector<double> basis_values) : values_(std::move(basis_values)) {
    if (values_.empty()) throw Error("bad-valuation", "no basis values");
    for (double v : values_)
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw Error("bad-valuation", "basis values must be finite and nonnegative");
      }
  }

  /// v_b = b, the binary value of the basis label.
  static Valuation canonical(std::size_t dim) {
    std::vector<double> v(dim);
    for (std::size_t b = 0; b < dim; ++b) v[b] = static_cast<double>(b);
    return Valuation(std::move(v));
  }

  std::size_t dim() const noexcept { return values_.size(); }
  std::span<const double> basis_values() const noexcept { return values_; }

 private:
  std::vector<double> values_;
};

/// Expectation of the basis values: Σ_b v_b·|amplitude_b|².
inline double valuation(const StateVector& state, const Valuation& val) {
  if (val.dim() != state.dim()) {
    throw Error("dim-mismatch", "valuation has " + std::to_string(val.dim()) +
                                    " values for a state of dimension " +
                                    std::to_string(state.dim()));
  }
  double s = 0.0;
  for (std::size_t b = 0; b < state.dim(); ++b) s += val.basis_values()[b] * std::norm(state[b]);
  return s;
}

/// Index order of the set; never consults amplitudes or valuations.
inline std::strong_ordering compare_by_index(const OrderedStateSet& set, std::size_t i,
                                             std::size_t j) {
  if (i < 1 || i > set.size() || j < 1 || j > set.size()) {
    throw Error("bad-index", "comparison index outside 1.." + std::to_string(set.size()));
  }
  return i <=> j;
}

enum class SetClass { MutuallyOrthogonal, LinearlyIndependent, LinearlyDependent };

inline std::string_view to_string(SetClass c) {
  switch (c) {
    case SetClass::MutuallyOrthogonal: return "MutuallyOrthogonal";
    case SetClass::LinearlyIndependent: return "LinearlyIndependent";
    case SetClass::LinearlyDependent: return "LinearlyDependent";
  }
  return "?";
}

inline SetClass classify_set(const OrderedStateSet& set) {
  if (set.empty()) throw Error("empty-set", "cannot classify an empty set");
  const auto g = gram_matrix(set);
  bool orthogonal = true;
  for (std::size_t i = 0; i < g.size() && orthogonal; ++i)
    for (std::size_t j = i + 1; j < g.size(); ++j)
      if (std::abs(g(i, j)) > tolerance::kNorm) {
        orthogonal = false;
        break;
      }
  if (orthogonal) return SetClass::MutuallyOrthogonal;
  return g.min_eigenvalue() > tolerance::kPsd ? SetClass::LinearlyIndependent
                                              : SetClass::LinearlyDependent;
}

inline bool is_mutually_orthogonal(const OrderedStateSet& set) {
  return !set.empty() && classify_set(set) == SetClass::MutuallyOrthogonal;
}

}  // namespace qorder
