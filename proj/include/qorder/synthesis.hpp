#pragma once

// Explicit unitaries for comparing and sorting states drawn from a mutually
// orthogonal alphabet. Every machine acts on flag ⊗ A ⊗ B with the flag
// outermost. Registers are left in place as garbage; the flag ends in |1⟩
// when the inputs were already in non-descending index order.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "qorder/error.hpp"
#include "qorder/linalg.hpp"
#include "qorder/ordering.hpp"

namespace qorder {

inline constexpr std::size_t kFlagDim = 2;
inline constexpr std::size_t kMinSortRegisters = 2;
inline constexpr std::size_t kMaxSortRegisters = 6;

struct ComparatorCircuit {
  UnitaryMatrix unitary;
  OrderedStateSet set;

  std::size_t register_dim() const noexcept { return set.dim(); }
  std::size_t flag_dim() const noexcept { return kFlagDim; }
};

struct SorterStage {
  std::size_t position;  // 1-based; acts on registers (position, position + 1)
  UnitaryMatrix unitary;
};

struct SorterCircuit {
  std::vector<SorterStage> stages;
  std::size_t n_registers = 0;
  OrderedStateSet set;

  /// Each stage owns one fresh flag; together they hold the sort's garbage.
  std::size_t flag_count() const noexcept { return stages.size(); }
};

namespace detail {

inline void require_orthogonal(const OrderedStateSet& set) {
  if (set.empty()) throw Error("empty-set", "no alphabet states");
  if (!is_mutually_orthogonal(set)) {
    throw Error("not-orthogonal",
                "non-orthogonal states cannot be compared by a unitary machine");
  }
}

inline StateVector flagged(std::size_t flag, const StateVector& a, const StateVector& b) {
  return tensor(tensor(StateVector::basis(kFlagDim, flag), a), b);
}

/// Unitary on flag ⊗ A ⊗ B sending flag|0⟩|ψ_a⟩|ψ_b⟩ to the state returned by
/// `target(a, b)` for every ordered pair of 1-based alphabet indices.
template <class Target>
UnitaryMatrix pairwise_machine(const OrderedStateSet& set, Target target) {
  require_orthogonal(set);
  const std::size_t n = set.size();
  std::vector<StateVector> in;
  std::vector<StateVector> out;
  in.reserve(n * n);
  out.reserve(n * n);
  for (std::size_t a = 1; a <= n; ++a)
    for (std::size_t b = 1; b <= n; ++b) {
      in.push_back(flagged(0, set.state(a), set.state(b)));
      out.push_back(target(a, b));
    }
  return unitary_from_columns(in, out, kFlagDim * set.dim() * set.dim());
}

}  // namespace detail

/// flag|0⟩|ψ_i⟩|ψ_j⟩ ↦ flag|i ≤ j⟩|ψ_i⟩|ψ_j⟩. Equal inputs report |1⟩.
inline ComparatorCircuit build_comparator(const OrderedStateSet& set) {
  auto u = detail::pairwise_machine(set, [&](std::size_t a, std::size_t b) {
    return detail::flagged(a <= b ? 1 : 0, set.state(a), set.state(b));
  });
  return {std::move(u), set};
}

/// flag|0⟩|ψ_a⟩|ψ_b⟩ ↦ flag|a ≤ b⟩|ψ_min⟩|ψ_max⟩. The flag records which
/// ordering occurred, which keeps the map injective.
inline UnitaryMatrix build_compare_swap(const OrderedStateSet& set) {
  return detail::pairwise_machine(set, [&](std::size_t a, std::size_t b) {
    return a <= b ? detail::flagged(1, set.state(a), set.state(b))
                  : detail::flagged(0, set.state(b), set.state(a));
  });
}

/// Positions (1-based, left register) of an odd-even transposition network
/// on n wires: n rounds alternating (1,2),(3,4),… and (2,3),(4,5),…
inline std::vector<std::size_t> odd_even_transposition_positions(std::size_t n) {
  std::vector<std::size_t> positions;
  for (std::size_t round = 0; round < n; ++round)
    for (std::size_t p = 1 + round % 2; p + 1 <= n; p += 2) positions.push_back(p);
  return positions;
}

inline SorterCircuit build_sorter(const OrderedStateSet& set, std::size_t n) {
  if (n < kMinSortRegisters || n > kMaxSortRegisters) {
    throw Error("bad-n", "register count must be in " + std::to_string(kMinSortRegisters) +
                             ".." + std::to_string(kMaxSortRegisters));
  }
  const auto cs = build_compare_swap(set);
  SorterCircuit circuit{{}, n, set};
  for (std::size_t p : odd_even_transposition_positions(n)) circuit.stages.push_back({p, cs});
  return circuit;
}

}  // namespace qorder
