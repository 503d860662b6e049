#pragma once

// Dense state-vector simulation on a product of finite-dimensional factors.
// The first factor is the most significant digit of the amplitude index.
//
// States built with CompositeState::product() also carry a support list: a
// sorted superset of the nonzero amplitude indices. Local gates then only
// visit the touched index groups, which keeps a long network over a
// million-entry vector cheap as long as the state stays close to a product
// of alphabet states.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qorder/error.hpp"
#include "qorder/linalg.hpp"
#include "qorder/ordering.hpp"
#include "qorder/synthesis.hpp"

namespace qorder {

inline constexpr double kDecodeThreshold = 1e-6;
inline constexpr std::size_t kMaxSimulationDim = std::size_t{1} << 24;
// Amplitudes smaller than this are flushed to zero when a support list is
// maintained, so rounding noise does not spread the support.
inline constexpr double kSupportFlush = 1e-15;

class CompositeState {
 public:
  /// Wraps `vector` as a state over `factor_dims` (no support tracking).
  CompositeState(const StateVector& vector, std::vector<std::size_t> factor_dims)
      : dims_(std::move(factor_dims)),
        amps_(vector.amplitudes().begin(), vector.amplitudes().end()) {
    if (checked_product(dims_) != amps_.size()) {
      throw Error("dim-mismatch", "factor dimensions do not multiply to the vector dimension");
    }
  }

  /// |f_0⟩ ⊗ |f_1⟩ ⊗ … with support tracking enabled.
  static CompositeState product(std::span<const StateVector> factors) {
    if (factors.empty()) throw Error("empty-set", "no factors");
    std::vector<std::size_t> dims;
    for (const auto& f : factors) dims.push_back(f.dim());
    const std::size_t total = checked_product(dims);

    std::vector<Complex> amps(total);
    std::vector<std::size_t> support{0};
    std::vector<Complex> values{1.0};
    for (const auto& f : factors) {
      std::vector<std::size_t> next_support;
      std::vector<Complex> next_values;
      for (std::size_t k = 0; k < support.size(); ++k)
        for (std::size_t a = 0; a < f.dim(); ++a) {
          if (f[a] == Complex{}) continue;
          next_support.push_back(support[k] * f.dim() + a);
          next_values.push_back(values[k] * f[a]);
        }
      support = std::move(next_support);
      values = std::move(next_values);
    }
    for (std::size_t k = 0; k < support.size(); ++k) amps[support[k]] = values[k];
    return CompositeState(std::move(dims), std::move(amps), std::move(support));
  }

  std::size_t dim() const noexcept { return amps_.size(); }
  std::size_t factor_count() const noexcept { return dims_.size(); }
  const std::vector<std::size_t>& factor_dims() const noexcept { return dims_; }
  std::span<const Complex> amplitudes() const noexcept { return amps_; }
  const std::optional<std::vector<std::size_t>>& support() const noexcept { return support_; }

  double norm() const {
    double s = 0.0;
    for_each_index([&](std::size_t x) { s += std::norm(amps_[x]); });
    return std::sqrt(s);
  }

  StateVector vector() const { return StateVector(amps_); }

  /// Distance between the factor's digits: index stride of factor f.
  std::size_t stride(std::size_t f) const {
    std::size_t s = 1;
    for (std::size_t k = f + 1; k < dims_.size(); ++k) s *= dims_[k];
    return s;
  }

  void check_factor(std::size_t f) const {
    if (f >= dims_.size()) {
      throw Error("bad-factor", "factor " + std::to_string(f) + " of " +
                                    std::to_string(dims_.size()));
    }
  }

  /// Calls fn(x) for every index that may hold a nonzero amplitude.
  template <class Fn>
  void for_each_index(Fn&& fn) const {
    if (support_) {
      for (std::size_t x : *support_) fn(x);
    } else {
      for (std::size_t x = 0; x < amps_.size(); ++x) fn(x);
    }
  }

 private:
  friend CompositeState apply(const UnitaryMatrix&, const CompositeState&);
  friend CompositeState apply_on_factors(const UnitaryMatrix&, CompositeState,
                                         std::span<const std::size_t>);

  CompositeState(std::vector<std::size_t> dims, std::vector<Complex> amps,
                 std::optional<std::vector<std::size_t>> support)
      : dims_(std::move(dims)), amps_(std::move(amps)), support_(std::move(support)) {
    const double n = norm();
    if (std::abs(n - 1.0) > tolerance::kNorm) {
      throw Error("not-normalized", "composite norm is " + std::to_string(n));
    }
  }

  static std::size_t checked_product(const std::vector<std::size_t>& dims) {
    std::size_t total = 1;
    for (std::size_t d : dims) {
      if (d == 0) throw Error("dim-mismatch", "factor dimension must be positive");
      if (total > kMaxSimulationDim / d) {
        throw Error("too-large", "state exceeds " + std::to_string(kMaxSimulationDim) +
                                     " amplitudes");
      }
      total *= d;
    }
    return total;
  }

  std::vector<std::size_t> dims_;
  std::vector<Complex> amps_;
  std::optional<std::vector<std::size_t>> support_;
};

/// U·s for a unitary on the whole space.
inline CompositeState apply(const UnitaryMatrix& u, const CompositeState& s) {
  if (u.dim() != s.dim()) {
    throw Error("dim-mismatch", "unitary of dimension " + std::to_string(u.dim()) +
                                    " applied to a state of dimension " +
                                    std::to_string(s.dim()));
  }
  std::vector<Complex> out(s.dim());
  s.for_each_index([&](std::size_t c) {
    const Complex a = s.amps_[c];
    if (a == Complex{}) return;
    for (std::size_t r = 0; r < out.size(); ++r) out[r] += u(r, c) * a;
  });
  return CompositeState(s.dims_, std::move(out), std::nullopt);
}

/// Applies `u` to the listed factors (first listed = most significant local
/// digit) and the identity elsewhere, by index arithmetic.
inline CompositeState apply_on_factors(const UnitaryMatrix& u, CompositeState s,
                                       std::span<const std::size_t> factors) {
  std::size_t local_dim = 1;
  for (std::size_t k = 0; k < factors.size(); ++k) {
    s.check_factor(factors[k]);
    for (std::size_t m = 0; m < k; ++m)
      if (factors[m] == factors[k]) throw Error("bad-factor", "factor listed twice");
    local_dim *= s.dims_[factors[k]];
  }
  if (factors.empty() || local_dim != u.dim()) {
    throw Error("dim-mismatch", "local unitary does not match the selected factors");
  }

  std::vector<std::size_t> strides(factors.size());
  for (std::size_t k = 0; k < factors.size(); ++k) strides[k] = s.stride(factors[k]);

  // offsets[l]: global index displacement of local basis state l.
  std::vector<std::size_t> offsets(local_dim);
  for (std::size_t l = 0; l < local_dim; ++l) {
    std::size_t rest = l;
    std::size_t off = 0;
    for (std::size_t k = factors.size(); k-- > 0;) {
      const std::size_t d = s.dims_[factors[k]];
      off += (rest % d) * strides[k];
      rest /= d;
    }
    offsets[l] = off;
  }
  const auto base_of = [&](std::size_t x) {
    for (std::size_t k = 0; k < factors.size(); ++k)
      x -= ((x / strides[k]) % s.dims_[factors[k]]) * strides[k];
    return x;
  };

  std::vector<std::size_t> bases;
  if (s.support_) {
    for (std::size_t x : *s.support_) bases.push_back(base_of(x));
    std::sort(bases.begin(), bases.end());
    bases.erase(std::unique(bases.begin(), bases.end()), bases.end());
  } else {
    for (std::size_t x = 0; x < s.amps_.size(); ++x)
      if (base_of(x) == x) bases.push_back(x);
  }

  const bool tracked = s.support_.has_value();
  std::vector<std::size_t> support;
  std::vector<Complex> in(local_dim);
  std::vector<Complex> out(local_dim);
  for (std::size_t base : bases) {
    bool any = false;
    for (std::size_t l = 0; l < local_dim; ++l) {
      in[l] = s.amps_[base + offsets[l]];
      any = any || in[l] != Complex{};
    }
    if (!any) continue;
    std::fill(out.begin(), out.end(), Complex{});
    for (std::size_t c = 0; c < local_dim; ++c) {
      if (in[c] == Complex{}) continue;
      for (std::size_t r = 0; r < local_dim; ++r) out[r] += u(r, c) * in[c];
    }
    for (std::size_t l = 0; l < local_dim; ++l) {
      Complex v = out[l];
      if (tracked) {
        if (std::abs(v) < kSupportFlush) {
          v = Complex{};
        } else {
          support.push_back(base + offsets[l]);
        }
      }
      s.amps_[base + offsets[l]] = v;
    }
  }

  std::optional<std::vector<std::size_t>> new_support;
  if (tracked) {
    std::sort(support.begin(), support.end());
    new_support = std::move(support);
  }
  return CompositeState(std::move(s.dims_), std::move(s.amps_), std::move(new_support));
}

inline CompositeState apply_on_factors(const UnitaryMatrix& u, CompositeState s,
                                       std::initializer_list<std::size_t> factors) {
  return apply_on_factors(u, std::move(s), std::span<const std::size_t>(factors.begin(), factors.size()));
}

/// Outcome probabilities of measuring factor f in its canonical basis.
inline std::vector<double> flag_distribution(const CompositeState& s, std::size_t f) {
  s.check_factor(f);
  const std::size_t stride = s.stride(f);
  const std::size_t d = s.factor_dims()[f];
  std::vector<double> p(d, 0.0);
  const auto amps = s.amplitudes();
  s.for_each_index([&](std::size_t x) { p[(x / stride) % d] += std::norm(amps[x]); });
  return p;
}

/// 1-based index k of the alphabet state that factor f holds with reduced
/// probability above 1 − kDecodeThreshold, or nullopt.
inline std::optional<std::size_t> decode_register(const CompositeState& s, std::size_t f,
                                                  const OrderedStateSet& set) {
  s.check_factor(f);
  if (!is_mutually_orthogonal(set)) throw Error("not-orthogonal", "decoding needs an orthogonal alphabet");
  const std::size_t d = s.factor_dims()[f];
  if (d != set.dim()) throw Error("dim-mismatch", "register and alphabet dimensions differ");
  const std::size_t stride = s.stride(f);
  const auto amps = s.amplitudes();

  std::vector<std::size_t> bases;
  s.for_each_index([&](std::size_t x) {
    const std::size_t b = x - ((x / stride) % d) * stride;
    if (bases.empty() || bases.back() != b) bases.push_back(b);
  });
  std::sort(bases.begin(), bases.end());
  bases.erase(std::unique(bases.begin(), bases.end()), bases.end());

  std::vector<double> prob(set.size(), 0.0);
  for (std::size_t base : bases)
    for (std::size_t k = 0; k < set.size(); ++k) {
      const auto& psi = set.members()[k];
      Complex overlap{};
      for (std::size_t a = 0; a < d; ++a) overlap += std::conj(psi[a]) * amps[base + a * stride];
      prob[k] += std::norm(overlap);
    }
  for (std::size_t k = 0; k < prob.size(); ++k)
    if (prob[k] > 1.0 - kDecodeThreshold) return k + 1;
  return std::nullopt;
}

namespace detail {

inline std::size_t read_bit(const std::vector<double>& p, std::size_t factor) {
  if (p.size() == 2) {
    if (p[1] > 1.0 - kDecodeThreshold) return 1;
    if (p[0] > 1.0 - kDecodeThreshold) return 0;
  }
  throw Error("decode-failed", "flag factor " + std::to_string(factor) + " is not a basis state");
}

inline std::size_t decode_or_throw(const CompositeState& s, std::size_t f,
                                   const OrderedStateSet& set) {
  const auto k = decode_register(s, f, set);
  if (!k) throw Error("decode-failed", "register " + std::to_string(f + 1) + " matches no alphabet state");
  return *k;
}

}  // namespace detail

struct CompareResult {
  std::size_t flag = 0;
  std::vector<double> flag_distribution;
  std::size_t first = 0;   // decoded register A (1-based)
  std::size_t second = 0;  // decoded register B (1-based)
};

/// Prepares flag|0⟩|ψ_i⟩|ψ_j⟩, applies the comparator and reads it out.
inline CompareResult run_compare(const ComparatorCircuit& c, std::size_t i, std::size_t j) {
  const std::vector<StateVector> factors{StateVector::basis(kFlagDim, 0), c.set.state(i),
                                         c.set.state(j)};
  const auto out = apply(c.unitary, CompositeState::product(factors));
  CompareResult r;
  r.flag_distribution = flag_distribution(out, 0);
  r.flag = detail::read_bit(r.flag_distribution, 0);
  r.first = detail::decode_or_throw(out, 1, c.set);
  r.second = detail::decode_or_throw(out, 2, c.set);
  return r;
}

/// Final state of the sorting network on ⊗_p |ψ_{input_p}⟩ ⊗ |0…0⟩_flags.
/// Registers are factors 0..n−1, the flag of stage s is factor n + s.
inline CompositeState simulate_sort(const SorterCircuit& c, std::span<const std::size_t> input) {
  if (input.size() != c.n_registers) {
    throw Error("bad-input", "expected " + std::to_string(c.n_registers) + " indices, got " +
                                 std::to_string(input.size()));
  }
  std::vector<StateVector> factors;
  for (std::size_t k : input) factors.push_back(c.set.state(k));
  for (std::size_t s = 0; s < c.stages.size(); ++s) factors.push_back(StateVector::basis(kFlagDim, 0));

  auto state = CompositeState::product(factors);
  for (std::size_t s = 0; s < c.stages.size(); ++s) {
    const auto& stage = c.stages[s];
    const std::size_t on[] = {c.n_registers + s, stage.position - 1, stage.position};
    state = apply_on_factors(stage.unitary, std::move(state), on);
  }
  return state;
}

struct SortResult {
  std::vector<std::size_t> output_indices;
  std::vector<std::size_t> flags;
};

inline SortResult run_sort(const SorterCircuit& c, std::span<const std::size_t> input) {
  const auto state = simulate_sort(c, input);
  SortResult r;
  for (std::size_t p = 0; p < c.n_registers; ++p) r.output_indices.push_back(detail::decode_or_throw(state, p, c.set));
  for (std::size_t s = 0; s < c.stages.size(); ++s) {
    const std::size_t f = c.n_registers + s;
    r.flags.push_back(detail::read_bit(flag_distribution(state, f), f));
  }
  return r;
}

}  // namespace qorder
