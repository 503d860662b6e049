#include "qorder/synthesis.hpp"

#include <gtest/gtest.h>

#include "qorder/feasibility.hpp"
#include "qorder/simulator.hpp"
#include "test_support.hpp"

using namespace qorder;
using namespace qorder::testing;

namespace {

const OrderedStateSet& qubit_basis() {
  static const OrderedStateSet s({ket0(), ket1()});
  return s;
}

/// Amplitudes of U·(flag|f⟩ ⊗ |ψ_a⟩ ⊗ |ψ_b⟩) by a plain matrix-vector loop.
std::vector<Complex> image(const UnitaryMatrix& u, const OrderedStateSet& s, std::size_t f, std::size_t a,
                           std::size_t b) {
  const auto in = tensor(tensor(StateVector::basis(2, f), s.state(a)), s.state(b));
  std::vector<Complex> out(u.dim());
  for (std::size_t r = 0; r < u.dim(); ++r)
    for (std::size_t c = 0; c < u.dim(); ++c) out[r] += u(r, c) * in[c];
  return out;
}

double overlap_prob(const std::vector<Complex>& v, const StateVector& target) {
  return std::norm(dot_oracle(amplitudes(target), v));
}

}  // namespace

TEST(Comparator, qubit_basis_flags) {
  const auto c = build_comparator(qubit_basis());
  EXPECT_EQ(c.unitary.dim(), 8u);
  const auto f = [&](std::size_t i, std::size_t j) {
    const auto v = image(c.unitary, c.set, 0, i, j);
    const auto one = tensor(tensor(StateVector::basis(2, 1), c.set.state(i)), c.set.state(j));
    return overlap_prob(v, one);
  };
  EXPECT_NEAR(f(1, 2), 1.0, 1e-12);  // ascending → |1⟩
  EXPECT_NEAR(f(2, 1), 0.0, 1e-12);  // descending → |0⟩
  EXPECT_NEAR(f(1, 1), 1.0, 1e-12);  // equal inputs report |1⟩
}

TEST(Comparator, rejects_non_orthogonal) {
  const OrderedStateSet s({ket0(), ket_plus()});
  expect_code([&] { build_comparator(s); }, "not-orthogonal");
  EXPECT_EQ(comparator_feasible(s).verdict, Verdict::Infeasible);
}

TEST(Comparator, random_alphabets_match_index_order) {
  Rng rng(41);
  for (std::size_t d = 2; d <= 8; ++d)
    for (std::size_t n = 1; n <= std::min<std::size_t>(d, 4); ++n) {
      const auto set = random_orthonormal_set(rng, d, n);
      const auto c = build_comparator(set);
      EXPECT_TRUE(is_unitary(c.unitary.matrix(), 1e-9));
      EXPECT_EQ(c.unitary.dim(), 2 * d * d);
      for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t j = 1; j <= n; ++j) {
          const auto r = run_compare(c, i, j);
          const std::size_t expected = compare_by_index(set, i, j) <= 0 ? 1 : 0;
          EXPECT_EQ(r.flag, expected);
          EXPECT_NEAR(r.flag_distribution[expected], 1.0, 1e-9);
          EXPECT_EQ(r.first, i);
          EXPECT_EQ(r.second, j);
        }
    }
}

TEST(CompareSwap, examples) {
  const auto u = build_compare_swap(qubit_basis());
  EXPECT_TRUE(is_unitary(u.matrix(), 1e-9));
  const auto swapped = image(u, qubit_basis(), 0, 2, 1);
  EXPECT_NEAR(overlap_prob(swapped, tensor(tensor(StateVector::basis(2, 0), ket0()), ket1())), 1.0, 1e-12);
  const auto kept = image(u, qubit_basis(), 0, 1, 2);
  EXPECT_NEAR(overlap_prob(kept, tensor(tensor(StateVector::basis(2, 1), ket0()), ket1())), 1.0, 1e-12);
}

TEST(CompareSwap, ascending_pairs_only_flip_the_flag) {
  Rng rng(42);
  for (std::size_t d = 2; d <= 5; ++d) {
    const auto set = random_orthonormal_set(rng, d, d);
    const auto u = build_compare_swap(set);
    for (std::size_t a = 1; a <= d; ++a)
      for (std::size_t b = 1; b <= d; ++b) {
        const auto v = image(u, set, 0, a, b);
        const std::size_t lo = std::min(a, b);
        const std::size_t hi = std::max(a, b);
        const auto target = tensor(tensor(StateVector::basis(2, a <= b ? 1 : 0), set.state(lo)), set.state(hi));
        EXPECT_NEAR(overlap_prob(v, target), 1.0, 1e-9);
      }
  }
}

TEST(CompareSwap, rejects_non_orthogonal) {
  expect_code([] { build_compare_swap(OrderedStateSet({ket0(), ket1(), ket_plus()})); }, "not-orthogonal");
}

TEST(Sorter, stage_layout) {
  EXPECT_EQ(build_sorter(qubit_basis(), 2).stages.size(), 1u);
  const auto s3 = build_sorter(qubit_basis(), 3);
  ASSERT_EQ(s3.stages.size(), 3u);
  EXPECT_EQ(s3.stages[0].position, 1u);
  EXPECT_EQ(s3.stages[1].position, 2u);
  EXPECT_EQ(s3.stages[2].position, 1u);
  EXPECT_EQ(build_sorter(qubit_basis(), 4).stages.size(), 6u);
  for (std::size_t n = 2; n <= 6; ++n) {
    const auto c = build_sorter(qubit_basis(), n);
    EXPECT_EQ(c.stages.size(), n * (n - 1) / 2);
    EXPECT_EQ(c.flag_count(), c.stages.size());
    for (const auto& st : c.stages) {
      EXPECT_TRUE(is_unitary(st.unitary.matrix(), 1e-9));
      EXPECT_GE(st.position, 1u);
      EXPECT_LT(st.position, n);
    }
  }
}

TEST(Sorter, errors) {
  expect_code([] { build_sorter(qubit_basis(), 1); }, "bad-n");
  expect_code([] { build_sorter(qubit_basis(), 7); }, "bad-n");
  expect_code([] { build_sorter(OrderedStateSet({ket0(), ket_plus()}), 3); }, "not-orthogonal");
}

TEST(Sorter, composed_network_is_unitary) {
  // Columns of the full network matrix: every basis state pushed through
  // all stages.
  for (std::size_t d : {2u, 3u}) {
    std::vector<StateVector> m;
    for (std::size_t k = 0; k < d; ++k) m.push_back(StateVector::basis(d, k));
    Rng rng(43);
    const auto alphabet = d == 2 ? OrderedStateSet(m) : random_orthonormal_set(rng, d, d);
    const auto c = build_sorter(alphabet, 3);
    std::vector<std::size_t> dims(3, d);
    dims.insert(dims.end(), c.stages.size(), 2);
    std::size_t total = 1;
    for (auto x : dims) total *= x;

    ComplexMatrix full(total, total);
    for (std::size_t col = 0; col < total; ++col) {
      CompositeState s(StateVector::basis(total, col), dims);
      for (std::size_t k = 0; k < c.stages.size(); ++k) {
        const std::size_t on[] = {3 + k, c.stages[k].position - 1, c.stages[k].position};
        s = apply_on_factors(c.stages[k].unitary, std::move(s), on);
      }
      for (std::size_t row = 0; row < total; ++row) full(row, col) = s.amplitudes()[row];
    }
    EXPECT_TRUE(is_unitary(full, 1e-8)) << "d=" << d;
  }
}

TEST(Sorter, deterministic_construction) {
  Rng rng(44);
  const auto set = random_orthonormal_set(rng, 3, 3);
  const auto a = build_sorter(set, 4);
  const auto b = build_sorter(set, 4);
  for (std::size_t k = 0; k < a.stages.size(); ++k) EXPECT_EQ(a.stages[k].unitary, b.stages[k].unitary);
}
