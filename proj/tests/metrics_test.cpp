#include <doctest.h>

#include <algorithm>
#include <set>
#include <stdexcept>
#include <vector>

#include "skor/kernels.hpp"
#include "skor/metrics.hpp"
#include "skor/rng.hpp"

using namespace skor;

namespace {

LabelSet make(std::initializer_list<int> xs) {
  return LabelSet::from_unsorted(std::vector<int>(xs));
}

// Random label set over a fixed alphabet.
LabelSet random_labels(RngStream& rng, int alphabet) {
  std::vector<int> out;
  for (int v = 0; v < alphabet; ++v) {
    if (rng.next_unit() < 0.4) out.push_back(v);
  }
  return LabelSet::from_unsorted(out);
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("f1 of {1,2} vs {2,3} is one half") {
  CHECK(f1_example(make({1, 2}), make({2, 3})) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("f1 conventions at the boundaries") {
  CHECK(f1_example(make({}), make({})) == 1.0);
  CHECK(f1_example(make({1}), make({})) == 0.0);
  CHECK(f1_example(make({}), make({1})) == 0.0);
  CHECK(f1_example(make({4, 9}), make({4, 9})) == 1.0);
  CHECK(f1_example(make({1, 2, 3}), make({7, 8})) == 0.0);
}

TEST_CASE("f1 is symmetric in its arguments") {
  RngStream rng(5);
  for (int t = 0; t < 50; ++t) {
    const LabelSet a = random_labels(rng, 12);
    const LabelSet b = random_labels(rng, 12);
    CHECK(f1_example(a, b) == doctest::Approx(f1_example(b, a)).epsilon(1e-15));
  }
}

TEST_CASE("f1 agrees with naive set arithmetic over many pairs") {
  RngStream rng(17);
  for (int t = 0; t < 200; ++t) {
    const LabelSet a = random_labels(rng, 20);
    const LabelSet b = random_labels(rng, 20);
    const std::set<int> sa(a.indices.begin(), a.indices.end());
    const std::set<int> sb(b.indices.begin(), b.indices.end());
    std::vector<int> inter;
    std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(),
                          std::back_inserter(inter));
    double want;
    if (sa.empty() && sb.empty()) {
      want = 1.0;
    } else {
      want = 2.0 * static_cast<double>(inter.size()) /
             static_cast<double>(sa.size() + sb.size());
    }
    CHECK(f1_example(a, b) == doctest::Approx(want).epsilon(1e-15));
  }
}

TEST_CASE("dataset f1 is the plain mean") {
  std::vector<LabelSet> pred = {make({1, 2}), make({}), make({3})};
  std::vector<LabelSet> truth = {make({2, 3}), make({}), make({3})};
  CHECK(f1_dataset(pred, truth) == doctest::Approx((0.5 + 1.0 + 1.0) / 3.0).epsilon(1e-15));
  CHECK_THROWS_AS(f1_dataset(pred, std::vector<LabelSet>{make({1})}),
                  std::invalid_argument);
  CHECK_THROWS_AS(f1_dataset({}, {}), std::invalid_argument);
}

TEST_CASE("topk accuracy equals a hand loop and is monotone in k") {
  RngStream rng(23);
  const Index n = 1000;
  const Index n_c = 30;
  std::vector<std::vector<Index>> ranked(n);
  std::vector<Index> truth(n);
  for (Index i = 0; i < n; ++i) {
    std::vector<Index> order(n_c);
    for (Index c = 0; c < n_c; ++c) order[c] = c;
    for (Index c = 0; c < n_c; ++c) {
      const Index j = c + static_cast<Index>(rng.next_below(static_cast<std::uint64_t>(n_c - c)));
      std::swap(order[c], order[j]);
    }
    ranked[i] = order;
    truth[i] = static_cast<Index>(rng.next_below(static_cast<std::uint64_t>(n_c)));
  }
  double prev = 0.0;
  for (Index k : {1, 2, 3, 5, 10, 30}) {
    Index hits = 0;
    for (Index i = 0; i < n; ++i) {
      const auto& order = ranked[i];
      const auto end = order.begin() + static_cast<std::ptrdiff_t>(std::min<Index>(k, n_c));
      if (std::find(order.begin(), end, truth[i]) != end) ++hits;
    }
    const double want = static_cast<double>(hits) / static_cast<double>(n);
    const double got = topk_accuracy(ranked, truth, k);
    CHECK(got == doctest::Approx(want).epsilon(1e-15));
    CHECK(got >= prev);
    prev = got;
  }
  CHECK(topk_accuracy(ranked, truth, 30) == 1.0);
}

TEST_CASE("topk handles rankings shorter than k") {
  std::vector<std::vector<Index>> ranked = {{2, 0}, {1}};
  std::vector<Index> truth = {0, 3};
  CHECK(topk_accuracy(ranked, truth, 5) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(topk_accuracy(ranked, truth, 1) == 0.0);
}

TEST_CASE("topk validation") {
  std::vector<std::vector<Index>> ranked = {{0}};
  std::vector<Index> truth = {0};
  CHECK_THROWS_AS(topk_accuracy(ranked, truth, 0), std::invalid_argument);
  CHECK_THROWS_AS(topk_accuracy(ranked, std::vector<Index>{0, 1}, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(topk_accuracy({}, {}, 1), std::invalid_argument);
}

TEST_CASE("kernel loss is nonnegative for valid gram triples") {
  RngStream rng(29);
  const KernelSpec spec = KernelSpec::gaussian(1.0);
  for (int t = 0; t < 1000; ++t) {
    Vector a(2), b(2);
    a << rng.next_normal(), rng.next_normal();
    b << rng.next_normal(), rng.next_normal();
    const double loss = kernel_loss(eval_kernel(spec, a, a), eval_kernel(spec, b, b),
                                    eval_kernel(spec, a, b));
    CHECK(loss >= 0.0);
    CHECK(loss <= 4.0);
  }
}

TEST_CASE("kernel loss clamps only a tiny negative window") {
  CHECK(kernel_loss(1.0, 1.0, 1.0) == 0.0);
  CHECK(kernel_loss(1.0, 1.0, 1.0 + 4e-13) == 0.0);
  CHECK(kernel_loss(1.0, 4.0, 1.0) == doctest::Approx(3.0).epsilon(1e-15));
  // Real PSD violations pass through so the caller can see them.
  CHECK(kernel_loss(1.0, 1.0, 1.1) == doctest::Approx(-0.2).epsilon(1e-12));
}

TEST_CASE("label set helpers") {
  const LabelSet s = LabelSet::from_unsorted({5, 1, 3, 1});
  CHECK(s.indices == std::vector<int>{1, 3, 5});
  CHECK_FALSE(s.empty());
  CHECK(make({}).empty());

  LabelSet bad;
  bad.indices = {2, 1};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad.indices = {1, 1};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad.indices = {-1};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

}  // TEST_SUITE
