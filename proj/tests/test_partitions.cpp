#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "jackmc/partitions.hpp"

using namespace jackmc;

namespace {

// Brute-force count of weakly decreasing sequences inside the box, used as an
// independent oracle for enumerate_in_box.
int brute_count(int max_part, int max_parts) {
  if (max_parts == 0) return 1;
  int total = 0;
  // first part p (0 means the partition has ended; count the empty tail once)
  for (int p = 0; p <= max_part; ++p)
    total += (p == 0) ? 1 : brute_count(p, max_parts - 1);
  return total;
}

long long binomial(int n, int k) {
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

TEST_CASE("canonical form and validation") {
  CHECK(make_partition({3, 1, 0, 0}) == Partition{3, 1});
  CHECK(make_partition({}) == Partition{});
  CHECK_THROWS(make_partition({1, 2}));
  CHECK_THROWS(make_partition({2, -1}));
  CHECK(is_partition({4, 4, 2}));
  CHECK_FALSE(is_partition({2, 3}));
  CHECK(weight({3, 2, 2}) == 7);
  CHECK(length({3, 2, 2}) == 3);
  CHECK(weight({}) == 0);
}

TEST_CASE("conjugate") {
  CHECK(conjugate({3}) == Partition{1, 1, 1});
  CHECK(conjugate({2, 1}) == Partition{2, 1});
  CHECK(conjugate({2, 2, 1}) == Partition{3, 2});
  CHECK(conjugate({}) == Partition{});
  // involution over the whole (6,6) box
  for (const auto& kappa : enumerate_in_box(6, 6))
    CHECK(conjugate(conjugate(kappa)) == kappa);
}

TEST_CASE("dominance order") {
  CHECK(dominance_leq({1, 1, 1}, {3}));
  CHECK(dominance_leq({2, 1}, {3}));
  CHECK(dominance_leq({2, 2}, {3, 1}));
  CHECK_FALSE(dominance_leq({3}, {2, 1}));
  CHECK_FALSE(dominance_leq({2, 1}, {2}));  // different weight: incomparable
  // (2,2) vs (3,1): comparable; (2,2,1) vs (3,1,1) comparable;
  // classic incomparable pair at weight 6: (3,3) and (4,1,1)
  CHECK_FALSE(dominance_leq({3, 3}, {4, 1, 1}));
  CHECK_FALSE(dominance_leq({4, 1, 1}, {3, 3}));
  for (const auto& kappa : enumerate_in_box(4, 4)) {
    CHECK(dominance_leq(kappa, kappa));
  }
}

TEST_CASE("arm and leg lengths") {
  Partition kappa{4, 3, 1};
  CHECK(arm_length(kappa, 1, 1) == 3);
  CHECK(leg_length(kappa, 1, 1) == 2);
  CHECK(arm_length(kappa, 1, 4) == 0);
  CHECK(leg_length(kappa, 1, 4) == 0);
  CHECK(arm_length(kappa, 2, 2) == 1);
  CHECK(leg_length(kappa, 2, 2) == 0);
  CHECK(leg_length(kappa, 1, 2) == 1);
  CHECK_THROWS(arm_length(kappa, 3, 2));
  CHECK_THROWS(arm_length(kappa, 4, 1));
}

TEST_CASE("hook products: basic cells") {
  for (double alpha : {0.5, 1.0, 2.0, 2.718281828459045}) {
    auto hp = hook_products({1}, alpha);
    CHECK(hp.h_upper == doctest::Approx(alpha).epsilon(1e-14));
    CHECK(hp.h_lower == doctest::Approx(1.0).epsilon(1e-14));
  }
  // kappa=(2), alpha=2: cells (1,1): a=1,l=0 and (1,2): a=0,l=0
  auto hp = hook_products({2}, 2.0);
  CHECK(hp.h_upper == doctest::Approx(8.0).epsilon(1e-14));
  CHECK(hp.h_lower == doctest::Approx(3.0).epsilon(1e-14));
  auto he = hook_products({}, 1.0);
  CHECK(he.h_upper == 1.0);
  CHECK(he.h_lower == 1.0);
  CHECK_THROWS(hook_products({1}, 0.0));
}

TEST_CASE("hook conjugation identity over a (5,5) box") {
  // h'_{kappa'}(alpha) = alpha^{|kappa|} * h_kappa(1/alpha)
  for (double alpha : {0.5, 1.0, 2.0, 3.7}) {
    for (const auto& kappa : enumerate_in_box(5, 5)) {
      double lhs = hook_products(conjugate(kappa), alpha).h_upper;
      double rhs =
          std::pow(alpha, weight(kappa)) * hook_products(kappa, 1.0 / alpha).h_lower;
      CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(rhs));
    }
  }
}

TEST_CASE("enumerate_in_box: contents and order") {
  CHECK(enumerate_in_box(0, 3) == std::vector<Partition>{{}});
  CHECK(enumerate_in_box(3, 0) == std::vector<Partition>{{}});

  auto box22 = enumerate_in_box(2, 2);
  // graded, lex-descending inside each weight
  std::vector<Partition> expect{{}, {1}, {2}, {1, 1}, {2, 1}, {2, 2}};
  CHECK(box22 == expect);

  // single column box: N+1 partitions
  for (int n = 0; n <= 6; ++n)
    CHECK((int)enumerate_in_box(1, n).size() == n + 1);
}

TEST_CASE("enumerate_in_box: cardinality, uniqueness, bounds") {
  for (int p = 0; p <= 6; ++p) {
    for (int n = 0; n <= 6; ++n) {
      auto all = enumerate_in_box(p, n);
      CHECK((long long)all.size() == binomial(p + n, n));
      CHECK((int)all.size() == brute_count(p, n));
      std::set<Partition> uniq(all.begin(), all.end());
      CHECK(uniq.size() == all.size());
      for (const auto& kappa : all) {
        CHECK(length(kappa) <= n);
        if (!kappa.empty()) CHECK(kappa[0] <= p);
        CHECK(is_partition(kappa));
      }
    }
  }
}

TEST_CASE("enumeration order refines dominance downward") {
  // If mu < kappa strictly in dominance (same weight), kappa must come first.
  auto all = enumerate_in_box(5, 5);
  for (std::size_t a = 0; a < all.size(); ++a) {
    for (std::size_t b = a + 1; b < all.size(); ++b) {
      if (weight(all[a]) != weight(all[b])) continue;
      // all[b] is listed after all[a]; it must not strictly dominate all[a]
      bool b_dominates_a =
          dominance_leq(all[a], all[b]) && !(all[a] == all[b]);
      CHECK_FALSE(b_dominates_a);
    }
  }
}

TEST_CASE("enumerate_weight_in_box") {
  auto w4 = enumerate_weight_in_box(4, 4, 4);
  std::vector<Partition> expect{{4}, {3, 1}, {2, 2}, {2, 1, 1}, {1, 1, 1, 1}};
  CHECK(w4 == expect);
  CHECK(enumerate_weight_in_box(4, 2, 2) == std::vector<Partition>{{2, 2}});
  CHECK(enumerate_weight_in_box(0, 3, 3) == std::vector<Partition>{{}});
}

TEST_CASE("to_string") {
  CHECK(to_string({3, 1}) == "(3,1)");
  CHECK(to_string({}) == "()");
}
