#include "ucq/combinatorics.h"

#include <cmath>
#include <map>
#include <set>

#include "gtest/gtest.h"

using namespace ucq;

namespace {

// Brute-force oracle: all sequences in {1..k}^n by counting in base k.
std::vector<Sequence> all_sequences(int n, int k) {
  std::vector<Sequence> out;
  std::size_t total = 1;
  for (int i = 0; i < n; ++i) total *= static_cast<std::size_t>(k);
  for (std::size_t e = 0; e < total; ++e) {
    Sequence s;
    s.symbols.resize(static_cast<std::size_t>(n));
    std::size_t r = e;
    for (int i = n - 1; i >= 0; --i) {
      s.symbols[static_cast<std::size_t>(i)] = static_cast<int>(r % static_cast<std::size_t>(k)) + 1;
      r /= static_cast<std::size_t>(k);
    }
    out.push_back(s);
  }
  return out;
}

std::vector<int> counts_of(const Sequence& s, int k) {
  std::vector<int> c(static_cast<std::size_t>(k));
  for (int x : s.symbols) ++c[static_cast<std::size_t>(x - 1)];
  return c;
}

}  // namespace

TEST(combinatorics, enum_young_small_cases) {
  auto y = enum_young(2, 2);
  ASSERT_EQ(y.size(), 2u);
  EXPECT_EQ(y[0].rows(), (std::vector<int>{2, 0}));
  EXPECT_EQ(y[1].rows(), (std::vector<int>{1, 1}));
  auto z = enum_young(0, 3);
  ASSERT_EQ(z.size(), 1u);
  EXPECT_EQ(z[0].rows(), (std::vector<int>{0, 0, 0}));
  auto f = enum_young(4, 2);
  ASSERT_EQ(f.size(), 3u);
  EXPECT_EQ(f[2].rows(), (std::vector<int>{2, 2}));
  EXPECT_THROW(YoungDiagram({1, 2}), DomainError);
}

TEST(combinatorics, enum_types_counts) {
  auto t = enum_types(2, 2);
  ASSERT_EQ(t.size(), 3u);
  EXPECT_EQ(t[0].counts(), (std::vector<int>{2, 0}));
  EXPECT_EQ(t[2].counts(), (std::vector<int>{0, 2}));
  EXPECT_EQ(enum_types(1, 3).size(), 3u);
  EXPECT_EQ(enum_types(5, 3).size(), 21u);
}

TEST(combinatorics, type_of) {
  EXPECT_EQ(type_of(Sequence{{1, 1, 2}}, 2).counts(), (std::vector<int>{2, 1}));
  EXPECT_EQ(type_of(Sequence{}, 3).counts(), (std::vector<int>{0, 0, 0}));
  EXPECT_EQ(type_of(Sequence{{2, 1, 2, 2}}, 2).counts(), (std::vector<int>{1, 3}));
  EXPECT_THROW(type_of(Sequence{{3}}, 2), DomainError);
}

TEST(combinatorics, type_class_sizes) {
  EXPECT_EQ(type_class_size(TypeVector({1, 1})), 2u);
  EXPECT_EQ(type_class_size(TypeVector({2, 0})), 1u);
  EXPECT_EQ(type_class_size(TypeVector({2, 2, 1})), 30u);
  // 5!/(2!2!1!) by floating factorials.
  EXPECT_EQ(30.0, std::tgamma(6.0) / (std::tgamma(3.0) * std::tgamma(3.0)));
  std::vector<int> big{30, 30};
  EXPECT_EQ(multinomial(60, big), 118264581564861424ull);
  std::vector<int> huge{40, 40};
  EXPECT_THROW(multinomial(80, huge), CapacityError);
}

TEST(combinatorics, enum_type_class_matches_brute_force) {
  for (int n = 0; n <= 6; ++n) {
    for (int k = 1; k <= 3; ++k) {
      std::map<std::vector<int>, std::vector<Sequence>> by_type;
      for (const auto& s : all_sequences(n, k)) by_type[counts_of(s, k)].push_back(s);
      for (const auto& p : enum_types(n, k)) {
        auto cls = enum_type_class(p);
        EXPECT_EQ(cls, by_type[p.counts()]) << p.str();
        EXPECT_EQ(cls.size(), type_class_size(p));
      }
    }
  }
  EXPECT_EQ(enum_type_class(TypeVector({1, 1, 1})).size(), 6u);
  EXPECT_THROW(enum_type_class(TypeVector({6, 6}), 100), CapacityError);
}

TEST(combinatorics, type_classes_cover_all_sequences) {
  for (int n = 0; n <= 8; ++n) {
    for (int d = 1; d <= 3; ++d) {
      std::uint64_t total = 0;
      for (const auto& p : enum_types(n, d)) total += type_class_size(p);
      EXPECT_EQ(total, static_cast<std::uint64_t>(std::pow(d, n) + 0.5));
    }
  }
}

TEST(combinatorics, counting_bounds_exhaustive) {
  for (int n = 0; n <= 12; ++n) {
    for (int d = 1; d <= 4; ++d) {
      auto b = type_count_bounds(n, d);
      EXPECT_TRUE(b.holds()) << n << " " << d;
      EXPECT_EQ(b.young_count, enum_young(n, d).size());
      EXPECT_EQ(b.type_count, enum_types(n, d).size());
      for (const auto& p : enum_types(n, d)) EXPECT_TRUE(type_class_lower_bound(p).holds) << p.str();
    }
  }
  auto e = type_class_lower_bound(TypeVector({1, 1}));
  EXPECT_NEAR(e.lower_bound, 4.0 / 9.0, 1e-12);
  EXPECT_EQ(e.class_size, 2u);
}

TEST(combinatorics, conditional_type_counts) {
  EXPECT_EQ(conditional_types_of(Sequence{{1, 2}}, 2).size(), 4u);
  EXPECT_EQ(conditional_types_of(Sequence{{1, 1}}, 2).size(), 3u);
  EXPECT_EQ(conditional_types_of(Sequence{{1, 1, 2}}, 2).size(), 6u);
}

TEST(combinatorics, conditional_type_classes) {
  Sequence x{{1, 2}};
  auto id = joint_conditional_type(x, x, 2);
  EXPECT_TRUE(is_identical(x, id));
  EXPECT_EQ(conditional_type_class(x, id), (std::vector<Sequence>{x}));

  Sequence xx{{1, 1}};
  ConditionalType v{{TypeVector({1, 1}), TypeVector({0, 0})}};
  EXPECT_EQ(conditional_type_class(xx, v), (std::vector<Sequence>{Sequence{{1, 2}}, Sequence{{2, 1}}}));
  EXPECT_FALSE(is_identical(xx, v));

  Sequence x4{{1, 1, 2, 2}};
  ConditionalType w{{TypeVector({1, 1}), TypeVector({2, 0})}};
  auto cls = conditional_type_class(x4, w);
  EXPECT_EQ(cls.size(), 2u);
  EXPECT_EQ(conditional_type_class_size(x4, w), 2u);
}

TEST(combinatorics, conditional_classes_partition_output_space) {
  for (int n = 1; n <= 5; ++n) {
    for (int l = 1; l <= 3; ++l) {
      for (const auto& x : all_sequences(n, 2)) {
        std::set<Sequence> seen;
        std::size_t total = 0;
        for (const auto& v : conditional_types_of(x, l)) {
          auto cls = conditional_type_class(x, v);
          EXPECT_EQ(cls.size(), conditional_type_class_size(x, v));
          for (const auto& y : cls) {
            EXPECT_EQ(joint_conditional_type(x, y, l), v);
            seen.insert(y);
          }
          total += cls.size();
        }
        auto everything = all_sequences(n, l);
        EXPECT_EQ(total, everything.size());
        EXPECT_EQ(seen.size(), everything.size());
      }
    }
  }
}

TEST(combinatorics, entropy_values) {
  EXPECT_NEAR(entropy(TypeVector({1, 1})), std::log(2.0), 1e-15);
  EXPECT_EQ(entropy(TypeVector({2, 0})), 0.0);
  double oracle = -(0.75 * std::log(0.75) + 0.25 * std::log(0.25));
  EXPECT_NEAR(entropy(TypeVector({3, 1})), oracle, 1e-15);
  EXPECT_NEAR(oracle, 0.5623, 1e-4);
}

TEST(combinatorics, sorting_permutation_reconstructs) {
  for (const auto& x : all_sequences(4, 3)) {
    Sequence sorted = x;
    std::sort(sorted.symbols.begin(), sorted.symbols.end());
    EXPECT_EQ(act(sorting_permutation(x), sorted), x);
  }
}

TEST(combinatorics, act_composes) {
  Sequence x{{1, 2, 3, 1}};
  for (const auto& s : Permutation::all(4)) {
    for (const auto& t : Permutation::all(4)) EXPECT_EQ(act(compose(s, t), x), act(s, act(t, x)));
  }
}

TEST(combinatorics, stabilizer_subgroup) {
  Sequence x{{1, 2, 1, 2, 1}};
  auto g = stabilizer_subgroup(x);
  EXPECT_EQ(g.size(), 12u);  // 3! * 2!
  EXPECT_EQ(stabilizer_order(x), 12u);
  for (const auto& s : g) EXPECT_EQ(act(s, x), x);
  // Brute force: exactly these permutations fix x.
  std::size_t fixing = 0;
  for (const auto& s : Permutation::all(5)) fixing += act(s, x) == x;
  EXPECT_EQ(fixing, g.size());
}

TEST(combinatorics, orbit_under_stabilizer_is_conditional_class) {
  Sequence x{{1, 1, 2, 2}};
  auto g = stabilizer_subgroup(x);
  for (const auto& y : all_sequences(4, 2)) {
    std::set<Sequence> orbit;
    for (const auto& s : g) orbit.insert(act(s, y));
    auto cls = conditional_type_class(x, joint_conditional_type(x, y, 2));
    EXPECT_EQ(std::vector<Sequence>(orbit.begin(), orbit.end()), cls);
  }
}

TEST(combinatorics, type_for_length_rounds_by_largest_remainder) {
  std::vector<double> p{0.5, 0.5};
  EXPECT_EQ(type_for_length(p, 3).counts(), (std::vector<int>{2, 1}));
  std::vector<double> q{0.2, 0.3, 0.5};
  EXPECT_EQ(type_for_length(q, 10).counts(), (std::vector<int>{2, 3, 5}));
  EXPECT_EQ(type_for_length(q, 4).n(), 4);
}
