#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ucq/errors.h"
#include "ucq/operator_core.h"

namespace ucq {

inline constexpr std::uint64_t kDefaultTypeClassCap = 1'000'000;

/// Partition n_1 >= n_2 >= ... >= n_d >= 0 padded with zeros to depth d.
class YoungDiagram {
 public:
  explicit YoungDiagram(std::vector<int> rows);

  int n() const { return n_; }
  int depth() const { return static_cast<int>(rows_.size()); }
  /// Number of non-zero rows.
  int length() const;
  const std::vector<int>& rows() const { return rows_; }
  int operator[](int i) const { return rows_[static_cast<std::size_t>(i)]; }

  std::string str() const;

  auto operator<=>(const YoungDiagram&) const = default;

 private:
  std::vector<int> rows_;
  int n_ = 0;
};

/// Symbol counts of a length-n sequence over an alphabet of size counts.size().
class TypeVector {
 public:
  explicit TypeVector(std::vector<int> counts);

  int n() const { return n_; }
  int alphabet_size() const { return static_cast<int>(counts_.size()); }
  const std::vector<int>& counts() const { return counts_; }
  int operator[](int i) const { return counts_[static_cast<std::size_t>(i)]; }
  std::vector<double> probabilities() const;

  std::string str() const;

  auto operator<=>(const TypeVector&) const = default;

 private:
  std::vector<int> counts_;
  int n_ = 0;
};

/// Sequence over the 1-based alphabet {1, ..., k}.
struct Sequence {
  std::vector<int> symbols;

  int size() const { return static_cast<int>(symbols.size()); }
  int operator[](int i) const { return symbols[static_cast<std::size_t>(i)]; }
  std::string str() const;

  auto operator<=>(const Sequence&) const = default;
};

/// Throws DomainError unless every symbol lies in 1..k.
void validate_sequence(const Sequence& x, int k);

/// One type per input symbol a (over an output alphabet of size l), each of
/// size m_a = number of occurrences of a in the conditioning sequence.
struct ConditionalType {
  std::vector<TypeVector> rows;

  std::string str() const;
  auto operator<=>(const ConditionalType&) const = default;
};

/// Partitions of n into at most d parts in decreasing lexicographic order.
std::vector<YoungDiagram> enum_young(int n, int d);

/// Compositions of n into d non-negative parts in decreasing lexicographic order.
std::vector<TypeVector> enum_types(int n, int d);

TypeVector type_of(const Sequence& x, int d);

/// Count vector closest to n·p by largest remainder (ties to the lower symbol).
TypeVector type_for_length(std::span<const double> p, int n);

/// n! / prod c_i!; throws CapacityError on 64-bit overflow.
std::uint64_t multinomial(int n, std::span<const int> counts);
std::uint64_t type_class_size(const TypeVector& p);

/// Calls f on every sequence of type p, in lexicographic order.
void for_each_in_type_class(const TypeVector& p, const std::function<void(const Sequence&)>& f);

/// All sequences of type p; throws CapacityError when |T_p| > cap.
std::vector<Sequence> enum_type_class(const TypeVector& p, std::uint64_t cap = kDefaultTypeClassCap);

/// All sequences in {1..k}^n in lexicographic order.
std::vector<Sequence> enum_sequences(int n, int k, std::uint64_t cap = kDefaultTypeClassCap);

/// V(x, Y) for an output alphabet of size l. The input alphabet size is
/// taken as max(l, max symbol of x) so the identical conditional type exists
/// whenever the input alphabet equals the output alphabet.
std::vector<ConditionalType> conditional_types_of(const Sequence& x, int l, int k = 0);

/// Conditional type of y given x (joint empirical distribution).
ConditionalType joint_conditional_type(const Sequence& x, const Sequence& y, int l, int k = 0);

/// True iff every symbol a of x is mapped deterministically to itself, i.e.
/// the class T_V(x) is {x}.
bool is_identical(const Sequence& x, const ConditionalType& v);

/// T_V(x): every y whose joint type with x equals the one described by V.
std::vector<Sequence> conditional_type_class(const Sequence& x, const ConditionalType& v);
std::uint64_t conditional_type_class_size(const Sequence& x, const ConditionalType& v);

/// Shannon entropy of the empirical distribution, in nats.
double entropy(const TypeVector& p);

/// Stable permutation s with x = s·sorted(x), where (s·y)_{s(i)} = y_i.
Permutation sorting_permutation(const Sequence& x);

/// (s·x)_{s(i)} = x_i; consistent with V_s W_n(x) V_s† = W_n(s·x).
Sequence act(const Permutation& s, const Sequence& x);

/// S_x = {s : s·x = x}, enumerated as products of per-symbol block
/// permutations. Throws CapacityError if |S_x| > cap.
std::vector<Permutation> stabilizer_subgroup(const Sequence& x, std::uint64_t cap = 1'000'000);
std::uint64_t stabilizer_order(const Sequence& x);

/// |Y_n^d| <= |T_n^d| <= (n+1)^{d-1}, evaluated in exact integer arithmetic.
struct TypeCountBounds {
  std::uint64_t young_count = 0;
  std::uint64_t type_count = 0;
  std::uint64_t polynomial_bound = 0;
  bool holds() const { return young_count <= type_count && type_count <= polynomial_bound; }
};
TypeCountBounds type_count_bounds(int n, int d);

/// (n+1)^{-d} e^{n H(p)} <= |T_p| evaluated exactly as
/// n^n <= (n+1)^d |T_p| prod c_i^{c_i}. Also returns the floating-point sides.
struct TypeClassBound {
  double lower_bound = 0;
  std::uint64_t class_size = 0;
  bool holds = false;
};
TypeClassBound type_class_lower_bound(const TypeVector& p);

}  // namespace ucq
