#include "ucq/combinatorics.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/multiprecision/cpp_int.hpp>
#include <fmt/format.h>
#include <fmt/ranges.h>

namespace ucq {

namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_mul_overflow(a, b, &r)) {
    throw CapacityError(fmt::format("integer overflow computing {} * {}", a, b));
  }
  return r;
}

std::uint64_t factorial(int n) {
  std::uint64_t r = 1;
  for (int i = 2; i <= n; ++i) r = checked_mul(r, static_cast<std::uint64_t>(i));
  return r;
}

std::vector<std::vector<int>> positions_by_symbol(const Sequence& x, int k) {
  std::vector<std::vector<int>> pos(static_cast<std::size_t>(k));
  for (int i = 0; i < x.size(); ++i) {
    pos[static_cast<std::size_t>(x[i] - 1)].push_back(i);
  }
  return pos;
}

int max_symbol(const Sequence& x) {
  int m = 0;
  for (int s : x.symbols) m = std::max(m, s);
  return m;
}

}  // namespace

YoungDiagram::YoungDiagram(std::vector<int> rows) : rows_(std::move(rows)) {
  if (rows_.empty()) throw DomainError("Young diagram needs depth >= 1");
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (rows_[i] < 0) throw DomainError("Young diagram rows must be non-negative");
    if (i > 0 && rows_[i] > rows_[i - 1]) throw DomainError("Young diagram rows must be non-increasing");
  }
  n_ = std::accumulate(rows_.begin(), rows_.end(), 0);
}

int YoungDiagram::length() const {
  return static_cast<int>(std::count_if(rows_.begin(), rows_.end(), [](int r) { return r > 0; }));
}

std::string YoungDiagram::str() const { return fmt::format("({})", fmt::join(rows_, ",")); }

TypeVector::TypeVector(std::vector<int> counts) : counts_(std::move(counts)) {
  for (int c : counts_) {
    if (c < 0) throw DomainError("type counts must be non-negative");
  }
  n_ = std::accumulate(counts_.begin(), counts_.end(), 0);
}

std::vector<double> TypeVector::probabilities() const {
  std::vector<double> p(counts_.size(), 0.0);
  if (n_ == 0) return p;
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    p[i] = static_cast<double>(counts_[i]) / n_;
  }
  return p;
}

std::string TypeVector::str() const { return fmt::format("({})", fmt::join(counts_, ",")); }

std::string Sequence::str() const { return fmt::format("({})", fmt::join(symbols, ",")); }

std::string ConditionalType::str() const {
  std::vector<std::string> parts;
  for (const auto& r : rows) parts.push_back(r.str());
  return fmt::format("[{}]", fmt::join(parts, ","));
}

void validate_sequence(const Sequence& x, int k) {
  for (int i = 0; i < x.size(); ++i) {
    if (x[i] < 1 || x[i] > k) {
      throw DomainError(fmt::format("symbol {} at position {} outside 1..{}", x[i], i, k));
    }
  }
}

std::vector<YoungDiagram> enum_young(int n, int d) {
  if (n < 0 || d < 1) throw DomainError("enum_young needs n >= 0, d >= 1");
  std::vector<YoungDiagram> out;
  std::vector<int> rows(static_cast<std::size_t>(d), 0);
  // Row i takes values from min(remaining, rows[i-1]) downward.
  auto rec = [&](auto&& self, int i, int remaining, int cap) -> void {
    if (i == d) {
      if (remaining == 0) out.emplace_back(rows);
      return;
    }
    // Remaining rows can absorb at most (d - i) * cap boxes.
    for (int r = std::min(remaining, cap); r >= 0; --r) {
      if (static_cast<long>(r) * (d - i) < remaining) break;
      rows[static_cast<std::size_t>(i)] = r;
      self(self, i + 1, remaining - r, r);
    }
    rows[static_cast<std::size_t>(i)] = 0;
  };
  rec(rec, 0, n, n);
  return out;
}

std::vector<TypeVector> enum_types(int n, int d) {
  if (n < 0 || d < 1) throw DomainError("enum_types needs n >= 0, d >= 1");
  std::vector<TypeVector> out;
  std::vector<int> counts(static_cast<std::size_t>(d), 0);
  auto rec = [&](auto&& self, int i, int remaining) -> void {
    if (i == d - 1) {
      counts[static_cast<std::size_t>(i)] = remaining;
      out.emplace_back(counts);
      return;
    }
    for (int c = remaining; c >= 0; --c) {
      counts[static_cast<std::size_t>(i)] = c;
      self(self, i + 1, remaining - c);
    }
  };
  rec(rec, 0, n);
  return out;
}

TypeVector type_of(const Sequence& x, int d) {
  validate_sequence(x, d);
  std::vector<int> counts(static_cast<std::size_t>(d), 0);
  for (int s : x.symbols) ++counts[static_cast<std::size_t>(s - 1)];
  return TypeVector(std::move(counts));
}

TypeVector type_for_length(std::span<const double> p, int n) {
  std::vector<int> counts(p.size(), 0);
  std::vector<std::pair<double, std::size_t>> remainders;
  int assigned = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    double target = p[i] * n;
    counts[i] = static_cast<int>(std::floor(target + 1e-12));
    assigned += counts[i];
    remainders.emplace_back(target - counts[i], i);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first + 1e-12; });
  for (std::size_t j = 0; assigned < n && j < remainders.size(); ++j, ++assigned) {
    ++counts[remainders[j].second];
  }
  return TypeVector(std::move(counts));
}

std::uint64_t multinomial(int n, std::span<const int> counts) {
  // Product of binomials keeps intermediates small: C(c1, c1) C(c1+c2, c2) ...
  std::uint64_t r = 1;
  int running = 0;
  for (int c : counts) {
    for (int j = 1; j <= c; ++j) {
      ++running;
      // r * running / j is exact at every step (r * C(running, j) structure).
      std::uint64_t g = std::gcd(r, static_cast<std::uint64_t>(j));
      std::uint64_t rr = r / g;
      std::uint64_t jj = static_cast<std::uint64_t>(j) / g;
      std::uint64_t num = static_cast<std::uint64_t>(running) / jj;
      rr = checked_mul(rr, num);
      r = rr;
    }
  }
  if (running != n) throw DomainError("counts do not sum to n");
  return r;
}

std::uint64_t type_class_size(const TypeVector& p) { return multinomial(p.n(), p.counts()); }

void for_each_in_type_class(const TypeVector& p, const std::function<void(const Sequence&)>& f) {
  Sequence x;
  for (int a = 0; a < p.alphabet_size(); ++a) {
    x.symbols.insert(x.symbols.end(), static_cast<std::size_t>(p[a]), a + 1);
  }
  do {
    f(x);
  } while (std::next_permutation(x.symbols.begin(), x.symbols.end()));
}

std::vector<Sequence> enum_type_class(const TypeVector& p, std::uint64_t cap) {
  std::uint64_t size = type_class_size(p);
  if (size > cap) {
    throw CapacityError(fmt::format("type class {} has {} elements, cap {}", p.str(), size, cap));
  }
  std::vector<Sequence> out;
  out.reserve(size);
  for_each_in_type_class(p, [&](const Sequence& x) { out.push_back(x); });
  return out;
}

std::vector<Sequence> enum_sequences(int n, int k, std::uint64_t cap) {
  std::uint64_t total = 1;
  for (int i = 0; i < n; ++i) {
    total = checked_mul(total, static_cast<std::uint64_t>(k));
    if (total > cap) throw CapacityError(fmt::format("{}^{} sequences exceed cap {}", k, n, cap));
  }
  std::vector<Sequence> out;
  out.reserve(total);
  Sequence x{std::vector<int>(static_cast<std::size_t>(n), 1)};
  for (std::uint64_t c = 0; c < total; ++c) {
    out.push_back(x);
    for (int i = n - 1; i >= 0; --i) {
      auto& s = x.symbols[static_cast<std::size_t>(i)];
      if (s < k) {
        ++s;
        break;
      }
      s = 1;
    }
  }
  return out;
}

std::vector<ConditionalType> conditional_types_of(const Sequence& x, int l, int k) {
  if (l < 1) throw DomainError("output alphabet size must be >= 1");
  k = std::max({k, l, max_symbol(x)});
  validate_sequence(x, k);
  std::vector<int> m(static_cast<std::size_t>(k), 0);
  for (int s : x.symbols) ++m[static_cast<std::size_t>(s - 1)];
  std::vector<std::vector<TypeVector>> per_symbol;
  for (int a = 0; a < k; ++a) per_symbol.push_back(enum_types(m[static_cast<std::size_t>(a)], l));

  std::vector<ConditionalType> out;
  ConditionalType cur;
  auto rec = [&](auto&& self, int a) -> void {
    if (a == k) {
      out.push_back(cur);
      return;
    }
    for (const auto& t : per_symbol[static_cast<std::size_t>(a)]) {
      cur.rows.push_back(t);
      self(self, a + 1);
      cur.rows.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

ConditionalType joint_conditional_type(const Sequence& x, const Sequence& y, int l, int k) {
  if (x.size() != y.size()) throw DomainError("sequences of different length");
  k = std::max({k, l, max_symbol(x)});
  validate_sequence(x, k);
  validate_sequence(y, l);
  std::vector<std::vector<int>> counts(static_cast<std::size_t>(k), std::vector<int>(static_cast<std::size_t>(l), 0));
  for (int i = 0; i < x.size(); ++i) {
    ++counts[static_cast<std::size_t>(x[i] - 1)][static_cast<std::size_t>(y[i] - 1)];
  }
  ConditionalType v;
  for (auto& c : counts) v.rows.emplace_back(std::move(c));
  return v;
}

bool is_identical(const Sequence& x, const ConditionalType& v) {
  std::vector<int> m(v.rows.size(), 0);
  for (int s : x.symbols) {
    if (s < 1 || static_cast<std::size_t>(s) > v.rows.size()) return false;
    ++m[static_cast<std::size_t>(s - 1)];
  }
  for (std::size_t a = 0; a < v.rows.size(); ++a) {
    if (m[a] == 0) continue;
    const auto& row = v.rows[a];
    if (static_cast<int>(a) >= row.alphabet_size() || row[static_cast<int>(a)] != m[a]) return false;
  }
  return true;
}

namespace {

void check_conditional_type(const Sequence& x, const ConditionalType& v,
                            const std::vector<std::vector<int>>& pos) {
  for (std::size_t a = 0; a < v.rows.size(); ++a) {
    int m = a < pos.size() ? static_cast<int>(pos[a].size()) : 0;
    if (v.rows[a].n() != m) {
      throw DomainError(fmt::format("conditional type {} is not a conditional type for {}", v.str(), x.str()));
    }
  }
}

}  // namespace

std::uint64_t conditional_type_class_size(const Sequence& x, const ConditionalType& v) {
  if (static_cast<int>(v.rows.size()) < max_symbol(x)) throw DomainError("conditional type has too few rows");
  auto pos = positions_by_symbol(x, static_cast<int>(v.rows.size()));
  check_conditional_type(x, v, pos);
  std::uint64_t size = 1;
  for (const auto& row : v.rows) size = checked_mul(size, type_class_size(row));
  return size;
}

std::vector<Sequence> conditional_type_class(const Sequence& x, const ConditionalType& v) {
  int k = static_cast<int>(v.rows.size());
  if (k < max_symbol(x)) throw DomainError("conditional type has too few rows");
  auto pos = positions_by_symbol(x, k);
  check_conditional_type(x, v, pos);
  std::vector<std::vector<Sequence>> blocks;
  for (const auto& row : v.rows) blocks.push_back(enum_type_class(row));

  std::vector<Sequence> out;
  Sequence y{std::vector<int>(static_cast<std::size_t>(x.size()), 0)};
  auto rec = [&](auto&& self, int a) -> void {
    if (a == k) {
      out.push_back(y);
      return;
    }
    const auto& p = pos[static_cast<std::size_t>(a)];
    for (const auto& block : blocks[static_cast<std::size_t>(a)]) {
      for (std::size_t j = 0; j < p.size(); ++j) {
        y.symbols[static_cast<std::size_t>(p[j])] = block.symbols[j];
      }
      self(self, a + 1);
    }
  };
  rec(rec, 0);
  std::sort(out.begin(), out.end());
  return out;
}

double entropy(const TypeVector& p) {
  double h = 0;
  for (double q : p.probabilities()) {
    if (q > 0) h -= q * std::log(q);
  }
  return h;
}

Permutation sorting_permutation(const Sequence& x) {
  // Sorted position of each element under a stable sort; s maps sorted slot j
  // back to the original position it came from.
  std::vector<int> order(static_cast<std::size_t>(x.size()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return x[a] < x[b]; });
  return Permutation(order);
}

Sequence act(const Permutation& s, const Sequence& x) {
  if (s.size() != x.size()) throw DomainError("permutation and sequence sizes differ");
  Sequence y{std::vector<int>(x.symbols.size())};
  for (int i = 0; i < x.size(); ++i) y.symbols[static_cast<std::size_t>(s(i))] = x[i];
  return y;
}

std::uint64_t stabilizer_order(const Sequence& x) {
  auto counts = type_of(x, std::max(1, max_symbol(x))).counts();
  std::uint64_t r = 1;
  for (int c : counts) r = checked_mul(r, factorial(c));
  return r;
}

std::vector<Permutation> stabilizer_subgroup(const Sequence& x, std::uint64_t cap) {
  std::uint64_t order = stabilizer_order(x);
  if (order > cap) throw CapacityError(fmt::format("|S_x| = {} exceeds cap {}", order, cap));
  int k = std::max(1, max_symbol(x));
  auto pos = positions_by_symbol(x, k);
  std::vector<std::vector<std::vector<int>>> block_perms;
  for (const auto& p : pos) {
    std::vector<std::vector<int>> perms;
    std::vector<int> img = p;
    do {
      perms.push_back(img);
    } while (std::next_permutation(img.begin(), img.end()));
    block_perms.push_back(std::move(perms));
  }
  std::vector<Permutation> out;
  out.reserve(order);
  std::vector<int> image(static_cast<std::size_t>(x.size()));
  auto rec = [&](auto&& self, int a) -> void {
    if (a == k) {
      out.emplace_back(image);
      return;
    }
    const auto& p = pos[static_cast<std::size_t>(a)];
    for (const auto& img : block_perms[static_cast<std::size_t>(a)]) {
      for (std::size_t j = 0; j < p.size(); ++j) image[static_cast<std::size_t>(p[j])] = img[j];
      self(self, a + 1);
    }
  };
  rec(rec, 0);
  return out;
}

TypeCountBounds type_count_bounds(int n, int d) {
  TypeCountBounds b;
  b.young_count = enum_young(n, d).size();
  b.type_count = enum_types(n, d).size();
  b.polynomial_bound = 1;
  for (int i = 0; i < d - 1; ++i) b.polynomial_bound = checked_mul(b.polynomial_bound, static_cast<std::uint64_t>(n + 1));
  return b;
}

TypeClassBound type_class_lower_bound(const TypeVector& p) {
  using boost::multiprecision::cpp_int;
  using boost::multiprecision::pow;
  const int n = p.n();
  TypeClassBound out;
  out.class_size = type_class_size(p);
  cpp_int lhs = pow(cpp_int(n), static_cast<unsigned>(n));
  cpp_int rhs = pow(cpp_int(n + 1), static_cast<unsigned>(p.alphabet_size())) * cpp_int(out.class_size);
  for (int c : p.counts()) rhs *= pow(cpp_int(c), static_cast<unsigned>(c));  // 0^0 = 1
  out.holds = lhs <= rhs;
  out.lower_bound = std::exp(n * entropy(p) - p.alphabet_size() * std::log(n + 1.0));
  return out;
}

}  // namespace ucq
