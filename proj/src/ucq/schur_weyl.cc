#include "ucq/schur_weyl.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include <boost/multiprecision/cpp_int.hpp>
#include <fmt/format.h>

namespace ucq {

namespace {

using boost::multiprecision::cpp_int;

std::uint64_t to_u64(const cpp_int& v) {
  if (v > cpp_int(std::numeric_limits<std::uint64_t>::max())) {
    throw CapacityError("representation dimension exceeds 64 bits");
  }
  return static_cast<std::uint64_t>(v);
}

std::vector<int> nonzero_rows(const std::vector<int>& rows) {
  std::vector<int> out;
  for (int r : rows) {
    if (r > 0) out.push_back(r);
  }
  return out;
}

/// Character recursion on partitions given by their non-zero rows. Border
/// strips are removed through beta-numbers: a strip of length r corresponds
/// to moving one bead from β to β - r, with sign (-1)^{beads jumped}.
std::int64_t mn_recursive(const std::vector<int>& lam, const std::vector<int>& mu, std::size_t idx,
                          std::map<std::pair<std::vector<int>, std::vector<int>>, std::int64_t>& memo) {
  if (idx == mu.size()) return lam.empty() ? 1 : 0;
  std::vector<int> rest(mu.begin() + static_cast<std::ptrdiff_t>(idx), mu.end());
  auto key = std::make_pair(lam, rest);
  if (auto it = memo.find(key); it != memo.end()) return it->second;

  const int r = mu[idx];
  const int len = static_cast<int>(lam.size());
  std::vector<int> beta(lam.size());
  for (int i = 0; i < len; ++i) beta[static_cast<std::size_t>(i)] = lam[static_cast<std::size_t>(i)] + (len - 1 - i);

  std::int64_t total = 0;
  for (int i = 0; i < len; ++i) {
    int from = beta[static_cast<std::size_t>(i)];
    int to = from - r;
    if (to < 0 || std::find(beta.begin(), beta.end(), to) != beta.end()) continue;
    int jumped = 0;
    for (int b : beta) {
      if (b > to && b < from) ++jumped;
    }
    std::vector<int> nb = beta;
    nb[static_cast<std::size_t>(i)] = to;
    std::sort(nb.rbegin(), nb.rend());
    std::vector<int> next;
    for (int j = 0; j < len; ++j) {
      int row = nb[static_cast<std::size_t>(j)] - (len - 1 - j);
      if (row > 0) next.push_back(row);
    }
    std::int64_t sub = mn_recursive(next, mu, idx + 1, memo);
    total += (jumped % 2 == 0) ? sub : -sub;
  }
  memo.emplace(std::move(key), total);
  return total;
}

std::mutex& character_mutex() {
  static std::mutex m;
  return m;
}

std::map<std::pair<std::vector<int>, std::vector<int>>, std::int64_t>& character_memo() {
  static std::map<std::pair<std::vector<int>, std::vector<int>>, std::int64_t> memo;
  return memo;
}

double int_pow(double base, int exp) {
  double r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

}  // namespace

std::int64_t sn_character(const YoungDiagram& lambda, std::span<const int> cycle_type) {
  int total = 0;
  std::vector<int> mu;
  for (int c : cycle_type) {
    if (c <= 0) throw DomainError("cycle lengths must be positive");
    total += c;
    mu.push_back(c);
  }
  if (total != lambda.n()) {
    throw DomainError(fmt::format("|λ| = {} but cycle type sums to {}", lambda.n(), total));
  }
  std::sort(mu.rbegin(), mu.rend());
  std::lock_guard<std::mutex> lock(character_mutex());
  return mn_recursive(nonzero_rows(lambda.rows()), mu, 0, character_memo());
}

std::uint64_t dim_irrep_sn(const YoungDiagram& lambda) {
  auto rows = nonzero_rows(lambda.rows());
  cpp_int num = 1, den = 1;
  for (int i = 2; i <= lambda.n(); ++i) num *= i;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (int j = 0; j < rows[i]; ++j) {
      int arm = rows[i] - j - 1;
      int leg = 0;
      for (std::size_t r = i + 1; r < rows.size() && rows[r] > j; ++r) ++leg;
      den *= arm + leg + 1;
    }
  }
  return to_u64(num / den);
}

std::uint64_t dim_irrep_su(const YoungDiagram& lambda, int d) {
  if (d < 1) throw DomainError("d must be >= 1");
  if (lambda.length() > d) return 0;
  std::vector<int> rows = lambda.rows();
  rows.resize(static_cast<std::size_t>(std::max<int>(d, static_cast<int>(rows.size()))), 0);
  cpp_int num = 1, den = 1;
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      num *= rows[static_cast<std::size_t>(i)] - rows[static_cast<std::size_t>(j)] + j - i;
      den *= j - i;
    }
  }
  return to_u64(num / den);
}

IsotypicComponent isotypic_projector(const YoungDiagram& lambda, int d, const NumericConfig& cfg) {
  if (lambda.length() > d) {
    throw DomainError(fmt::format("diagram {} has more than d = {} rows", lambda.str(), d));
  }
  const int n = lambda.n();
  const std::size_t dim = checked_power(static_cast<std::size_t>(d), n, cfg.dim_cap);
  std::uint64_t n_fact = 1;
  for (int i = 2; i <= n; ++i) n_fact *= static_cast<std::uint64_t>(i);
  if (n_fact > kMaxProjectorWork / dim) {
    throw CapacityError(fmt::format("character averaging over S_{} on dimension {} is too costly", n, dim));
  }

  IsotypicComponent comp{lambda, HermitianOperator(), dim_irrep_su(lambda, d), dim_irrep_sn(lambda)};
  const double scale = static_cast<double>(comp.dim_v) / static_cast<double>(n_fact);

  // The projector is real: V_s is a 0/1 matrix and characters are integers.
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  std::map<std::vector<int>, std::int64_t> chars;
  for (const auto& s : Permutation::all(n)) {
    auto ct = s.cycle_type();
    auto it = chars.find(ct);
    if (it == chars.end()) it = chars.emplace(ct, sn_character(lambda, ct)).first;
    if (it->second == 0) continue;
    double coef = scale * static_cast<double>(it->second);
    auto map = permutation_index_map(s, d, cfg);
    for (std::size_t e = 0; e < dim; ++e) {
      acc(static_cast<Eigen::Index>(map[e]), static_cast<Eigen::Index>(e)) += coef;
    }
  }
  comp.projector = HermitianOperator(acc.cast<Complex>());
  return comp;
}

UniversalState universal_state(int n, int d, const NumericConfig& cfg) {
  if (n < 0 || d < 1) throw DomainError("universal_state needs n >= 0, d >= 1");
  const std::size_t dim = checked_power(static_cast<std::size_t>(d), n, cfg.dim_cap);
  auto diagrams = enum_young(n, d);
  std::vector<IsotypicComponent> comps;
  HermitianOperator rho = HermitianOperator::zero(dim);
  for (const auto& lam : diagrams) {
    comps.push_back(isotypic_projector(lam, d, cfg));
    const auto& c = comps.back();
    double weight = 1.0 / (static_cast<double>(diagrams.size()) * static_cast<double>(c.dim_u) *
                           static_cast<double>(c.dim_v));
    rho += c.projector * weight;
  }
  return UniversalState{n, d, DensityOperator(rho, 1e-8), std::move(comps)};
}

std::shared_ptr<const UniversalState> shared_universal_state(int n, int d, const NumericConfig& cfg) {
  checked_power(static_cast<std::size_t>(d), n, cfg.dim_cap);
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const UniversalState>> cache;
  {
    std::lock_guard<std::mutex> lock(mutex);
    if (auto it = cache.find({n, d}); it != cache.end()) return it->second;
  }
  auto built = std::make_shared<const UniversalState>(universal_state(n, d, cfg));
  std::lock_guard<std::mutex> lock(mutex);
  return cache.emplace(std::make_pair(n, d), std::move(built)).first->second;
}

DensityOperator conditional_type_state_with(const Sequence& x, const Permutation& s, int d,
                                            const NumericConfig& cfg) {
  checked_power(static_cast<std::size_t>(d), x.size(), cfg.dim_cap);
  Sequence sorted = x;
  std::sort(sorted.symbols.begin(), sorted.symbols.end());
  if (act(s, sorted) != x) {
    throw DomainError(fmt::format("permutation does not map sorted({}) onto it", x.str()));
  }
  int k = 0;
  for (int a : x.symbols) k = std::max(k, a);
  validate_sequence(x, std::max(k, 1));
  std::vector<HermitianOperator> blocks;
  for (int a = 1; a <= k; ++a) {
    int m = static_cast<int>(std::count(x.symbols.begin(), x.symbols.end(), a));
    if (m == 0) continue;
    blocks.push_back(shared_universal_state(m, d, cfg)->rho.op());
  }
  HermitianOperator sorted_state = tensor_all(blocks, cfg);
  return DensityOperator(conjugate_by_permutation(sorted_state, s, d, cfg), 1e-8);
}

ConditionalTypeState conditional_type_state(const Sequence& x, int d, const NumericConfig& cfg) {
  return ConditionalTypeState{x, conditional_type_state_with(x, sorting_permutation(x), d, cfg)};
}

double universal_dominance_constant(int n, int d) {
  return int_pow(n + 1.0, d * (d - 1) / 2) * static_cast<double>(enum_young(n, d).size());
}

double literal_dominance_constant(int n, int d) {
  return int_pow(static_cast<double>(n), d * (d - 1) / 2) * static_cast<double>(enum_young(n, d).size());
}

DominanceReport check_universal_dominance(const DensityOperator& rho, int n, const NumericConfig& cfg,
                                          double tol) {
  const int d = static_cast<int>(rho.dim());
  auto u = shared_universal_state(n, d, cfg);
  std::vector<HermitianOperator> copies(static_cast<std::size_t>(n), rho.op());
  HermitianOperator power = tensor_all(copies, cfg);

  DominanceReport rep;
  rep.literal_constant = literal_dominance_constant(n, d);
  rep.corrected_constant = universal_dominance_constant(n, d);
  rep.literal_residue = dominance_residue(power, u->rho.op() * rep.literal_constant);
  rep.corrected_residue = dominance_residue(power, u->rho.op() * rep.corrected_constant);
  for (const auto& c : u->components) rep.max_dim_u = std::max(rep.max_dim_u, c.dim_u);
  rep.literal_dim_bound = int_pow(static_cast<double>(n), d * (d - 1) / 2);
  rep.literal_dim_bound_holds = static_cast<double>(rep.max_dim_u) <= rep.literal_dim_bound;
  rep.passed = rep.corrected_residue >= -tol;
  return rep;
}

ConditionalDominanceReport check_conditional_dominance(const Channel& w, const Sequence& x,
                                                       const NumericConfig& cfg, double tol) {
  const int d = w.d(), k = w.k(), n = x.size();
  validate_sequence(x, k);
  HermitianOperator out = channel_output(w, x, cfg).op();
  HermitianOperator rho = conditional_type_state(x, d, cfg).rho.op();

  ConditionalDominanceReport rep;
  rep.literal_constant = int_pow(literal_dominance_constant(n, d), k);
  rep.corrected_constant = int_pow(universal_dominance_constant(n, d), k);
  rep.block_constant = 1;
  for (int a = 1; a <= k; ++a) {
    int m = static_cast<int>(std::count(x.symbols.begin(), x.symbols.end(), a));
    rep.block_constant *= universal_dominance_constant(m, d);
  }
  rep.literal_residue = dominance_residue(out, rho * rep.literal_constant);
  rep.corrected_residue = dominance_residue(out, rho * rep.corrected_constant);
  rep.block_residue = dominance_residue(out, rho * rep.block_constant);
  rep.passed = rep.block_residue >= -tol;
  return rep;
}

double check_commutation(const Sequence& x, int d, const NumericConfig& cfg) {
  auto u = shared_universal_state(x.size(), d, cfg);
  return commutator_norm(conditional_type_state(x, d, cfg).rho.op(), u->rho.op());
}

}  // namespace ucq
