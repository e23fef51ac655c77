#include "ucq/universal_code.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>

#include <fmt/format.h>

#include "ucq/random_ensembles.h"

namespace ucq {

namespace {

double sequence_probability(const Sequence& x, std::span<const double> p) {
  double prob = 1.0;
  for (int s : x.symbols) prob *= p[static_cast<std::size_t>(s - 1)];
  return prob;
}

double trace3(const Matrix& a, const Matrix& b, const Matrix& c) { return (a * b * c).trace().real(); }

int codebook_dim(const Codebook& cb, int d, const NumericConfig& cfg) {
  return static_cast<int>(checked_power(static_cast<std::size_t>(d), cb.n, cfg.dim_cap));
}

}  // namespace

// ---------------------------------------------------------------------------
// Packing

PackingCertificate verify_packing(const TypeVector& type, std::span<const Sequence> words, std::size_t target_size,
                                  const PackingOptions& opts) {
  PackingCertificate cert;
  const int n = type.n();
  const int k = type.alphabet_size();
  const std::size_t m = std::max(target_size, words.size());
  const double slack = std::exp(std::sqrt(static_cast<double>(n)));
  const double class_size = static_cast<double>(type_class_size(type));
  const std::vector<double> probs = type.probabilities();
  double worst = 0;  // largest relative excess seen so far

  std::set<Sequence> seen;
  for (std::size_t i = 0; i < words.size(); ++i) {
    const Sequence& x = words[i];
    if (x.size() != n || type_of(x, k) != type) {
      cert.same_type = false;
      cert.worst_violation = fmt::format("word {} = {} is not of type {}", i, x.str(), type.str());
      return cert;
    }
    if (!seen.insert(x).second) {
      cert.distinct = false;
      cert.worst_violation = fmt::format("word {} = {} is a duplicate", i, x.str());
      return cert;
    }
  }

  for (std::size_t i = 0; i < words.size(); ++i) {
    const Sequence& x = words[i];
    std::map<ConditionalType, std::uint64_t> counts;
    for (std::size_t j = 0; j < words.size(); ++j) {
      if (j != i) ++counts[joint_conditional_type(x, words[j], k, k)];
    }
    for (const auto& v : conditional_types_of(x, k, k)) {
      if (is_identical(x, v)) continue;
      PackingEntry e;
      e.word = static_cast<int>(i);
      e.v = v;
      e.class_size = conditional_type_class_size(x, v);
      auto it = counts.find(v);
      e.count = it == counts.end() ? 0 : it->second;
      e.allowed = std::max(static_cast<double>(e.class_size) * static_cast<double>(m) * slack / class_size,
                           opts.floor_target);
      if (!e.ok()) {
        cert.surrogate_ok = false;
        double excess = static_cast<double>(e.count) / e.allowed;
        if (excess > worst) {
          worst = excess;
          cert.worst_violation = fmt::format("word {} = {}, conditional type {}: {} other words in a class of {}, {:.6g} allowed",
                                             i, x.str(), v.str(), e.count, e.class_size, e.allowed);
        }
      }
      cert.entries.push_back(std::move(e));
    }

    // Stabilizer averaging of the codebook distribution.
    const std::uint64_t stab = stabilizer_order(x);
    std::vector<Permutation> group;
    if (stab <= opts.orbit_enumeration_limit) group = stabilizer_subgroup(x, opts.orbit_enumeration_limit);
    for (std::size_t j = 0; j < words.size(); ++j) {
      if (j == i) continue;
      SymmetrizedMassEntry e;
      e.word = static_cast<int>(i);
      e.other = static_cast<int>(j);
      if (!group.empty()) {
        std::uint64_t hits = 0;
        for (const auto& s : group) hits += seen.count(act(s, words[j]));
        e.lhs = static_cast<double>(hits) / (static_cast<double>(group.size()) * static_cast<double>(m));
      } else {
        // The S_x orbit of x' is T_V(x) for V the joint type of (x, x').
        ConditionalType v = joint_conditional_type(x, words[j], k, k);
        std::uint64_t hits = 0;
        for (const auto& z : conditional_type_class(x, v)) hits += seen.count(z);
        e.lhs = static_cast<double>(hits) /
                (static_cast<double>(conditional_type_class_size(x, v)) * static_cast<double>(m));
      }
      e.rhs = sequence_probability(words[j], probs) * slack;
      if (!e.ok()) {
        cert.symmetrized_ok = false;
        double excess = e.lhs / e.rhs;
        if (excess > worst) {
          worst = excess;
          cert.worst_violation = fmt::format("words {} = {} and {} = {}: symmetrized mass {:.6g} exceeds {:.6g}", i,
                                             x.str(), j, words[j].str(), e.lhs, e.rhs);
        }
      }
      cert.symmetrized.push_back(e);
    }
  }
  return cert;
}

PackingCertificate verify_packing(const Codebook& cb, const PackingOptions& opts) {
  return verify_packing(cb.type, cb.words, cb.words.size(), opts);
}

Codebook build_codebook(const TypeVector& p, int m, std::uint64_t seed, int max_attempts,
                        const PackingOptions& opts) {
  if (m < 1) throw DomainError("codebook size must be at least 1");
  if (max_attempts < 1) throw DomainError("max_attempts must be at least 1");
  const std::uint64_t class_size = type_class_size(p);
  if (static_cast<std::uint64_t>(m) > class_size) {
    throw DomainError(fmt::format("codebook size {} exceeds |T_p| = {} for type {}", m, class_size, p.str()));
  }
  const std::vector<Sequence> pool = enum_type_class(p, opts.type_class_cap);

  Codebook cb;
  cb.n = p.n();
  cb.k = p.alphabet_size();
  cb.type = p;
  std::string worst;

  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    Rng rng = substream(seed, "codebook", static_cast<std::uint64_t>(attempt));
    std::vector<Sequence> words;
    std::sample(pool.begin(), pool.end(), std::back_inserter(words), m, rng);
    std::sort(words.begin(), words.end());
    auto cert = verify_packing(p, words, words.size(), opts);
    if (cert.passed()) {
      cb.words = std::move(words);
      cb.certificate = std::move(cert);
      return cb;
    }
    if (worst.empty()) worst = cert.worst_violation;
  }

  if (class_size <= opts.exhaustive_limit) {
    std::vector<Sequence> order = pool;
    Rng rng = substream(seed, "codebook-greedy");
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<Sequence> chosen;
    for (const auto& w : order) {
      chosen.push_back(w);
      if (!verify_packing(p, chosen, static_cast<std::size_t>(m), opts).passed()) chosen.pop_back();
      if (static_cast<int>(chosen.size()) == m) break;
    }
    if (static_cast<int>(chosen.size()) == m) {
      std::sort(chosen.begin(), chosen.end());
      cb.certificate = verify_packing(p, chosen, chosen.size(), opts);
      cb.words = std::move(chosen);
      return cb;
    }
  }
  throw PackingError(fmt::format("no codebook of {} words of type {} after {} attempts; first violation: {}", m,
                                 p.str(), max_attempts, worst));
}

// ---------------------------------------------------------------------------
// Decoder

HermitianOperator threshold_projection(const Sequence& x, double c, int d, const NumericConfig& cfg) {
  if (!(c > 0)) throw DomainError(fmt::format("threshold C = {} must be positive", c));
  auto u = shared_universal_state(x.size(), d, cfg);
  auto rx = conditional_type_state(x, d, cfg);
  return positive_part_projector(rx.rho.op() - u->rho.op() * c, cfg.eig_tol);
}

SrmPovm square_root_measurement(std::span<const HermitianOperator> projections, double tol) {
  if (projections.empty()) throw DomainError("square-root measurement needs at least one element");
  const std::size_t dim = projections.front().dim();
  HermitianOperator s = HermitianOperator::zero(dim);
  for (const auto& p : projections) {
    if (p.dim() != dim) throw DomainError("projections have mismatched dimensions");
    s += p;
  }
  const Matrix b = inv_sqrt_on_support(s, tol).matrix();
  SrmPovm out;
  HermitianOperator total = HermitianOperator::zero(dim);
  for (const auto& p : projections) {
    out.elements.emplace_back(b * p.matrix() * b);
    total += out.elements.back();
  }
  out.abstain = HermitianOperator::identity(dim) - total;
  return out;
}

PovmCheck check_povm(const SrmPovm& povm) {
  PovmCheck c;
  const std::size_t dim = povm.abstain.dim();
  HermitianOperator total = HermitianOperator::zero(dim);
  double min_eig = povm.abstain.min_eigenvalue();
  for (const auto& y : povm.elements) {
    min_eig = std::min(min_eig, y.min_eigenvalue());
    total += y;
  }
  c.min_element_eigenvalue = min_eig;
  c.sum_dominance_residue = dominance_residue(total, HermitianOperator::identity(dim));
  c.completeness_residue = max_abs((total + povm.abstain - HermitianOperator::identity(dim)).matrix());
  return c;
}

UniversalDecoder build_decoder(const Codebook& cb, double c, int d, const NumericConfig& cfg) {
  if (cb.words.empty()) throw DomainError("decoder needs a non-empty codebook");
  codebook_dim(cb, d, cfg);
  UniversalDecoder dec;
  dec.codebook = cb;
  dec.threshold = c;
  dec.d = d;
  for (const auto& x : cb.words) dec.projections.push_back(threshold_projection(x, c, d, cfg));
  dec.povm = square_root_measurement(dec.projections, cfg.eig_tol);
  return dec;
}

double choose_threshold(const Channel* hint, std::span<const double> p, double rate, int n) {
  if (rate < 0) throw DomainError("rate must be non-negative");
  if (n < 1) throw DomainError("block length must be positive");
  if (hint == nullptr) return std::exp(n * rate);
  auto rep = universal_exponent(*hint, p, rate);
  return std::exp(n * (rate + rep.value));
}

// ---------------------------------------------------------------------------
// Evaluation

ErrorReport error_probability(const UniversalDecoder& dec, const Channel& w, const NumericConfig& cfg) {
  if (w.d() != dec.d) {
    throw DomainError(fmt::format("channel dimension {} does not match decoder dimension {}", w.d(), dec.d));
  }
  const auto& words = dec.codebook.words;
  const std::size_t m = words.size();
  std::vector<DensityOperator> outs;
  for (const auto& x : words) outs.push_back(channel_output(w, x, cfg));
  const std::size_t dim = outs.front().dim();

  ErrorReport rep;
  HermitianOperator total = HermitianOperator::zero(dim);
  for (const auto& o : outs) total += o.op();
  for (std::size_t i = 0; i < m; ++i) {
    double err = 1.0 - trace_product(outs[i].op(), dec.povm.elements[i]);
    rep.per_word.push_back(std::clamp(err, 0.0, 1.0));
    rep.first_term += 1.0 - trace_product(outs[i].op(), dec.projections[i]);
    rep.second_term += trace_product(dec.projections[i], total - outs[i].op());
  }
  rep.average = std::accumulate(rep.per_word.begin(), rep.per_word.end(), 0.0) / static_cast<double>(m);
  rep.first_term /= static_cast<double>(m);
  rep.second_term /= static_cast<double>(m);
  return rep;
}

HayashiNagaokaReport check_hayashi_nagaoka(std::span<const HermitianOperator> projections, const SrmPovm& povm) {
  HayashiNagaokaReport rep;
  const std::size_t dim = povm.abstain.dim();
  const HermitianOperator id = HermitianOperator::identity(dim);
  HermitianOperator sum = HermitianOperator::zero(dim);
  for (const auto& p : projections) sum += p;
  rep.min_residue = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < projections.size(); ++i) {
    HermitianOperator rhs = (id - projections[i]) * 2.0 + (sum - projections[i]) * 4.0;
    double r = dominance_residue(id - povm.elements[i], rhs);
    rep.residues.push_back(r);
    rep.min_residue = std::min(rep.min_residue, r);
  }
  return rep;
}

HayashiNagaokaReport check_hayashi_nagaoka(const UniversalDecoder& dec) {
  return check_hayashi_nagaoka(dec.projections, dec.povm);
}

bool TermBoundReport::holds() const {
  return std::all_of(steps.begin(), steps.end(), [](const BoundStep& s) { return s.holds; });
}

std::string TermBoundReport::first_failure() const {
  for (const auto& s : steps) {
    if (!s.holds) return s.word >= 0 ? fmt::format("{} (word {})", s.name, s.word) : s.name;
  }
  return {};
}

TermBoundReport check_term_bounds(const UniversalDecoder& dec, const Channel& w, double t,
                                  const NumericConfig& cfg) {
  if (!(t >= 0 && t <= 1.0 - kDefaultTGap)) throw DomainError(fmt::format("t = {} outside [0, 1 - 1e-6]", t));
  const Codebook& cb = dec.codebook;
  if (w.k() != cb.k) {
    throw DomainError(fmt::format("channel has {} inputs, codebook alphabet has {}", w.k(), cb.k));
  }
  TermBoundReport rep;
  rep.t = t;
  rep.error = error_probability(dec, w, cfg);

  const int n = cb.n;
  const int d = dec.d;
  const int k = cb.k;
  const double c = dec.threshold;
  const double tol = cfg.eig_tol;
  const std::size_t m = cb.words.size();
  const std::vector<double> p = cb.type.probabilities();
  const double c_single = universal_dominance_constant(n, d);
  const double c_cond = std::pow(c_single, k);
  const double types_factor = std::pow(n + 1.0, k);
  const double root = std::exp(std::sqrt(static_cast<double>(n)));

  auto add = [&](std::string name, int word, double lhs, double rhs) {
    bool ok = lhs <= rhs + 1e-9 * std::max(1.0, std::abs(rhs));
    rep.steps.push_back({std::move(name), word, lhs, rhs, ok});
  };

  auto u = shared_universal_state(n, d, cfg);
  const HermitianOperator u_t = pseudo_power(u->rho.op(), t, tol);
  const HermitianOperator id = HermitianOperator::identity(u->rho.dim());

  std::vector<DensityOperator> outs;
  for (const auto& x : cb.words) outs.push_back(channel_output(w, x, cfg));

  rep.steps.push_back({"eq37", -1, rep.error.average, rep.error.decomposition_bound(),
                       rep.error.average <= rep.error.decomposition_bound() + 1e-9});

  // First term: per codeword.
  for (std::size_t i = 0; i < m; ++i) {
    const Sequence& x = cb.words[i];
    const auto rx = conditional_type_state(x, d, cfg);
    const Matrix& wx = outs[i].matrix();
    double a = trace_product(outs[i].op(), id - dec.projections[i]);
    double b = std::pow(c, t) * trace3(wx, pseudo_power(rx.rho.op(), -t, tol).matrix(), u_t.matrix());
    double cc = std::pow(c_cond, t) * std::pow(c, t) * trace_product(pseudo_power(outs[i].op(), 1.0 - t, tol), u_t);
    add("ineq4", static_cast<int>(i), a, b);
    add("ineq5", static_cast<int>(i), b, cc);
  }

  // First term: averaged over the whole input space.
  double avg_first = 0;
  for (const auto& x : enum_sequences(n, k)) {
    double px = sequence_probability(x, p);
    if (px == 0) continue;
    auto wx = channel_output(w, x, cfg);
    avg_first += px * trace_product(wx.op(), id - threshold_projection(x, c, d, cfg));
  }
  // Tr W(x)(I - P(x)) is constant on T_p, so term1 equals its value at any codeword.
  const double term1 = rep.error.first_term;
  add("type_class_invariance", -1,
      std::abs(term1 - trace_product(outs.front().op(), id - dec.projections.front())), 1e-9);
  const double l5 = types_factor * avg_first;
  add("l5", -1, term1, l5);

  HermitianOperator mix = powered_mixture(w, p, t, tol);
  std::vector<HermitianOperator> copies(static_cast<std::size_t>(n), mix);
  const double l6 = types_factor * std::pow(c_cond, t) * std::pow(c, t) * trace_product(tensor_all(copies, cfg), u_t);
  add("l6", -1, l5, l6);
  const double eq49 = types_factor * std::pow(c_cond, t) * std::pow(c, t) * std::exp(-n * phi(w, p, t));
  add("lemma1", -1, l6, eq49);
  add("eq49", -1, term1, eq49);
  rep.error.first_term_bound = eq49;

  // Second term.
  const DensityOperator wp = average_state(w, p);
  std::vector<HermitianOperator> wp_copies(static_cast<std::size_t>(n), wp.op());
  const HermitianOperator wp_n = tensor_all(wp_copies, cfg);
  const double eq59 = root * c_single / c;
  double term2_total = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const Sequence& x = cb.words[i];
    const HermitianOperator& px = dec.projections[i];
    double t2 = 0;
    double t2_sym = 0;
    for (std::size_t j = 0; j < m; ++j) {
      if (j == i) continue;
      t2 += trace_product(px, outs[j].op()) / static_cast<double>(m);
      auto orbit = conditional_type_class(x, joint_conditional_type(x, cb.words[j], k, k));
      double acc = 0;
      for (const auto& z : orbit) acc += trace_product(px, channel_output(w, z, cfg).op());
      t2_sym += acc / (static_cast<double>(m) * static_cast<double>(orbit.size()));
    }
    term2_total += t2;
    const int wi = static_cast<int>(i);
    add("symmetrization", wi, std::abs(t2 - t2_sym), 1e-9);
    double l13 = root * trace_product(px, wp_n);
    double l14 = root * c_single * trace_product(px, u->rho.op());
    double l15 = root * c_single / c * trace_product(px, conditional_type_state(x, d, cfg).rho.op());
    add("l13", wi, t2, l13);
    add("l14", wi, l13, l14);
    add("l15", wi, l14, l15);
    add("eq59", wi, l15, eq59);
  }
  add("term2_total", -1, rep.error.second_term, term2_total + 1e-12);
  rep.error.second_term_bound = eq59 * static_cast<double>(m);
  return rep;
}

// ---------------------------------------------------------------------------
// Experiments

int experiment_codebook_size(double rate, int n, std::uint64_t type_class_size) {
  double target = std::round(std::exp(n * rate - std::sqrt(static_cast<double>(n))));
  double m = std::max(2.0, target);
  m = std::min(m, static_cast<double>(type_class_size));
  return static_cast<int>(m);
}

ExperimentResult exponent_experiment(const Channel& w, std::span<const double> p, const ExperimentConfig& cfg) {
  validate_distribution(p, w.k());
  if (cfg.rate < 0) throw DomainError("rate must be non-negative");
  if (cfg.n_list.empty()) throw DomainError("n list is empty");
  ExperimentResult res;
  res.theory = universal_exponent(w, p, cfg.rate);
  res.mutual_information = mutual_information(w, p);

  for (int n : cfg.n_list) {
    if (n < 1) throw DomainError(fmt::format("block length {} must be positive", n));
    checked_power(static_cast<std::size_t>(w.d()), n, cfg.numeric.dim_cap);
    const TypeVector type = type_for_length(p, n);
    const std::uint64_t class_size = type_class_size(type);
    const int m = cfg.m_override ? std::min<int>(*cfg.m_override, static_cast<int>(std::min<std::uint64_t>(
                                                                      class_size, std::numeric_limits<int>::max())))
                                 : experiment_codebook_size(cfg.rate, n, class_size);
    double nominal_m = std::exp(n * cfg.rate - std::sqrt(static_cast<double>(n)));
    if (!cfg.m_override && static_cast<double>(m) != std::round(nominal_m)) {
      res.notes.push_back(fmt::format("n={}: codebook size {} used in place of e^(nR-sqrt n) = {:.4g}", n, m, nominal_m));
    }
    double c = 0;
    switch (cfg.policy) {
      case ThresholdPolicy::kFixed:
        c = cfg.fixed_threshold;
        break;
      case ThresholdPolicy::kRateOnly:
        c = choose_threshold(nullptr, p, cfg.rate, n);
        break;
      case ThresholdPolicy::kChannelHinted:
        c = std::exp(n * (cfg.rate + res.theory.value));
        break;
    }
    for (std::uint64_t seed : cfg.seeds) {
      Codebook cb = build_codebook(type, m, seed, cfg.max_attempts);
      UniversalDecoder dec = build_decoder(cb, c, w.d(), cfg.numeric);
      ErrorReport err = error_probability(dec, w, cfg.numeric);
      ExperimentRow row;
      row.n = n;
      row.m = m;
      row.threshold = c;
      row.epsilon = err.average;
      row.rate_empirical =
          err.average > 0 ? -std::log(err.average) / n : std::numeric_limits<double>::infinity();
      row.exponent_theory = res.theory.value;
      row.seed = seed;
      res.rows.push_back(row);
    }
  }
  return res;
}

double helstrom_error(const DensityOperator& a, const DensityOperator& b) {
  return 0.5 * (1.0 - 0.5 * trace_norm(a.op() - b.op()));
}

}  // namespace ucq
