#include "ucq/channel.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "ucq/random_ensembles.h"

namespace ucq {

namespace {

/// log sum_j x_j^a over the strictly positive x_j, evaluated without underflow.
double log_power_sum(const Eigen::VectorXd& x, double a, double floor = 0.0) {
  double m = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x(i) > floor) m = std::max(m, std::log(x(i)));
  }
  if (!std::isfinite(m)) return -std::numeric_limits<double>::infinity();
  double s = 0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x(i) > floor) s += std::exp(a * (std::log(x(i)) - m));
  }
  return a * m + std::log(s);
}

void check_t(double t, double hi) {
  if (!(t >= 0.0 && t <= hi)) {
    throw DomainError(fmt::format("t = {} outside [0, {}]", t, hi));
  }
}

}  // namespace

Channel::Channel(std::vector<DensityOperator> states) : states_(std::move(states)) {
  if (states_.empty()) throw DomainError("channel needs at least one input symbol");
  for (std::size_t a = 0; a < states_.size(); ++a) {
    if (states_[a].dim() != states_.front().dim()) {
      throw DomainError(fmt::format("W({}) has dimension {}, expected {}", a + 1, states_[a].dim(),
                                    states_.front().dim()));
    }
  }
}

const DensityOperator& Channel::output(int symbol) const {
  if (symbol < 1 || symbol > k()) {
    throw DomainError(fmt::format("input symbol {} outside 1..{}", symbol, k()));
  }
  return states_[static_cast<std::size_t>(symbol - 1)];
}

void validate_distribution(std::span<const double> p, int k) {
  if (static_cast<int>(p.size()) != k) {
    throw DomainError(fmt::format("distribution has {} entries, alphabet has {}", p.size(), k));
  }
  double s = 0;
  for (double q : p) {
    if (!(q >= 0.0)) throw DomainError("distribution entries must be non-negative");
    s += q;
  }
  if (std::abs(s - 1.0) > 1e-9) throw DomainError(fmt::format("distribution sums to {}", s));
}

DensityOperator channel_output(const Channel& w, const Sequence& x, const NumericConfig& cfg) {
  validate_sequence(x, w.k());
  checked_power(static_cast<std::size_t>(w.d()), x.size(), cfg.dim_cap);
  std::vector<HermitianOperator> factors;
  factors.reserve(x.symbols.size());
  for (int s : x.symbols) factors.push_back(w.output(s).op());
  return DensityOperator(tensor_all(factors, cfg), 1e-8);
}

DensityOperator average_state(const Channel& w, std::span<const double> p) {
  validate_distribution(p, w.k());
  HermitianOperator acc = HermitianOperator::zero(static_cast<std::size_t>(w.d()));
  for (int a = 1; a <= w.k(); ++a) acc += w.output(a).op() * p[static_cast<std::size_t>(a - 1)];
  return DensityOperator(acc, 1e-8);
}

double mutual_information(const Channel& w, std::span<const double> p, double tol) {
  DensityOperator wp = average_state(w, p);
  Spectrum mix = wp.op().spectrum();
  double info = 0;
  for (int a = 1; a <= w.k(); ++a) {
    double pa = p[static_cast<std::size_t>(a - 1)];
    if (pa == 0) continue;
    const auto& wa = w.output(a);
    // Tr W log W
    double neg_entropy = 0;
    for (double mu : wa.op().eigenvalues()) {
      if (mu > 0) neg_entropy += mu * std::log(mu);
    }
    // Tr W log W_p, restricted to the support of W_p.
    double cross = 0;
    for (Eigen::Index j = 0; j < mix.values.size(); ++j) {
      Eigen::VectorXcd v = mix.vectors.col(j);
      double weight = (v.adjoint() * wa.matrix() * v)(0, 0).real();
      double nu = mix.values(j);
      if (nu > tol) {
        cross += weight * std::log(nu);
      } else if (weight > 1e-6) {
        throw NumericError(fmt::format("W({}) has weight {} outside the support of W_p", a, weight));
      }
    }
    info += pa * (neg_entropy - cross);
  }
  return std::max(info, 0.0);
}

HermitianOperator powered_mixture(const Channel& w, std::span<const double> p, double t, double tol) {
  validate_distribution(p, w.k());
  HermitianOperator acc = HermitianOperator::zero(static_cast<std::size_t>(w.d()));
  for (int a = 1; a <= w.k(); ++a) {
    double pa = p[static_cast<std::size_t>(a - 1)];
    if (pa == 0) continue;
    acc += pseudo_power(w.output(a).op(), 1.0 - t, tol) * pa;
  }
  return acc;
}

double phi(const Channel& w, std::span<const double> p, double t, double t_gap, double tol) {
  check_t(t, 1.0 - t_gap);
  HermitianOperator mix = powered_mixture(w, p, t, tol);
  double log_tr = log_power_sum(mix.eigenvalues(), 1.0 / (1.0 - t));
  return -(1.0 - t) * log_tr;
}

double hayashi_objective(const Channel& w, std::span<const double> p, double rate, double t, double tol) {
  check_t(t, 1.0);
  HermitianOperator wp_t = pseudo_power(average_state(w, p).op(), t, tol);
  double s = 0;
  for (int a = 1; a <= w.k(); ++a) {
    double pa = p[static_cast<std::size_t>(a - 1)];
    if (pa == 0) continue;
    s += pa * trace_product(pseudo_power(w.output(a).op(), 1.0 - t, tol), wp_t);
  }
  return -std::log(s) - t * rate;
}

double universal_objective(const Channel& w, std::span<const double> p, double rate, double t, double t_gap) {
  return (phi(w, p, t, t_gap) - t * rate) / (1.0 + t);
}

ExponentReport maximize_objective(const std::function<double(double)>& f, double lo, double hi,
                                  const ExponentOptions& opts) {
  if (opts.grid_points < 2) throw DomainError("exponent grid needs at least two points");
  ExponentReport rep;
  const int n = opts.grid_points;
  std::size_t best = 0;
  for (int i = 0; i < n; ++i) {
    double t = (i == n - 1) ? hi : lo + (hi - lo) * i / (n - 1);
    rep.curve.emplace_back(t, f(t));
    if (rep.curve.back().second > rep.curve[best].second) best = static_cast<std::size_t>(i);
  }
  rep.t_star = rep.curve[best].first;
  rep.value = rep.curve[best].second;

  double a = rep.curve[best == 0 ? 0 : best - 1].first;
  double b = rep.curve[std::min(best + 1, rep.curve.size() - 1)].first;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > opts.refine_tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  for (double t : {c, d}) {
    double v = (t == c) ? fc : fd;
    if (v > rep.value) {
      rep.value = v;
      rep.t_star = t;
    }
  }
  return rep;
}

ExponentReport universal_exponent(const Channel& w, std::span<const double> p, double rate,
                                  const ExponentOptions& opts) {
  if (rate < 0) throw DomainError("rate must be non-negative");
  validate_distribution(p, w.k());
  auto rep = maximize_objective([&](double t) { return universal_objective(w, p, rate, t, opts.t_gap); },
                                0.0, 1.0 - opts.t_gap, opts);
  rep.rate = rate;
  return rep;
}

ExponentReport hayashi_exponent(const Channel& w, std::span<const double> p, double rate,
                                const ExponentOptions& opts) {
  if (rate < 0) throw DomainError("rate must be non-negative");
  validate_distribution(p, w.k());
  auto rep = maximize_objective([&](double t) { return hayashi_objective(w, p, rate, t); }, 0.0, 1.0, opts);
  rep.rate = rate;
  return rep;
}

double lemma1_rhs(const HermitianOperator& x, double t, double tol) {
  check_t(t, 1.0 - 1e-12);
  auto ev = x.eigenvalues();
  if (ev.size() > 0 && ev(0) < -tol) throw DomainError("lemma1_rhs needs a positive semidefinite X");
  return std::exp((1.0 - t) * log_power_sum(ev, 1.0 / (1.0 - t)));
}

DensityOperator lemma1_maximizer(const HermitianOperator& x, double t, double tol) {
  check_t(t, 1.0 - 1e-12);
  HermitianOperator powered = pseudo_power(x, 1.0 / (1.0 - t), tol);
  return DensityOperator(powered * (1.0 / powered.trace()), 1e-8);
}

double trace_with_power(const HermitianOperator& x, const HermitianOperator& sigma, double t, double tol) {
  return trace_product(x, pseudo_power(sigma, t, tol));
}

ExponentChainReport exponent_chain_check(const Channel& w, std::span<const double> p, double rate, double t,
                                         double slack) {
  ExponentChainReport rep;
  HermitianOperator x = powered_mixture(w, p, t);
  double ph = phi(w, p, t);
  rep.r_t = (ph - t * rate) / (1.0 + t);
  double at_mixture = trace_with_power(x, average_state(w, p).op(), t);
  rep.lhs = std::exp(t * (rate + rep.r_t)) * lemma1_rhs(x, t);
  rep.middle = std::exp(t * (rate + rep.r_t)) * at_mixture;
  rep.rhs = std::exp(t * rate) * at_mixture;
  rep.applicable = rep.r_t >= 0;
  rep.holds = rep.lhs >= rep.rhs - slack * std::max(1.0, std::abs(rep.rhs));
  return rep;
}

Channel random_channel(int k, int d, std::mt19937_64& rng, bool pure) {
  std::vector<DensityOperator> states;
  for (int a = 0; a < k; ++a) {
    states.push_back(pure ? random_pure_state(static_cast<std::size_t>(d), rng)
                          : random_density(static_cast<std::size_t>(d), rng));
  }
  return Channel(std::move(states));
}

}  // namespace ucq
