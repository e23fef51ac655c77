#include "ucq/verify_battery.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include <fmt/format.h>

#include "ucq/channel.h"
#include "ucq/random_ensembles.h"
#include "ucq/schur_weyl.h"
#include "ucq/universal_code.h"

namespace ucq {

namespace {

constexpr double kTol = 1e-9;

struct Tracker {
  CheckResult r;
  explicit Tracker(std::string name) {
    r.name = std::move(name);
    r.worst_slack = std::numeric_limits<double>::infinity();
  }
  // Records a case whose slack must be >= -tol.
  void record(double slack, double tol, const std::string& where) {
    ++r.cases;
    if (slack < r.worst_slack) {
      r.worst_slack = slack;
      if (slack < -tol) r.detail = where;
    }
  }
  CheckResult finish(double tol) {
    r.passed = r.cases > 0 && r.worst_slack >= -tol;
    if (r.passed) r.detail.clear();
    return r;
  }
};

CheckResult check_isotypic(const BatteryOptions& o) {
  Tracker tr("isotypic");
  for (int n = 1; n <= o.n_max; ++n) {
    auto u = shared_universal_state(n, o.d, o.numeric);
    const std::size_t dim = u->rho.dim();
    HermitianOperator sum = HermitianOperator::zero(dim);
    std::uint64_t dims = 0;
    for (std::size_t a = 0; a < u->components.size(); ++a) {
      const auto& ca = u->components[a];
      sum += ca.projector;
      dims += ca.dim_u * ca.dim_v;
      for (std::size_t b = 0; b < u->components.size(); ++b) {
        Matrix prod = ca.projector.matrix() * u->components[b].projector.matrix();
        double res = a == b ? max_abs(prod - ca.projector.matrix()) : max_abs(prod);
        tr.record(-res, kTol, fmt::format("n={} {}x{}: orthogonality residue {:.3g}", n, ca.diagram.str(),
                                          u->components[b].diagram.str(), res));
      }
    }
    double comp = max_abs((sum - HermitianOperator::identity(dim)).matrix());
    tr.record(-comp, kTol, fmt::format("n={}: completeness residue {:.3g}", n, comp));
    tr.record(dims == dim ? 0.0 : -1.0, kTol, fmt::format("n={}: dimensions sum to {} not {}", n, dims, dim));
  }
  return tr.finish(kTol);
}

CheckResult check_universal(const BatteryOptions& o) {
  Tracker tr("universal_dominance");
  for (int n = 2; n <= o.n_max; ++n) {
    Rng rng = substream(o.seed, "battery-universal", static_cast<std::uint64_t>(n));
    for (int i = 0; i < 10; ++i) {
      auto rho = i % 2 == 0 ? random_pure_state(static_cast<std::size_t>(o.d), rng)
                            : random_density(static_cast<std::size_t>(o.d), rng);
      auto rep = check_universal_dominance(rho, n, o.numeric);
      tr.record(rep.corrected_residue, kTol, fmt::format("n={} state {}: residue {:.3g}", n, i, rep.corrected_residue));
    }
  }
  return tr.finish(kTol);
}

CheckResult check_conditional(const BatteryOptions& o) {
  Tracker tr("conditional_dominance");
  Rng rng = substream(o.seed, "battery-conditional");
  Channel w = random_channel(2, o.d, rng);
  for (int n = 1; n <= std::min(o.n_max, 3); ++n) {
    for (const auto& x : enum_sequences(n, w.k())) {
      auto rep = check_conditional_dominance(w, x, o.numeric);
      tr.record(rep.block_residue, kTol, fmt::format("x={}: residue {:.3g}", x.str(), rep.block_residue));
    }
  }
  return tr.finish(kTol);
}

CheckResult check_commute(const BatteryOptions& o) {
  Tracker tr("commutation");
  for (int n = 1; n <= o.n_max; ++n) {
    for (const auto& x : enum_sequences(n, o.d)) {
      double c = check_commutation(x, o.d, o.numeric);
      tr.record(-c, kTol, fmt::format("x={}: commutator {:.3g}", x.str(), c));
    }
  }
  return tr.finish(kTol);
}

CheckResult check_lemma1(const BatteryOptions& o) {
  Tracker tr("lemma1");
  Rng rng = substream(o.seed, "battery-lemma1");
  for (int i = 0; i < 5; ++i) {
    HermitianOperator x = random_psd(4, rng);
    for (double t : {0.25, 0.5, 0.75}) {
      double bound = lemma1_rhs(x, t);
      for (int j = 0; j < 200; ++j) {
        auto sigma = random_density(4, rng);
        double v = trace_with_power(x, sigma.op(), t);
        tr.record(bound - v, kTol, fmt::format("X#{} t={}: trial {:.12g} exceeds {:.12g}", i, t, v, bound));
      }
      double at = trace_with_power(x, lemma1_maximizer(x, t).op(), t);
      tr.record(-std::abs(at - bound), 1e-8, fmt::format("X#{} t={}: maximizer gives {:.12g}, bound {:.12g}", i, t, at, bound));
    }
  }
  return tr.finish(1e-8);
}

CheckResult check_projectors(const BatteryOptions& o) {
  Tracker tr("decoder_projectors");
  const int n = std::clamp(o.n_max, 2, 3);
  const std::vector<double> p{0.5, 0.5};
  Codebook cb = build_codebook(type_for_length(p, n), 2, o.seed);
  UniversalDecoder dec = build_decoder(cb, choose_threshold(nullptr, p, 0.1, n), o.d, o.numeric);
  if (o.inject_fault) {
    dec.projections[0] = dec.projections[0] * 1.5;
    dec.povm.elements[0] = dec.povm.elements[0] * 1.5;
  }
  auto u = shared_universal_state(n, o.d, o.numeric);
  for (std::size_t i = 0; i < dec.projections.size(); ++i) {
    const Matrix& pm = dec.projections[i].matrix();
    double idem = max_abs(pm * pm - pm);
    tr.record(-idem, kTol, fmt::format("P({}) is not a projector (|P^2 - P| = {:.3g})", cb.words[i].str(), idem));
    double cu = commutator_norm(dec.projections[i], u->rho.op());
    tr.record(-cu, kTol, fmt::format("P({}) does not commute with the universal state ({:.3g})", cb.words[i].str(), cu));
  }
  auto pc = check_povm(dec.povm);
  tr.record(pc.min_element_eigenvalue, kTol, fmt::format("POVM element eigenvalue {:.3g}", pc.min_element_eigenvalue));
  tr.record(pc.sum_dominance_residue, kTol, fmt::format("sum of POVM elements exceeds I by {:.3g}", -pc.sum_dominance_residue));
  tr.record(-pc.completeness_residue, kTol, fmt::format("POVM completeness residue {:.3g}", pc.completeness_residue));
  return tr.finish(kTol);
}

HermitianOperator random_projector(std::size_t dim, std::size_t rank, Rng& rng) {
  Matrix u = random_unitary(dim, rng);
  Matrix cols = u.leftCols(static_cast<Eigen::Index>(rank));
  return HermitianOperator(cols * cols.adjoint());
}

CheckResult check_hn(const BatteryOptions& o) {
  Tracker tr("hayashi_nagaoka");
  Rng rng = substream(o.seed, "battery-hn");
  for (int i = 0; i < 20; ++i) {
    std::size_t dim = 2 + static_cast<std::size_t>(i % 7);
    std::uniform_int_distribution<std::size_t> rk(1, dim);
    std::vector<HermitianOperator> ps{random_projector(dim, rk(rng), rng), random_projector(dim, rk(rng), rng)};
    auto rep = check_hayashi_nagaoka(ps, square_root_measurement(ps));
    tr.record(rep.min_residue, 1e-8, fmt::format("decoder {}: residue {:.3g}", i, rep.min_residue));
  }
  return tr.finish(1e-8);
}

CheckResult check_terms(const BatteryOptions& o) {
  Tracker tr("term_bounds");
  const std::vector<double> p{0.5, 0.5};
  for (int c = 0; c < 2; ++c) {
    Rng rng = substream(o.seed, "battery-terms", static_cast<std::uint64_t>(c));
    Channel w = random_channel(2, o.d, rng);
    for (int n = 2; n <= std::min(o.n_max, 3); ++n) {
      Codebook cb = build_codebook(type_for_length(p, n), 2, o.seed);
      UniversalDecoder dec = build_decoder(cb, choose_threshold(nullptr, p, 0.1, n), o.d, o.numeric);
      for (double t : {0.25, 0.5, 0.75}) {
        auto rep = check_term_bounds(dec, w, t, o.numeric);
        for (const auto& s : rep.steps) {
          double slack = s.holds ? std::max(0.0, s.rhs - s.lhs) : s.rhs - s.lhs;
          tr.record(slack, 0.0,
                    fmt::format("channel {} n={} t={}: step {} fails ({:.6g} > {:.6g})", c, n, t, s.name, s.lhs, s.rhs));
        }
      }
    }
  }
  // Each step already applies its own relative tolerance.
  return tr.finish(0.0);
}

CheckResult check_exponent_order(const BatteryOptions& o) {
  Tracker tr("exponent_order");
  Rng rng = substream(o.seed, "battery-exponents");
  for (int c = 0; c < 5; ++c) {
    Channel w = random_channel(2, o.d, rng);
    std::vector<double> p{0.5, 0.5};
    for (double r : {0.0, 0.05, 0.1, 0.2}) {
      double u = universal_exponent(w, p, r).value;
      double h = hayashi_exponent(w, p, r).value;
      tr.record(h - u, kTol, fmt::format("channel {} R={}: Hayashi {:.9g} below universal {:.9g}", c, r, h, u));
    }
  }
  return tr.finish(kTol);
}

using CheckFn = std::function<CheckResult(const BatteryOptions&)>;

const std::vector<std::pair<std::string, CheckFn>>& registry() {
  static const std::vector<std::pair<std::string, CheckFn>> checks{
      {"isotypic", check_isotypic},
      {"universal_dominance", check_universal},
      {"conditional_dominance", check_conditional},
      {"commutation", check_commute},
      {"lemma1", check_lemma1},
      {"decoder_projectors", check_projectors},
      {"hayashi_nagaoka", check_hn},
      {"term_bounds", check_terms},
      {"exponent_order", check_exponent_order},
  };
  return checks;
}

}  // namespace

const std::vector<std::string>& battery_check_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, fn] : registry()) out.push_back(name);
    return out;
  }();
  return names;
}

std::vector<CheckResult> run_battery(const BatteryOptions& opts) {
  if (opts.d < 2) throw DomainError("battery needs d >= 2");
  if (opts.n_max < 2) throw DomainError("battery needs n_max >= 2");
  for (const auto& name : opts.only) {
    const auto& names = battery_check_names();
    if (std::find(names.begin(), names.end(), name) == names.end()) {
      throw DomainError(fmt::format("unknown check '{}'", name));
    }
  }
  std::vector<CheckResult> out;
  for (const auto& [name, fn] : registry()) {
    if (!opts.only.empty() && std::find(opts.only.begin(), opts.only.end(), name) == opts.only.end()) continue;
    out.push_back(fn(opts));
  }
  return out;
}

}  // namespace ucq
