#include "ucq/cli.h"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "ucq/channel.h"
#include "ucq/io.h"
#include "ucq/schur_weyl.h"
#include "ucq/universal_code.h"
#include "ucq/verify_battery.h"

namespace ucq {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    auto b = item.find_first_not_of(" \t");
    auto e = item.find_last_not_of(" \t");
    out.push_back(b == std::string::npos ? std::string() : item.substr(b, e - b + 1));
  }
  return out;
}

double parse_number(const std::string& s) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw ValidationError(fmt::format("'{}' is not a number", s));
  }
  return v;
}

int parse_int(const std::string& s) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw ValidationError(fmt::format("'{}' is not an integer", s));
  return v;
}

std::size_t dim_cap_from_env() {
  const char* env = std::getenv("UCQ_DIM_CAP");
  if (env == nullptr || *env == '\0') return kDefaultDimCap;
  std::string s(env);
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || v == 0) {
    throw ValidationError(fmt::format("UCQ_DIM_CAP='{}' is not a positive integer", s));
  }
  return v;
}

ThresholdPolicy parse_policy(const std::string& s) {
  if (s == "fixed") return ThresholdPolicy::kFixed;
  if (s == "rate-only") return ThresholdPolicy::kRateOnly;
  if (s == "channel-hinted") return ThresholdPolicy::kChannelHinted;
  throw ValidationError(fmt::format("unknown threshold policy '{}'", s));
}

/// Writes to `path`, or to `out` when the path is empty or "-".
void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    write_text_file(path, text);
  }
}

struct Globals {
  std::size_t dim_cap = kDefaultDimCap;
  double eig_tol = kDefaultEigTol;
  bool verbose = false;
  bool bits = false;

  NumericConfig numeric() const { return {dim_cap, eig_tol}; }
  double unit() const { return bits ? std::log(2.0) : 1.0; }
};

struct DecomposeArgs {
  int n = 2;
  int d = 2;
  std::string out;
  std::string format = "csv";
};

int cmd_decompose(const DecomposeArgs& a, const Globals& g, std::ostream& out) {
  if (a.n < 1 || a.d < 1) throw ValidationError("n and d must be positive");
  auto u = universal_state(a.n, a.d, g.numeric());
  const std::size_t dim = u.rho.dim();
  HermitianOperator sum = HermitianOperator::zero(dim);
  double orth = 0;
  for (std::size_t i = 0; i < u.components.size(); ++i) {
    sum += u.components[i].projector;
    for (std::size_t j = 0; j < u.components.size(); ++j) {
      Matrix prod = u.components[i].projector.matrix() * u.components[j].projector.matrix();
      orth = std::max(orth, i == j ? max_abs(prod - u.components[i].projector.matrix()) : max_abs(prod));
    }
  }
  double completeness = max_abs((sum - HermitianOperator::identity(dim)).matrix());

  std::string text;
  if (a.format == "json") {
    Json rows = Json::array();
    for (const auto& c : u.components) {
      double tr = c.projector.trace();
      rows.push_back({{"lambda", c.diagram.rows()}, {"dim_u", c.dim_u}, {"dim_v", c.dim_v}, {"trace", tr},
                      {"trace_residue", std::abs(tr - static_cast<double>(c.dim_u * c.dim_v))}});
    }
    Json doc = {{"n", a.n}, {"d", a.d}, {"dimension", dim}, {"components", std::move(rows)},
                {"completeness_residue", completeness}, {"orthogonality_residue", orth}};
    text = doc.dump(2) + "\n";
  } else {
    text = "lambda,dim_u,dim_v,trace,trace_residue\r\n";
    for (const auto& c : u.components) {
      double tr = c.projector.trace();
      text += fmt::format("{},{},{},{},{}\r\n", csv_field(c.diagram.str()), c.dim_u, c.dim_v, format_double(tr),
                          format_double(std::abs(tr - static_cast<double>(c.dim_u * c.dim_v))));
    }
  }
  emit(a.out, text, out);
  if (!a.out.empty() && a.out != "-") {
    for (const auto& c : u.components) {
      out << fmt::format("{:<12} dim_U={:<6} dim_V={:<6}\n", c.diagram.str(), c.dim_u, c.dim_v);
    }
  }
  if (g.verbose || (!a.out.empty() && a.out != "-")) {
    out << fmt::format("completeness residue {:.3g}, orthogonality residue {:.3g}\n", completeness, orth);
  }
  return completeness <= 1e-9 && orth <= 1e-9 ? kExitOk : kExitVerification;
}

struct CodebookArgs {
  std::string type;
  std::string p;
  int n = 0;
  int m = 2;
  std::uint64_t seed = 1;
  int max_attempts = 64;
  std::string out;
};

TypeVector resolve_type(const std::string& type, const std::string& p, int n) {
  if (!type.empty()) {
    std::vector<int> counts;
    for (const auto& s : split(type, ',')) counts.push_back(parse_int(s));
    try {
      return TypeVector(counts);
    } catch (const DomainError& e) {
      throw ValidationError(e.what());
    }
  }
  if (p.empty() || n < 1) throw ValidationError("give either --type or both --p and --n");
  return type_for_length(parse_weights(p), n);
}

int cmd_codebook(const CodebookArgs& a, std::ostream& out) {
  TypeVector type = resolve_type(a.type, a.p, a.n);
  if (a.m < 1) throw ValidationError("--M must be at least 1");
  if (static_cast<std::uint64_t>(a.m) > type_class_size(type)) {
    throw ValidationError(fmt::format("--M {} exceeds the type class size {}", a.m, type_class_size(type)));
  }
  Codebook cb = build_codebook(type, a.m, a.seed, a.max_attempts);
  emit(a.out, codebook_to_json(cb).dump(2) + "\n", out);
  return kExitOk;
}

struct SimulateArgs {
  std::string channel;
  std::string p;
  double rate = 0;
  std::string n_list = "2,3,4";
  int m = 0;
  std::string policy = "rate-only";
  double c = 1.0;
  std::vector<std::uint64_t> seeds{1};
  int max_attempts = 64;
  std::string out;
  std::string summary;
  std::string format = "csv";
};

std::vector<double> weights_or_uniform(const std::string& p, int k) {
  if (!p.empty()) return parse_weights(p);
  return std::vector<double>(static_cast<std::size_t>(k), 1.0 / k);
}

int cmd_simulate(const SimulateArgs& a, const Globals& g, std::ostream& out) {
  if (a.rate < 0) throw ValidationError("--R must be non-negative");
  Channel w = load_channel(a.channel);
  auto p = weights_or_uniform(a.p, w.k());
  try {
    validate_distribution(p, w.k());
  } catch (const DomainError& e) {
    throw ValidationError(e.what());
  }
  ExperimentConfig cfg;
  cfg.n_list = parse_int_list(a.n_list);
  cfg.seeds = a.seeds;
  cfg.rate = a.rate;
  cfg.policy = parse_policy(a.policy);
  cfg.fixed_threshold = a.c;
  if (cfg.policy == ThresholdPolicy::kFixed && !(a.c > 0)) throw ValidationError("--C must be positive");
  if (a.m > 0) cfg.m_override = a.m;
  cfg.max_attempts = a.max_attempts;
  cfg.numeric = g.numeric();
  for (int n : cfg.n_list) {
    if (n < 1) throw ValidationError("block lengths must be positive");
  }
  ExperimentResult res = exponent_experiment(w, p, cfg);
  Json summary = experiment_summary(res, a.rate, g.unit());
  if (a.format == "json") {
    emit(a.out, summary.dump(2) + "\n", out);
  } else {
    std::ostringstream csv;
    write_experiment_csv(csv, res.rows, g.unit());
    emit(a.out, csv.str(), out);
  }
  if (!a.summary.empty()) write_text_file(a.summary, summary.dump(2) + "\n");
  if (g.verbose) {
    for (const auto& note : res.notes) out << "# " << note << "\n";
  }
  return kExitOk;
}

struct ExponentArgs {
  std::string channel;
  std::string p;
  double r_max = 1.0;
  int r_steps = 21;
  int grid_points = 201;
  std::string out;
};

int cmd_exponent(const ExponentArgs& a, const Globals& g, std::ostream& out) {
  if (a.r_max < 0) throw ValidationError("--r-max must be non-negative");
  if (a.r_steps < 1) throw ValidationError("--r-steps must be positive");
  if (a.grid_points < 2) throw ValidationError("--grid-points must be at least 2");
  Channel w = load_channel(a.channel);
  auto p = weights_or_uniform(a.p, w.k());
  try {
    validate_distribution(p, w.k());
  } catch (const DomainError& e) {
    throw ValidationError(e.what());
  }
  ExponentOptions opts;
  opts.grid_points = a.grid_points;
  const double unit = g.unit();
  std::string text = "R,universal,hayashi,t_star_universal,t_star_hayashi\r\n";
  bool ordered = true;
  for (int i = 0; i < a.r_steps; ++i) {
    double r = a.r_steps == 1 ? a.r_max : a.r_max * i / (a.r_steps - 1);
    auto u = universal_exponent(w, p, r, opts);
    auto h = hayashi_exponent(w, p, r, opts);
    ordered = ordered && h.value >= u.value - 1e-9;
    text += fmt::format("{},{},{},{},{}\r\n", format_double(r / unit), format_double(u.value / unit),
                        format_double(h.value / unit), format_double(u.t_star), format_double(h.t_star));
  }
  emit(a.out, text, out);
  return ordered ? kExitOk : kExitVerification;
}

struct VerifyArgs {
  int d = 2;
  int n_max = 4;
  std::uint64_t seed = 1;
  std::vector<std::string> only;
  bool inject_fault = false;
};

int cmd_verify(const VerifyArgs& a, const Globals& g, std::ostream& out, std::ostream& err) {
  BatteryOptions opts;
  opts.d = a.d;
  opts.n_max = a.n_max;
  opts.seed = a.seed;
  opts.only = a.only;
  opts.inject_fault = a.inject_fault;
  opts.numeric = g.numeric();
  std::vector<CheckResult> results;
  try {
    results = run_battery(opts);
  } catch (const DomainError& e) {
    throw ValidationError(e.what());
  }
  bool all = true;
  for (const auto& r : results) {
    out << fmt::format("{:<24} {:<4} cases={:<5} worst_slack={:.3e}\n", r.name, r.passed ? "PASS" : "FAIL", r.cases,
                       r.worst_slack);
    if (!r.passed) {
      all = false;
      err << fmt::format("invariant violated: {}: {}\n", r.name, r.detail);
    } else if (g.verbose && !r.detail.empty()) {
      out << "  " << r.detail << "\n";
    }
  }
  return all ? kExitOk : kExitVerification;
}

}  // namespace

std::vector<double> parse_weights(const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split(text, ',')) {
    auto slash = item.find('/');
    double v = 0;
    if (slash == std::string::npos) {
      v = parse_number(item);
    } else {
      double num = parse_number(item.substr(0, slash));
      double den = parse_number(item.substr(slash + 1));
      if (den == 0) throw ValidationError(fmt::format("zero denominator in '{}'", item));
      v = num / den;
    }
    if (v < 0) throw ValidationError(fmt::format("negative weight '{}'", item));
    out.push_back(v);
  }
  if (out.empty()) throw ValidationError("empty weight list");
  double s = 0;
  for (double v : out) s += v;
  if (std::abs(s - 1.0) > 1e-9) throw ValidationError(fmt::format("weights sum to {}, not 1", s));
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (const auto& item : split(text, ',')) {
    auto dash = item.find('-', 1);
    if (dash == std::string::npos) {
      out.push_back(parse_int(item));
    } else {
      int lo = parse_int(item.substr(0, dash));
      int hi = parse_int(item.substr(dash + 1));
      if (hi < lo) throw ValidationError(fmt::format("empty range '{}'", item));
      for (int v = lo; v <= hi; ++v) out.push_back(v);
    }
  }
  if (out.empty()) throw ValidationError("empty integer list");
  return out;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Universal classical-quantum channel coding toolkit"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML/INI configuration file; command-line flags take precedence");

  Globals g;
  try {
    g.dim_cap = dim_cap_from_env();
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
  app.add_option("--dim-cap", g.dim_cap, "Largest Hilbert-space dimension (default from UCQ_DIM_CAP or 4096)")
      ->check(CLI::PositiveNumber);
  app.add_option("--eig-tol", g.eig_tol, "Eigenvalue sign tolerance")->check(CLI::PositiveNumber);
  app.add_flag("-v,--verbose", g.verbose, "Print residues and notes");
  app.add_flag("--bits", g.bits, "Report rates and exponents in bits instead of nats");

  DecomposeArgs dec;
  auto* sdec = app.add_subcommand("decompose", "Isotypic decomposition of (C^d)^n");
  sdec->add_option("--n", dec.n, "Number of tensor factors")->required();
  sdec->add_option("--d", dec.d, "Local dimension")->required();
  sdec->add_option("-o,--out", dec.out, "Output path (stdout if omitted)");
  sdec->add_option("--format", dec.format)->check(CLI::IsMember({"csv", "json"}));

  CodebookArgs cba;
  auto* scb = app.add_subcommand("codebook", "Build a packing codebook of one type");
  scb->add_option("--type", cba.type, "Type counts, e.g. 2,2");
  scb->add_option("--p", cba.p, "Input distribution, e.g. 1/2,1/2 (with --n)");
  scb->add_option("--n", cba.n, "Block length (with --p)");
  scb->add_option("--M", cba.m, "Number of codewords");
  scb->add_option("--seed", cba.seed);
  scb->add_option("--max-attempts", cba.max_attempts)->check(CLI::PositiveNumber);
  scb->add_option("-o,--out", cba.out, "Output JSON path (stdout if omitted)");

  SimulateArgs sim;
  auto* ssim = app.add_subcommand("simulate", "Error probability over block lengths");
  ssim->add_option("--channel", sim.channel, "Channel JSON file")->required();
  ssim->add_option("--p", sim.p, "Input distribution (uniform if omitted)");
  ssim->add_option("--R", sim.rate, "Rate in nats");
  ssim->add_option("--n", sim.n_list, "Block lengths, e.g. 2,3,4 or 2-5");
  ssim->add_option("--M", sim.m, "Codebook size override");
  ssim->add_option("--policy", sim.policy)->check(CLI::IsMember({"fixed", "rate-only", "channel-hinted"}));
  ssim->add_option("--C", sim.c, "Threshold for --policy fixed");
  ssim->add_option("--seed", sim.seeds, "One or more seeds");
  ssim->add_option("--max-attempts", sim.max_attempts)->check(CLI::PositiveNumber);
  ssim->add_option("-o,--out", sim.out, "Output path (stdout if omitted)");
  ssim->add_option("--summary", sim.summary, "JSON summary path");
  ssim->add_option("--format", sim.format)->check(CLI::IsMember({"csv", "json"}));

  ExponentArgs ex;
  auto* sex = app.add_subcommand("exponent", "Universal and Hayashi exponents over a rate grid");
  sex->add_option("--channel", ex.channel, "Channel JSON file")->required();
  sex->add_option("--p", ex.p, "Input distribution (uniform if omitted)");
  sex->add_option("--r-max", ex.r_max, "Largest rate in nats");
  sex->add_option("--r-steps", ex.r_steps, "Number of rates from 0 to --r-max");
  sex->add_option("--grid-points", ex.grid_points, "t grid density");
  sex->add_option("-o,--out", ex.out, "Output CSV path (stdout if omitted)");

  VerifyArgs ver;
  auto* sver = app.add_subcommand("verify", "Run the invariant battery");
  sver->add_option("--d", ver.d);
  sver->add_option("--n-max", ver.n_max);
  sver->add_option("--seed", ver.seed);
  sver->add_option("--only", ver.only, "Run only these checks")->check(CLI::IsMember(battery_check_names()));
  sver->add_flag("--inject-fault", ver.inject_fault, "Corrupt a decoder projector (test hook)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitInput;
  }

  try {
    if (*sdec) return cmd_decompose(dec, g, out);
    if (*scb) return cmd_codebook(cba, out);
    if (*ssim) return cmd_simulate(sim, g, out);
    if (*sex) return cmd_exponent(ex, g, out);
    if (*sver) return cmd_verify(ver, g, out, err);
  } catch (const CapacityError& e) {
    err << "capacity exceeded: " << e.what() << "\n";
    return kExitCapacity;
  } catch (const PackingError& e) {
    err << "packing failure: " << e.what() << "\n";
    return kExitPacking;
  } catch (const ValidationError& e) {
    err << "invalid input: " << e.what() << "\n";
    return kExitInput;
  } catch (const DomainError& e) {
    err << "invalid input: " << e.what() << "\n";
    return kExitInput;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitVerification;
  }
  return kExitInput;
}

}  // namespace ucq
