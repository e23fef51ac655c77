#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ucq/channel.h"
#include "ucq/combinatorics.h"
#include "ucq/operator_core.h"
#include "ucq/schur_weyl.h"

namespace ucq {

// ---------------------------------------------------------------------------
// Codebook and packing certificate

/// One conditional type V of one codeword x: how many other codewords fall
/// in T_V(x), against the allowance max(|T_V(x)| · M e^{√n} / |T_p|, floor).
struct PackingEntry {
  int word = 0;
  ConditionalType v;
  std::uint64_t class_size = 0;
  std::uint64_t count = 0;
  double allowed = 0;
  bool ok() const { return static_cast<double>(count) <= allowed + 1e-12; }
};

/// Symmetrized codebook mass of `other` seen from `word`:
/// (1/|S_x|) sum_{s in S_x} p_M(s·x') against p^n(x') e^{√n}.
struct SymmetrizedMassEntry {
  int word = 0;
  int other = 0;
  double lhs = 0;
  double rhs = 0;
  bool ok() const { return lhs <= rhs * (1 + 1e-12); }
};

struct PackingCertificate {
  bool distinct = true;
  bool same_type = true;
  bool surrogate_ok = true;
  bool symmetrized_ok = true;
  std::vector<PackingEntry> entries;
  std::vector<SymmetrizedMassEntry> symmetrized;
  /// Human-readable description of the worst violation (empty when passed).
  std::string worst_violation;

  bool passed() const { return distinct && same_type && surrogate_ok && symmetrized_ok; }
};

struct PackingOptions {
  double floor_target = 1.0;
  std::uint64_t type_class_cap = kDefaultTypeClassCap;
  /// Type classes at most this large get a deterministic greedy search after
  /// random sampling fails.
  std::uint64_t exhaustive_limit = 10'000;
  /// Stabilizer subgroups up to this order are averaged over explicitly;
  /// larger ones use the equivalent orbit-counting formula.
  std::uint64_t orbit_enumeration_limit = 100'000;
};

struct Codebook {
  int n = 0;
  int k = 0;
  TypeVector type{std::vector<int>{0}};
  std::vector<Sequence> words;
  PackingCertificate certificate;

  int size() const { return static_cast<int>(words.size()); }
};

/// Recomputes every packing count from scratch for `words` (all expected in
/// T_type), judging allowances against a codebook of `target_size` words.
PackingCertificate verify_packing(const TypeVector& type, std::span<const Sequence> words,
                                  std::size_t target_size, const PackingOptions& opts = {});
PackingCertificate verify_packing(const Codebook& cb, const PackingOptions& opts = {});

/// Samples M distinct words of type p and keeps the first sample whose
/// packing certificate passes; falls back to a greedy search over small type
/// classes. Throws PackingError carrying the worst violation.
Codebook build_codebook(const TypeVector& p, int m, std::uint64_t seed, int max_attempts = 64,
                        const PackingOptions& opts = {});

// ---------------------------------------------------------------------------
// Decoder

/// {ρ_x - C ρ_{U,n} >= 0}.
HermitianOperator threshold_projection(const Sequence& x, double c, int d, const NumericConfig& cfg = {});

/// Y_i = S^{-1/2} P_i S^{-1/2} with S = sum_i P_i (inverse on the support),
/// plus abstain = I - sum_i Y_i.
struct SrmPovm {
  std::vector<HermitianOperator> elements;
  HermitianOperator abstain;
};

SrmPovm square_root_measurement(std::span<const HermitianOperator> projections, double tol = kDefaultEigTol);

struct PovmCheck {
  double min_element_eigenvalue = 0;  // over all Y_i and abstain
  double sum_dominance_residue = 0;   // min eig(I - sum Y_i)
  double completeness_residue = 0;    // max |sum Y_i + abstain - I|
  bool valid(double tol = 1e-9) const {
    return min_element_eigenvalue >= -tol && sum_dominance_residue >= -tol && completeness_residue <= tol;
  }
};

PovmCheck check_povm(const SrmPovm& povm);

struct UniversalDecoder {
  Codebook codebook;
  double threshold = 0;
  int d = 0;
  std::vector<HermitianOperator> projections;
  SrmPovm povm;
};

UniversalDecoder build_decoder(const Codebook& cb, double c, int d, const NumericConfig& cfg = {});

enum class ThresholdPolicy { kFixed, kRateOnly, kChannelHinted };

/// e^{nR} without a hint; e^{n(R + r(t*))} with r(t*) the universal exponent
/// of the hinted channel.
double choose_threshold(const Channel* hint, std::span<const double> p, double rate, int n);

// ---------------------------------------------------------------------------
// Evaluation and proof-step checks

struct ErrorReport {
  std::vector<double> per_word;
  double average = 0;
  /// (1/M) sum_x Tr W_n(x)(I - P(x)).
  double first_term = 0;
  /// sum_x Tr P(x) (1/M) sum_{x' != x} W_n(x').
  double second_term = 0;
  double decomposition_bound() const { return 2 * first_term + 4 * second_term; }
  /// Filled by check_term_bounds.
  std::optional<double> first_term_bound;
  std::optional<double> second_term_bound;
};

/// ε = (1/M) sum_i Tr W_n(x_i)(I - Y_i); abstaining counts as an error.
ErrorReport error_probability(const UniversalDecoder& dec, const Channel& w, const NumericConfig& cfg = {});

struct HayashiNagaokaReport {
  std::vector<double> residues;  // min eig of 2(I-P_i) + 4 sum_{j!=i} P_j - (I - Y_i)
  double min_residue = 0;
  bool holds(double tol = 1e-8) const { return min_residue >= -tol; }
};

HayashiNagaokaReport check_hayashi_nagaoka(std::span<const HermitianOperator> projections, const SrmPovm& povm);
HayashiNagaokaReport check_hayashi_nagaoka(const UniversalDecoder& dec);

struct BoundStep {
  std::string name;
  int word = -1;  // -1 for steps that do not depend on a codeword
  double lhs = 0;
  double rhs = 0;
  bool holds = false;
};

struct TermBoundReport {
  double t = 0;
  ErrorReport error;
  std::vector<BoundStep> steps;
  bool holds() const;
  /// Name of the first violated step, or empty.
  std::string first_failure() const;
};

/// Evaluates each link of the error-decomposition chains for the two terms
/// of the Hayashi–Nagaoka split at parameter t.
TermBoundReport check_term_bounds(const UniversalDecoder& dec, const Channel& w, double t,
                                  const NumericConfig& cfg = {});

// ---------------------------------------------------------------------------
// Experiment driver

struct ExperimentRow {
  int n = 0;
  int m = 0;
  double threshold = 0;
  double epsilon = 0;
  double rate_empirical = 0;  // -log(ε)/n
  double exponent_theory = 0;
  std::uint64_t seed = 0;
};

struct ExperimentConfig {
  std::vector<int> n_list;
  std::vector<std::uint64_t> seeds{1};
  double rate = 0;
  ThresholdPolicy policy = ThresholdPolicy::kRateOnly;
  double fixed_threshold = 1.0;
  std::optional<int> m_override;
  int max_attempts = 64;
  NumericConfig numeric;
};

struct ExperimentResult {
  std::vector<ExperimentRow> rows;
  ExponentReport theory;
  double mutual_information = 0;
  std::vector<std::string> notes;
};

/// Codebook size used at block length n: max(2, round(e^{nR - √n})), capped at |T_p|.
int experiment_codebook_size(double rate, int n, std::uint64_t type_class_size);

ExperimentResult exponent_experiment(const Channel& w, std::span<const double> p, const ExperimentConfig& cfg);

/// Optimal two-hypothesis error (1/2)(1 - (1/2)‖a - b‖_1).
double helstrom_error(const DensityOperator& a, const DensityOperator& b);

}  // namespace ucq
