#pragma once

#include <functional>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "ucq/combinatorics.h"
#include "ucq/operator_core.h"

namespace ucq {

/// Classical-quantum channel a ↦ W(a) for a in the 1-based alphabet {1..k}.
class Channel {
 public:
  explicit Channel(std::vector<DensityOperator> states);

  int k() const { return static_cast<int>(states_.size()); }
  int d() const { return static_cast<int>(states_.front().dim()); }
  /// W(a), 1-based.
  const DensityOperator& output(int symbol) const;
  const std::vector<DensityOperator>& states() const { return states_; }

 private:
  std::vector<DensityOperator> states_;
};

/// Distribution on the input alphabet; validated to sum to 1 within 1e-9.
using Distribution = std::vector<double>;

void validate_distribution(std::span<const double> p, int k);

/// W_n(x) = W(x_1) ⊗ ... ⊗ W(x_n).
DensityOperator channel_output(const Channel& w, const Sequence& x, const NumericConfig& cfg = {});

/// W_p = sum_a p_a W(a).
DensityOperator average_state(const Channel& w, std::span<const double> p);

/// Holevo quantity sum_a p_a Tr W(a)(log W(a) - log W_p), in nats.
double mutual_information(const Channel& w, std::span<const double> p, double tol = kDefaultEigTol);

inline constexpr double kDefaultTGap = 1e-6;

/// phi(t) = -(1-t) log Tr (sum_a p_a W(a)^{1-t})^{1/(1-t)} for 0 <= t <= 1 - t_gap.
double phi(const Channel& w, std::span<const double> p, double t, double t_gap = kDefaultTGap,
           double tol = kDefaultEigTol);

/// -log sum_a p_a Tr[W(a)^{1-t} W_p^t] - tR, defined on 0 <= t <= 1.
double hayashi_objective(const Channel& w, std::span<const double> p, double rate, double t,
                         double tol = kDefaultEigTol);

/// (phi(t) - tR) / (1 + t).
double universal_objective(const Channel& w, std::span<const double> p, double rate, double t,
                           double t_gap = kDefaultTGap);

struct ExponentOptions {
  int grid_points = 201;
  double t_gap = kDefaultTGap;
  double refine_tol = 1e-6;
};

struct ExponentReport {
  double rate = 0;
  double t_star = 0;
  double value = 0;
  std::vector<std::pair<double, double>> curve;  // (t, objective) grid samples
  bool positive() const { return value > 0; }
};

/// Maximizes a 1-D objective over [lo, hi]: uniform grid followed by
/// golden-section refinement in the bracket around the best grid point.
ExponentReport maximize_objective(const std::function<double(double)>& f, double lo, double hi,
                                  const ExponentOptions& opts);

/// max over 0 <= t <= 1 - t_gap of (phi(t) - tR)/(1+t).
ExponentReport universal_exponent(const Channel& w, std::span<const double> p, double rate,
                                  const ExponentOptions& opts = {});

/// max over 0 <= t <= 1 of -log sum_a p_a Tr[W(a)^{1-t} W_p^t] - tR.
ExponentReport hayashi_exponent(const Channel& w, std::span<const double> p, double rate,
                                const ExponentOptions& opts = {});

/// (Tr X^{1/(1-t)})^{1-t}, which equals max over densities σ of Tr X σ^t.
double lemma1_rhs(const HermitianOperator& x, double t, double tol = kDefaultEigTol);

/// The maximizer X^{1/(1-t)} / Tr X^{1/(1-t)}.
DensityOperator lemma1_maximizer(const HermitianOperator& x, double t, double tol = kDefaultEigTol);

/// Tr X σ^t with σ^t taken on the support of σ.
double trace_with_power(const HermitianOperator& x, const HermitianOperator& sigma, double t,
                        double tol = kDefaultEigTol);

/// sum_a p_a W(a)^{1-t}.
HermitianOperator powered_mixture(const Channel& w, std::span<const double> p, double t,
                                  double tol = kDefaultEigTol);

struct ExponentChainReport {
  double r_t = 0;          // (phi(t) - tR)/(1+t)
  double lhs = 0;          // e^{t(R + r(t))} max_σ Tr(sum p W^{1-t}) σ^t
  double middle = 0;       // e^{t(R + r(t))} Tr(sum p W^{1-t}) W_p^t
  double rhs = 0;          // e^{tR} Tr(sum p W^{1-t}) W_p^t
  bool applicable = false;
  bool holds = false;
};

/// Checks e^{t(R+r)} max_σ Tr(sum p W^{1-t})σ^t >= e^{tR} Tr(sum p W^{1-t}) W_p^t.
/// The inequality relies on e^{t r(t)} >= 1, so it is only guaranteed where
/// r(t) >= 0; `applicable` records that premise.
ExponentChainReport exponent_chain_check(const Channel& w, std::span<const double> p, double rate,
                                         double t, double slack = 1e-9);

/// Random channel with k independent random density outputs on C^d.
Channel random_channel(int k, int d, std::mt19937_64& rng, bool pure = false);

}  // namespace ucq
