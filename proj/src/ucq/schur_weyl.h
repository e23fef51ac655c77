#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "ucq/channel.h"
#include "ucq/combinatorics.h"
#include "ucq/operator_core.h"

namespace ucq {

/// χ_λ(μ) by the Murnaghan–Nakayama rule. `cycle_type` is any ordering of
/// the cycle lengths of a permutation in S_n with n = |λ|.
std::int64_t sn_character(const YoungDiagram& lambda, std::span<const int> cycle_type);

/// Dimension of the S_n irrep labelled by λ (hook-length formula).
std::uint64_t dim_irrep_sn(const YoungDiagram& lambda);

/// Dimension of the SU(d) irrep labelled by λ (Weyl dimension formula).
/// Zero when λ has more than d non-zero rows.
std::uint64_t dim_irrep_su(const YoungDiagram& lambda, int d);

/// Orthogonal projector onto the λ-isotypic subspace U_λ ⊗ V_λ of (C^d)^{⊗n}.
struct IsotypicComponent {
  YoungDiagram diagram;
  HermitianOperator projector;
  std::uint64_t dim_u = 0;
  std::uint64_t dim_v = 0;
};

/// Largest value of n!·d^n accepted by the character-averaging projector build.
inline constexpr std::uint64_t kMaxProjectorWork = 500'000'000;

/// I_λ = (dim V_λ / n!) sum_{s in S_n} χ_λ(s) V_s.
IsotypicComponent isotypic_projector(const YoungDiagram& lambda, int d, const NumericConfig& cfg = {});

/// ρ_{U,n} = (1/|Y_n^d|) sum_λ I_λ / (dim U_λ dim V_λ).
struct UniversalState {
  int n = 0;
  int d = 0;
  DensityOperator rho;
  std::vector<IsotypicComponent> components;
};

UniversalState universal_state(int n, int d, const NumericConfig& cfg = {});

/// Memoized universal_state; the cap is checked on every call.
std::shared_ptr<const UniversalState> shared_universal_state(int n, int d, const NumericConfig& cfg = {});

/// ρ_x = V_s (ρ_{U,m_1} ⊗ ... ⊗ ρ_{U,m_k}) V_s† with x = s·sorted(x).
struct ConditionalTypeState {
  Sequence x;
  DensityOperator rho;
};

ConditionalTypeState conditional_type_state(const Sequence& x, int d, const NumericConfig& cfg = {});

/// Same construction with a caller-chosen s; throws DomainError unless
/// s·sorted(x) = x.
DensityOperator conditional_type_state_with(const Sequence& x, const Permutation& s, int d,
                                            const NumericConfig& cfg = {});

/// Minimum eigenvalue of c·ρ_{U,n} - ρ^{⊗n} for the literal constant
/// n^{d(d-1)/2}|Y_n^d| and the corrected (n+1)^{d(d-1)/2}|Y_n^d|.
struct DominanceReport {
  double literal_constant = 0;
  double literal_residue = 0;
  double corrected_constant = 0;
  double corrected_residue = 0;
  /// max_λ dim U_λ against the literal bound n^{d(d-1)/2}.
  std::uint64_t max_dim_u = 0;
  double literal_dim_bound = 0;
  bool literal_dim_bound_holds = false;
  bool passed = false;
};

DominanceReport check_universal_dominance(const DensityOperator& rho, int n, const NumericConfig& cfg = {},
                                          double tol = 1e-9);

/// Minimum eigenvalue of c·ρ_x - W_n(x) for the literal constant
/// n^{kd(d-1)/2}|Y_n^d|^k, its (n+1) form, and the per-block constant
/// prod_a (m_a+1)^{d(d-1)/2}|Y_{m_a}^d|. Passes on the per-block constant.
struct ConditionalDominanceReport {
  double literal_constant = 0;
  double literal_residue = 0;
  double corrected_constant = 0;
  double corrected_residue = 0;
  double block_constant = 0;
  double block_residue = 0;
  bool passed = false;
};

ConditionalDominanceReport check_conditional_dominance(const Channel& w, const Sequence& x,
                                                       const NumericConfig& cfg = {}, double tol = 1e-9);

/// ‖[ρ_x, ρ_{U,n}]‖_max.
double check_commutation(const Sequence& x, int d, const NumericConfig& cfg = {});

/// (n+1)^{d(d-1)/2} |Y_n^d|: constant c with ρ^{⊗n} <= c ρ_{U,n} for every ρ.
double universal_dominance_constant(int n, int d);
/// n^{d(d-1)/2} |Y_n^d| as written in the literal bound.
double literal_dominance_constant(int n, int d);

}  // namespace ucq
