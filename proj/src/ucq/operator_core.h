#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ucq/errors.h"

namespace ucq {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

inline constexpr std::size_t kDefaultDimCap = 4096;
inline constexpr double kDefaultEigTol = 1e-9;

/// Numerical knobs threaded through every operation that builds operators on
/// (C^d)^{⊗n} or makes a sign decision on an eigenvalue.
struct NumericConfig {
  std::size_t dim_cap = kDefaultDimCap;
  double eig_tol = kDefaultEigTol;
};

/// Throws CapacityError when `dim` exceeds `cap`.
void require_dim_within_cap(std::size_t dim, std::size_t cap);

/// Returns base^exp, throwing CapacityError if the result exceeds `cap`.
std::size_t checked_power(std::size_t base, int exp, std::size_t cap);

struct Spectrum {
  Eigen::VectorXd values;  // ascending
  Matrix vectors;          // columns are eigenvectors
};

/// Dense Hermitian matrix. The constructor symmetrizes its argument as
/// (A + A†)/2, so the stored entries are Hermitian to machine precision.
class HermitianOperator {
 public:
  HermitianOperator() = default;
  explicit HermitianOperator(const Matrix& m);

  static HermitianOperator identity(std::size_t dim);
  static HermitianOperator zero(std::size_t dim);
  static HermitianOperator diagonal(std::span<const double> diag);
  /// Rank-one projector |v><v| / <v|v>.
  static HermitianOperator projector_onto(const Eigen::VectorXcd& v);

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  Complex operator()(std::size_t i, std::size_t j) const {
    return m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

  double trace() const { return m_.trace().real(); }
  Spectrum spectrum() const;
  Eigen::VectorXd eigenvalues() const;
  double min_eigenvalue() const;
  double max_eigenvalue() const;

  HermitianOperator operator+(const HermitianOperator& o) const;
  HermitianOperator operator-(const HermitianOperator& o) const;
  HermitianOperator operator*(double s) const;
  HermitianOperator& operator+=(const HermitianOperator& o);

  bool operator==(const HermitianOperator& o) const;

 private:
  Matrix m_;
};

inline HermitianOperator operator*(double s, const HermitianOperator& a) { return a * s; }

/// Unit-trace positive semidefinite operator.
class DensityOperator {
 public:
  /// Throws DomainError naming the violated invariant (eigenvalue >= -tol,
  /// trace = 1 within tol).
  explicit DensityOperator(HermitianOperator op, double tol = kDefaultEigTol);

  static DensityOperator maximally_mixed(std::size_t dim);
  static DensityOperator pure(const Eigen::VectorXcd& v);

  const HermitianOperator& op() const { return op_; }
  const Matrix& matrix() const { return op_.matrix(); }
  std::size_t dim() const { return op_.dim(); }

 private:
  HermitianOperator op_;
};

/// Element of S_n acting on {0, ..., n-1}; `image()[i]` is s(i).
class Permutation {
 public:
  explicit Permutation(std::vector<int> image);

  static Permutation identity(int n);
  static Permutation transposition(int n, int a, int b);
  /// All n! permutations in lexicographic order of their image arrays.
  static std::vector<Permutation> all(int n);

  int size() const { return static_cast<int>(image_.size()); }
  int operator()(int i) const { return image_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& image() const { return image_; }

  Permutation inverse() const;
  /// Cycle lengths sorted in non-increasing order (a partition of n).
  std::vector<int> cycle_type() const;

  bool operator==(const Permutation&) const = default;

 private:
  std::vector<int> image_;
};

/// (s ∘ t)(i) = s(t(i)).
Permutation compose(const Permutation& s, const Permutation& t);

/// Kronecker product; throws CapacityError if the result exceeds cfg.dim_cap.
HermitianOperator tensor(const HermitianOperator& a, const HermitianOperator& b,
                         const NumericConfig& cfg = {});
HermitianOperator tensor_all(std::span<const HermitianOperator> factors,
                             const NumericConfig& cfg = {});

/// Basis-index map of V_s on (C^d)^{⊗n}: V_s |e> = |map[e]>. Tensor factor 0
/// is the most significant digit, and the factor at position i is moved to
/// position s(i), so V_s (A_0 ⊗ ... ⊗ A_{n-1}) V_s† has A_{s^{-1}(j)} at j.
std::vector<std::size_t> permutation_index_map(const Permutation& s, int d,
                                               const NumericConfig& cfg = {});

/// The 0/1 unitary V_s. Satisfies V_s V_t = V_{s∘t}.
Matrix permutation_unitary(const Permutation& s, int d, const NumericConfig& cfg = {});

/// V_s a V_s† computed by index relabelling.
HermitianOperator conjugate_by_permutation(const HermitianOperator& a, const Permutation& s, int d,
                                           const NumericConfig& cfg = {});

/// Applies f to every eigenvalue: V f(Λ) V†.
template <typename F>
HermitianOperator apply_spectral(const Spectrum& sp, F&& f) {
  Eigen::VectorXd mapped(sp.values.size());
  for (Eigen::Index i = 0; i < sp.values.size(); ++i) {
    mapped(i) = f(sp.values(i));
  }
  return HermitianOperator(sp.vectors * mapped.asDiagonal() * sp.vectors.adjoint());
}

/// {a >= 0}: projector onto eigenvectors with eigenvalue >= -tol.
HermitianOperator positive_part_projector(const HermitianOperator& a, double tol = kDefaultEigTol);

/// Projector onto eigenvectors with eigenvalue > tol.
HermitianOperator support_projector(const HermitianOperator& a, double tol = kDefaultEigTol);

/// Pseudo-inverse square root on the support of a PSD operator. Throws
/// DomainError if an eigenvalue is below -tol.
HermitianOperator inv_sqrt_on_support(const HermitianOperator& a, double tol = kDefaultEigTol);

/// a^exponent on the support of a PSD operator. For exponents below 1,
/// eigenvalues <= tol are treated as zero and map to 0 (including negative
/// exponents); for exponents >= 1 only non-positive eigenvalues map to 0.
HermitianOperator pseudo_power(const HermitianOperator& a, double exponent,
                               double tol = kDefaultEigTol);

/// Minimum eigenvalue of b - a; non-negative iff a <= b in the Löwner order.
double dominance_residue(const HermitianOperator& a, const HermitianOperator& b);

/// True iff min-eigenvalue(b - a) >= -tol. Throws DomainError on a size mismatch.
bool is_psd_dominated(const HermitianOperator& a, const HermitianOperator& b,
                      double tol = kDefaultEigTol);

/// Re Tr(a b).
double trace_product(const HermitianOperator& a, const HermitianOperator& b);

/// max |x_ij|.
double max_abs(const Matrix& m);
double commutator_norm(const HermitianOperator& a, const HermitianOperator& b);
/// max |a_ij - conj(a_ji)|.
double hermiticity_residue(const Matrix& m);

/// Schatten 1-norm of a Hermitian operator.
double trace_norm(const HermitianOperator& a);

/// FNV-1a over the raw bytes of the entries; stable digest for equality
/// checks across runs.
std::uint64_t fingerprint(std::span<const HermitianOperator> ops);

}  // namespace ucq
