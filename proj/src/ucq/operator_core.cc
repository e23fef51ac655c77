#include "ucq/operator_core.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>

#include <fmt/format.h>

namespace ucq {

void require_dim_within_cap(std::size_t dim, std::size_t cap) {
  if (dim > cap) {
    throw CapacityError(fmt::format("dimension {} exceeds cap {}", dim, cap));
  }
}

std::size_t checked_power(std::size_t base, int exp, std::size_t cap) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) {
    if (base != 0 && r > cap / base) {
      throw CapacityError(fmt::format("dimension {}^{} exceeds cap {}", base, exp, cap));
    }
    r *= base;
  }
  require_dim_within_cap(r, cap);
  return r;
}

HermitianOperator::HermitianOperator(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw DomainError(fmt::format("operator must be square, got {}x{}", m.rows(), m.cols()));
  }
  m_ = (m + m.adjoint()) * 0.5;
}

HermitianOperator HermitianOperator::identity(std::size_t dim) {
  auto n = static_cast<Eigen::Index>(dim);
  return HermitianOperator(Matrix::Identity(n, n));
}

HermitianOperator HermitianOperator::zero(std::size_t dim) {
  auto n = static_cast<Eigen::Index>(dim);
  return HermitianOperator(Matrix::Zero(n, n));
}

HermitianOperator HermitianOperator::diagonal(std::span<const double> diag) {
  auto n = static_cast<Eigen::Index>(diag.size());
  Matrix m = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    m(i, i) = diag[static_cast<std::size_t>(i)];
  }
  return HermitianOperator(m);
}

HermitianOperator HermitianOperator::projector_onto(const Eigen::VectorXcd& v) {
  double nrm = v.squaredNorm();
  if (nrm <= 0) {
    throw DomainError("cannot project onto the zero vector");
  }
  return HermitianOperator(v * v.adjoint() / nrm);
}

Spectrum HermitianOperator::spectrum() const {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m_);
  if (solver.info() != Eigen::Success) {
    throw NumericError(fmt::format("eigendecomposition failed (dim {})", dim()));
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

Eigen::VectorXd HermitianOperator::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m_, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericError(fmt::format("eigendecomposition failed (dim {})", dim()));
  }
  return solver.eigenvalues();
}

double HermitianOperator::min_eigenvalue() const {
  if (dim() == 0) return 0.0;
  return eigenvalues()(0);
}

double HermitianOperator::max_eigenvalue() const {
  if (dim() == 0) return 0.0;
  auto ev = eigenvalues();
  return ev(ev.size() - 1);
}

HermitianOperator HermitianOperator::operator+(const HermitianOperator& o) const {
  if (dim() != o.dim()) throw DomainError("dimension mismatch in operator sum");
  return HermitianOperator(m_ + o.m_);
}

HermitianOperator HermitianOperator::operator-(const HermitianOperator& o) const {
  if (dim() != o.dim()) throw DomainError("dimension mismatch in operator difference");
  return HermitianOperator(m_ - o.m_);
}

HermitianOperator HermitianOperator::operator*(double s) const { return HermitianOperator(m_ * s); }

HermitianOperator& HermitianOperator::operator+=(const HermitianOperator& o) {
  if (dim() != o.dim()) throw DomainError("dimension mismatch in operator sum");
  m_ += o.m_;
  return *this;
}

bool HermitianOperator::operator==(const HermitianOperator& o) const {
  return dim() == o.dim() && m_ == o.m_;
}

DensityOperator::DensityOperator(HermitianOperator op, double tol) : op_(std::move(op)) {
  if (op_.dim() == 0) {
    throw DomainError("density operator must have positive dimension");
  }
  double tr = op_.trace();
  if (std::abs(tr - 1.0) > tol) {
    throw DomainError(fmt::format("trace {:.12g} differs from 1", tr));
  }
  double lo = op_.min_eigenvalue();
  if (lo < -tol) {
    throw DomainError(fmt::format("negative eigenvalue {:.6g}", lo));
  }
}

DensityOperator DensityOperator::maximally_mixed(std::size_t dim) {
  return DensityOperator(HermitianOperator::identity(dim) * (1.0 / static_cast<double>(dim)));
}

DensityOperator DensityOperator::pure(const Eigen::VectorXcd& v) {
  return DensityOperator(HermitianOperator::projector_onto(v));
}

Permutation::Permutation(std::vector<int> image) : image_(std::move(image)) {
  std::vector<char> seen(image_.size(), 0);
  for (int v : image_) {
    if (v < 0 || static_cast<std::size_t>(v) >= image_.size() || seen[static_cast<std::size_t>(v)]) {
      throw DomainError("permutation image is not a bijection");
    }
    seen[static_cast<std::size_t>(v)] = 1;
  }
}

Permutation Permutation::identity(int n) {
  std::vector<int> img(static_cast<std::size_t>(n));
  std::iota(img.begin(), img.end(), 0);
  return Permutation(std::move(img));
}

Permutation Permutation::transposition(int n, int a, int b) {
  auto img = identity(n).image_;
  std::swap(img.at(static_cast<std::size_t>(a)), img.at(static_cast<std::size_t>(b)));
  return Permutation(std::move(img));
}

std::vector<Permutation> Permutation::all(int n) {
  std::vector<Permutation> out;
  auto img = identity(n).image_;
  do {
    out.emplace_back(img);
  } while (std::next_permutation(img.begin(), img.end()));
  return out;
}

Permutation Permutation::inverse() const {
  std::vector<int> inv(image_.size());
  for (std::size_t i = 0; i < image_.size(); ++i) {
    inv[static_cast<std::size_t>(image_[i])] = static_cast<int>(i);
  }
  return Permutation(std::move(inv));
}

std::vector<int> Permutation::cycle_type() const {
  std::vector<int> lengths;
  std::vector<char> seen(image_.size(), 0);
  for (std::size_t i = 0; i < image_.size(); ++i) {
    if (seen[i]) continue;
    int len = 0;
    for (std::size_t j = i; !seen[j]; j = static_cast<std::size_t>(image_[j])) {
      seen[j] = 1;
      ++len;
    }
    lengths.push_back(len);
  }
  std::sort(lengths.rbegin(), lengths.rend());
  return lengths;
}

Permutation compose(const Permutation& s, const Permutation& t) {
  if (s.size() != t.size()) throw DomainError("composing permutations of different degree");
  std::vector<int> img(static_cast<std::size_t>(s.size()));
  for (int i = 0; i < s.size(); ++i) {
    img[static_cast<std::size_t>(i)] = s(t(i));
  }
  return Permutation(std::move(img));
}

HermitianOperator tensor(const HermitianOperator& a, const HermitianOperator& b,
                         const NumericConfig& cfg) {
  std::size_t da = a.dim(), db = b.dim();
  if (db != 0 && da > cfg.dim_cap / db) {
    throw CapacityError(fmt::format("dimension {}x{} exceeds cap {}", da, db, cfg.dim_cap));
  }
  require_dim_within_cap(da * db, cfg.dim_cap);
  auto na = static_cast<Eigen::Index>(da), nb = static_cast<Eigen::Index>(db);
  Matrix out(na * nb, na * nb);
  for (Eigen::Index i = 0; i < na; ++i) {
    for (Eigen::Index j = 0; j < na; ++j) {
      out.block(i * nb, j * nb, nb, nb) = a.matrix()(i, j) * b.matrix();
    }
  }
  return HermitianOperator(out);
}

HermitianOperator tensor_all(std::span<const HermitianOperator> factors, const NumericConfig& cfg) {
  HermitianOperator acc = HermitianOperator::identity(1);
  for (const auto& f : factors) {
    acc = tensor(acc, f, cfg);
  }
  return acc;
}

std::vector<std::size_t> permutation_index_map(const Permutation& s, int d, const NumericConfig& cfg) {
  const int n = s.size();
  const std::size_t dim = checked_power(static_cast<std::size_t>(d), n, cfg.dim_cap);
  // Place value of tensor position j (position 0 most significant).
  std::vector<std::size_t> place(static_cast<std::size_t>(n));
  std::size_t p = 1;
  for (int j = n - 1; j >= 0; --j) {
    place[static_cast<std::size_t>(j)] = p;
    p *= static_cast<std::size_t>(d);
  }
  std::vector<std::size_t> map(dim);
  for (std::size_t e = 0; e < dim; ++e) {
    std::size_t rest = e, f = 0;
    for (int i = 0; i < n; ++i) {
      std::size_t digit = rest / place[static_cast<std::size_t>(i)];
      rest %= place[static_cast<std::size_t>(i)];
      f += digit * place[static_cast<std::size_t>(s(i))];
    }
    map[e] = f;
  }
  return map;
}

Matrix permutation_unitary(const Permutation& s, int d, const NumericConfig& cfg) {
  auto map = permutation_index_map(s, d, cfg);
  auto dim = static_cast<Eigen::Index>(map.size());
  Matrix v = Matrix::Zero(dim, dim);
  for (std::size_t e = 0; e < map.size(); ++e) {
    v(static_cast<Eigen::Index>(map[e]), static_cast<Eigen::Index>(e)) = 1.0;
  }
  return v;
}

HermitianOperator conjugate_by_permutation(const HermitianOperator& a, const Permutation& s, int d,
                                           const NumericConfig& cfg) {
  auto map = permutation_index_map(s, d, cfg);
  if (map.size() != a.dim()) {
    throw DomainError(fmt::format("operator dimension {} does not match d^n = {}", a.dim(), map.size()));
  }
  auto dim = static_cast<Eigen::Index>(map.size());
  Matrix out(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      out(static_cast<Eigen::Index>(map[static_cast<std::size_t>(i)]),
          static_cast<Eigen::Index>(map[static_cast<std::size_t>(j)])) = a.matrix()(i, j);
    }
  }
  return HermitianOperator(out);
}

HermitianOperator positive_part_projector(const HermitianOperator& a, double tol) {
  return apply_spectral(a.spectrum(), [tol](double x) { return x >= -tol ? 1.0 : 0.0; });
}

HermitianOperator support_projector(const HermitianOperator& a, double tol) {
  return apply_spectral(a.spectrum(), [tol](double x) { return x > tol ? 1.0 : 0.0; });
}

HermitianOperator inv_sqrt_on_support(const HermitianOperator& a, double tol) {
  auto sp = a.spectrum();
  if (sp.values.size() > 0 && sp.values(0) < -tol) {
    throw DomainError(fmt::format("inverse square root of an operator with eigenvalue {:.6g}", sp.values(0)));
  }
  return apply_spectral(sp, [tol](double x) { return x > tol ? 1.0 / std::sqrt(x) : 0.0; });
}

HermitianOperator pseudo_power(const HermitianOperator& a, double exponent, double tol) {
  auto sp = a.spectrum();
  if (sp.values.size() > 0 && sp.values(0) < -tol) {
    throw DomainError(fmt::format("power of an operator with eigenvalue {:.6g}", sp.values(0)));
  }
  const double cut = exponent >= 1.0 ? 0.0 : tol;
  return apply_spectral(sp, [cut, exponent](double x) { return x > cut ? std::pow(x, exponent) : 0.0; });
}

double dominance_residue(const HermitianOperator& a, const HermitianOperator& b) {
  if (a.dim() != b.dim()) {
    throw DomainError(fmt::format("dimension mismatch {} vs {}", a.dim(), b.dim()));
  }
  return (b - a).min_eigenvalue();
}

bool is_psd_dominated(const HermitianOperator& a, const HermitianOperator& b, double tol) {
  return dominance_residue(a, b) >= -tol;
}

double trace_product(const HermitianOperator& a, const HermitianOperator& b) {
  if (a.dim() != b.dim()) throw DomainError("dimension mismatch in trace product");
  // Tr(AB) = sum_ij A_ij B_ji = sum_ij A_ij conj(B_ij) for Hermitian B.
  return (a.matrix().array() * b.matrix().conjugate().array()).sum().real();
}

double max_abs(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

double commutator_norm(const HermitianOperator& a, const HermitianOperator& b) {
  return max_abs(a.matrix() * b.matrix() - b.matrix() * a.matrix());
}

double hermiticity_residue(const Matrix& m) { return max_abs(m - m.adjoint()); }

double trace_norm(const HermitianOperator& a) { return a.eigenvalues().cwiseAbs().sum(); }

std::uint64_t fingerprint(std::span<const HermitianOperator> ops) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](const void* data, std::size_t len) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= bytes[i];
      h *= 1099511628211ULL;
    }
  };
  for (const auto& op : ops) {
    std::uint64_t dim = op.dim();
    mix(&dim, sizeof dim);
    const Matrix& m = op.matrix();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      for (Eigen::Index i = 0; i < m.rows(); ++i) {
        double re = m(i, j).real(), im = m(i, j).imag();
        // Normalize signed zero so equal values hash equally.
        if (re == 0.0) re = 0.0;
        if (im == 0.0) im = 0.0;
        mix(&re, sizeof re);
        mix(&im, sizeof im);
      }
    }
  }
  return h;
}

}  // namespace ucq
