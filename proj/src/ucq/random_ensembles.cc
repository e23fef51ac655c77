#include "ucq/random_ensembles.h"

#include <cmath>
#include <vector>

namespace ucq {

Rng substream(std::uint64_t seed, std::string_view name, std::uint64_t index) {
  // FNV-1a of the stream name keeps the mapping stable across platforms.
  std::uint64_t tag = 1469598103934665603ULL;
  for (char c : name) {
    tag ^= static_cast<unsigned char>(c);
    tag *= 1099511628211ULL;
  }
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(tag), static_cast<std::uint32_t>(tag >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

Matrix ginibre(std::size_t rows, std::size_t cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index j = 0; j < g.cols(); ++j) {
    for (Eigen::Index i = 0; i < g.rows(); ++i) {
      double re = normal(rng);
      double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  }
  return g;
}

Matrix random_unitary(std::size_t dim, Rng& rng) {
  Matrix g = ginibre(dim, dim, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < q.cols(); ++i) {
    Complex diag = r(i, i);
    double mag = std::abs(diag);
    if (mag > 0) q.col(i) *= diag / mag;
  }
  return q;
}

HermitianOperator random_psd(std::size_t dim, Rng& rng, std::size_t rank) {
  if (rank == 0) rank = dim;
  Matrix g = ginibre(dim, rank, rng);
  return HermitianOperator(g * g.adjoint() / static_cast<double>(rank));
}

DensityOperator random_density(std::size_t dim, Rng& rng, std::size_t rank) {
  HermitianOperator p = random_psd(dim, rng, rank);
  return DensityOperator(p * (1.0 / p.trace()));
}

DensityOperator random_pure_state(std::size_t dim, Rng& rng) {
  Matrix g = ginibre(dim, 1, rng);
  return DensityOperator::pure(g.col(0));
}

HermitianOperator random_hermitian(std::size_t dim, Rng& rng) {
  return HermitianOperator(ginibre(dim, dim, rng));
}

}  // namespace ucq
