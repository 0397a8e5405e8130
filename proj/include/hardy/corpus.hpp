#pragma once

// Seeded random generators for Blaschke-Potapov symbols, representation specs
// and operator sums used by the verification suites.

#include "hardy/representations.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace hardy {

class Corpus {
 public:
  explicit Corpus(std::uint64_t seed, double max_zero = 0.7);

  std::uint64_t seed() const { return seed_; }
  std::mt19937_64& rng() { return rng_; }

  int uniform_int(int lo, int hi);
  double uniform(double lo, double hi);
  /// Uniform on the disk |a| <= r.
  cplx point(double r);
  cplx point() { return point(max_zero_); }
  cplx unimodular();
  /// Haar-like unitary from the QR factor of a complex Gaussian matrix.
  Matrix unitary(int d);
  /// rows x cols with orthonormal columns (rows >= cols).
  Matrix isometry(int rows, int cols);
  /// Orthogonal projection of the given rank onto a random subspace.
  Matrix projection(int d, int rank);
  Vector unit_vector(long n);

  /// U Q_1 ... Q_n on C^d, projection ranks uniform in 0..d-1.
  LaurentSymbol bp_product(int d, int factors, bool random_unitary = true);
  /// B J with B a pure d x d product and J a constant isometry (rows >= cols).
  LaurentSymbol pure_inner(int rows, int cols, int factors);
  /// Inner rows x cols symbol whose unitary part has the requested rank.
  LaurentSymbol inner_with_unitary(int rows, int cols, int factors, int unitary_rank);
  /// Scalar finite Blaschke product c * prod phi_a with |phi(0)| <= max_at_zero,
  /// rejecting draws whose Hitt-Sarason theta decays slower than max_rate.
  LaurentSymbol hitt_sarason_phi(double max_at_zero = 0.8, double max_rate = 0.72);
  /// Random analytic or coanalytic symbol built from Blaschke-Potapov products.
  LaurentSymbol mixed_symbol(int d);

  /// Symbols for a named identity of verify_identity.
  std::vector<LaurentSymbol> identity_symbols(const std::string& name, int d);

  /// PhiModel spec with Phi inner (F >= E1) and Theta a square pure
  /// Blaschke-Potapov product, so that M is finite-dimensional.
  RepSpec inner_rep(int order, int max_dim = 3);

 private:
  std::uint64_t seed_;
  double max_zero_;
  std::mt19937_64 rng_;
};

/// Sum of products of Toeplitz/Hankel factors on C^d.
struct ProductSum {
  std::vector<std::vector<Factor>> terms;
  int dim = 1;
  bool even_hankel = true;
  TruncatedOp at_order(int order) const;
  std::string describe() const;
};
ProductSum random_product_sum(Corpus& c, int d, bool even_hankel);

}  // namespace hardy
