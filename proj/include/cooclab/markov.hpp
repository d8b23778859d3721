#ifndef COOCLAB_MARKOV_HPP
#define COOCLAB_MARKOV_HPP

#include <cstdint>

#include "cooclab/types.hpp"

namespace cooclab {

// Matrices above this size need allow_large = true (dense storage only;
// a 10312-state chain costs ~850 MB per matrix).
inline constexpr Index kMaxDenseStates = 5000;

// Row-stochastic transition matrix. entry(i,j) = probability of moving
// from state i to state j. Immutable after construction; rows are
// renormalized on construction when their sums are within 1e-9 of one.
class StochasticMatrix {
public:
  static StochasticMatrix validate(Mat raw, bool allow_large = false);

  Index n() const noexcept { return m_.rows(); }
  const Mat& matrix() const noexcept { return m_; }
  Scalar operator()(Index i, Index j) const { return m_(i, j); }

  // FNV-1a over the dimension and the raw IEEE-754 entry bits, row-major.
  // Stable across platforms; used to derive per-chain random seeds.
  std::uint64_t content_hash() const noexcept;

private:
  explicit StochasticMatrix(Mat m) : m_(std::move(m)) {}
  Mat m_;
};

// Probability distribution over states. Entries nonnegative, sum
// renormalized to one (accepted when within 1e-9 before renormalization).
class ProbVector {
public:
  static ProbVector validate(Vec raw);
  static ProbVector point_mass(Index n, Index i);
  static ProbVector uniform(Index n);

  Index n() const noexcept { return v_.size(); }
  const Vec& vec() const noexcept { return v_; }
  Scalar operator[](Index i) const { return v_(i); }

private:
  explicit ProbVector(Vec v) : v_(std::move(v)) {}
  Vec v_;
};

struct RegularityReport {
  bool irreducible = false;
  int period = 1;  // gcd of cycle lengths through state 0, within its SCC
  bool regular = false;
};

struct SpectralReport {
  Scalar lambda = 0;   // spectral expansion
  Scalar gap = 1;      // 1 - lambda, exactly
  bool reversible = false;
  int mixing_time = 1;
  Scalar delta = 0.125;
};

RegularityReport regularity_check(const StochasticMatrix& P);

// Power iteration on P^T from the uniform vector, successive-difference
// tolerance 1e-13, cap 1e6 iterations, then a residual check
// ||pi^T P - pi^T||_inf <= 1e-10.
ProbVector stationary_distribution(const StochasticMatrix& P);

// ||x||_pi = sqrt(sum_i x_i^2 / pi_i).
Scalar pi_norm(const Vec& x, const ProbVector& pi);

Scalar total_variation(const ProbVector& x, const ProbVector& y);

// Smallest t such that max_i TV(e_i^T P^t, pi) <= delta. The max over
// point masses equals the max over all initial distributions: x -> TV(x^T
// P^t, pi) is convex on the simplex, so its maximum sits at a vertex.
int mixing_time(const StochasticMatrix& P, Scalar delta = 0.125,
                int t_max = 100000);

// Spectral expansion lambda(P): operator norm of P on the pi-orthogonal
// complement of pi. Computed along two routes on B = D^{1/2} P D^{-1/2}
// with the top pair deflated at sqrt(pi) (a shared fixed vector of B and
// B^T, so the complement is invariant): (a) largest singular value of the
// deflated B, (b) sqrt of the largest eigenvalue of the deflated B B^T.
// The routes must agree within 1e-6 or MethodDisagreement is thrown.
Scalar spectral_expansion(const StochasticMatrix& P, const ProbVector& pi);

// Largest absolute eigenvalue of a symmetric matrix (2-norm).
Scalar spectral_norm(const Mat& A);

// Largest (signed) eigenvalue of a symmetric matrix.
Scalar max_eigenvalue(const Mat& A);

// Detailed balance pi_i P_ij = pi_j P_ji within tol.
bool is_reversible(const StochasticMatrix& P, const ProbVector& pi,
                   Scalar tol = 1e-12);

SpectralReport spectral_report(const StochasticMatrix& P,
                               Scalar delta = 0.125, int t_max = 100000);

}  // namespace cooclab

#endif
