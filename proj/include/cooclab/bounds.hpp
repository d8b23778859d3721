#ifndef COOCLAB_BOUNDS_HPP
#define COOCLAB_BOUNDS_HPP

#include <cstdint>
#include <vector>

#include "cooclab/markov.hpp"
#include "cooclab/types.hpp"

namespace cooclab {

// Per-state symmetric d x d matrices with ||f(v)||_2 <= 1 and
// sum_v pi_v f(v) = 0; the inputs the tail bounds speak about.
struct MatrixFunction {
  Index d = 0;
  std::vector<Mat> values;

  static MatrixFunction validate(std::vector<Mat> values,
                                 const ProbVector& pi);
};

struct TailEstimate {
  Scalar p_hat = 0;
  long trials = 0;
  Scalar wilson_halfwidth = 0;  // 95% Wilson score half-width
};

// Tail bound for the extreme eigenvalues of the k-step sample mean:
// prefactor * ||phi||_pi * d^2 * exp(-eps^2 (1-lambda) k / 72), with
// prefactor 4 in the complex/Hermitian case and 1 in the real/symmetric one.
Scalar matrix_chernoff_bound(long k, Index d, Scalar eps, Scalar lambda,
                             Scalar phi_norm, bool complex_case);

// Tail bound for ||C - AE[C]||_2 >= eps on an L-step walk:
// 2 (tau+T) ||phi||_pi n^2 exp(-eps^2 (L-T) / (576 (tau+T))).
Scalar cooc_bound(Index n, int T, int tau, long L, Scalar eps,
                  Scalar phi_norm);

// Smallest walk length with explicit constants:
// ceil(576 (tau+T) (3 ln n + ln(tau+T)) / eps^2 + T). Natural logarithms.
long recommended_length(Index n, int T, int tau, Scalar eps);

// lambda(Q^tau(Q)) <= sqrt(2 delta) for any regular chain Q.
Scalar subchain_expansion_bound(Scalar delta);

// Random centered instance: symmetric uniform(-1,1) draws g(v), centered by
// the pi-average and scaled so max_v ||f(v)||_2 = 1 (all-zero only when the
// chain has a single state).
MatrixFunction make_centered_function(const StochasticMatrix& P,
                                      const ProbVector& pi, Index d,
                                      std::uint64_t seed);

// Fraction of `trials` independent k-step walks whose sample-mean matrix
// has lambda_max >= eps. Trial t draws from seed mix(seed, t), so the
// result does not depend on scheduling.
TailEstimate empirical_tail(const StochasticMatrix& P, const ProbVector& phi,
                            const MatrixFunction& f, long k, Scalar eps,
                            long trials, std::uint64_t seed,
                            int threads = 1);

}  // namespace cooclab

#endif
