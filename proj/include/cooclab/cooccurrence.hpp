#ifndef COOCLAB_COOCCURRENCE_HPP
#define COOCLAB_COOCCURRENCE_HPP

#include <cstdint>
#include <vector>

#include "cooclab/markov.hpp"
#include "cooclab/types.hpp"
#include "cooclab/walk.hpp"

namespace cooclab {

// Window size T and per-offset coefficients alpha_1..alpha_T with
// sum |alpha_r| = 1. Signed coefficients are allowed.
struct StepWeights {
  int T;
  Vec alpha;

  static StepWeights uniform(int T);
  static StepWeights validate(Vec alpha);
  Scalar signed_sum() const { return alpha.sum(); }
};

// Symmetrized sliding-window pair-frequency matrix of one trajectory:
// C = 1/(L-T) * sum_{i<=L-T} sum_r (alpha_r/2) (E_{v_i,v_{i+r}} + transpose).
struct CoocMatrix {
  Mat m;
  StepWeights weights;
  std::uint64_t chain_id = 0;
  std::uint64_t seed = 0;
  Index traj_length = 0;

  Index n() const noexcept { return m.rows(); }
};

CoocMatrix estimate_cooc(const Trajectory& traj, const StepWeights& w);

// AE[C] = sum_r (alpha_r/2) (Pi P^r + (Pi P^r)^T), Pi = diag(pi).
Mat asymptotic_expectation(const StochasticMatrix& P, const ProbVector& pi,
                           const StepWeights& w);

// Spectral norm of C - AE.
Scalar error_2norm(const CoocMatrix& C, const Mat& AE);

// out[a,b] = sum over i with f[i]=a, j with f[j]=b of M[i,j].
Mat project_states(const Mat& M, const std::vector<Index>& f, Index m);

// Truncated pointwise mutual information with negative-sampling divisor b:
// out[w,c] = ln(max(C[w,c] / (b * m_w * m_c), 1)), zero rows stay zero.
Mat pmi_transform(const CoocMatrix& C, Scalar b = 1.0);

}  // namespace cooclab

#endif
