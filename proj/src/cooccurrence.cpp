#include "cooclab/cooccurrence.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>
#include <vector>

namespace cooclab {

namespace {
constexpr Index kDenseAccumLimit = 2048;
}

StepWeights StepWeights::uniform(int T) {
  if (T < 1) fail("ArgOutOfRange", "window size must be >= 1");
  return StepWeights{T, Vec::Constant(T, 1.0 / static_cast<Scalar>(T))};
}

StepWeights StepWeights::validate(Vec alpha) {
  const int T = static_cast<int>(alpha.size());
  if (T < 1) fail("ArgOutOfRange", "need at least one step weight");
  const Scalar l1 = alpha.cwiseAbs().sum();
  if (std::abs(l1 - 1.0) > 1e-12)
    fail("WeightsNotNormalized",
         "sum of |alpha_r| is " + std::to_string(l1) + ", expected 1");
  return StepWeights{T, std::move(alpha)};
}

CoocMatrix estimate_cooc(const Trajectory& traj, const StepWeights& w) {
  const Index L = traj.length();
  const Index T = w.T;
  const Index n = traj.n;
  if (L <= T)
    fail("WindowTooLarge", "trajectory length " + std::to_string(L) +
                               " must exceed window size " + std::to_string(T));

  // accumulate raw increments, normalize once at the end
  Mat C;
  if (n <= kDenseAccumLimit) {
    C = Mat::Zero(n, n);
    for (Index i = 0; i + T < L; ++i) {
      const Index a = traj.states[i];
      for (Index r = 1; r <= T; ++r) {
        const Index b = traj.states[i + r];
        const Scalar half = 0.5 * w.alpha(r - 1);
        C(a, b) += half;
        C(b, a) += half;
      }
    }
  } else {
    std::unordered_map<std::uint64_t, Scalar> acc;
    acc.reserve(std::min<size_t>(static_cast<size_t>(L) * T, size_t{1} << 22));
    const auto key = [n](Index a, Index b) {
      return static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(n) + b;
    };
    for (Index i = 0; i + T < L; ++i) {
      const Index a = traj.states[i];
      for (Index r = 1; r <= T; ++r) {
        const Index b = traj.states[i + r];
        const Scalar half = 0.5 * w.alpha(r - 1);
        acc[key(a, b)] += half;
        acc[key(b, a)] += half;
      }
    }
    C = Mat::Zero(n, n);
    for (const auto& [k, v] : acc)
      C(static_cast<Index>(k / n), static_cast<Index>(k % n)) = v;
  }
  C /= static_cast<Scalar>(L - T);
  // the hash-map path can break exact symmetry only by insertion order,
  // never by value; both orientations always receive the same increment
  return CoocMatrix{std::move(C), w, traj.chain_id, traj.seed, L};
}

Mat asymptotic_expectation(const StochasticMatrix& P, const ProbVector& pi,
                           const StepWeights& w) {
  if (!regularity_check(P).regular)
    fail("NotRegular", "asymptotic expectation requires a regular chain");
  if (pi.n() != P.n()) fail("LengthMismatch", "pi length != n");
  const Index n = P.n();
  Mat AE = Mat::Zero(n, n);
  Mat power = P.matrix();  // P^r by repeated multiplication
  for (int r = 1; r <= w.T; ++r) {
    const Scalar half = 0.5 * w.alpha(r - 1);
    Mat term = pi.vec().asDiagonal() * power;
    AE += half * (term + term.transpose());
    if (r < w.T) power *= P.matrix();
  }
  return AE;
}

Scalar error_2norm(const CoocMatrix& C, const Mat& AE) {
  if (C.m.rows() != AE.rows() || C.m.cols() != AE.cols())
    fail("ShapeMismatch", "co-occurrence and expectation shapes differ");
  return spectral_norm(C.m - AE);
}

Mat project_states(const Mat& M, const std::vector<Index>& f, Index m) {
  if (static_cast<Index>(f.size()) != M.rows() || M.rows() != M.cols())
    fail("ShapeMismatch", "map length must equal matrix dimension");
  std::vector<char> hit(m, 0);
  for (Index i = 0; i < M.rows(); ++i) {
    if (f[i] < 0 || f[i] >= m) fail("NonSurjective", "map value out of range");
    hit[f[i]] = 1;
  }
  for (Index a = 0; a < m; ++a)
    if (!hit[a])
      fail("NonSurjective",
           "observable " + std::to_string(a) + " has no preimage");
  Mat out = Mat::Zero(m, m);
  for (Index i = 0; i < M.rows(); ++i)
    for (Index j = 0; j < M.cols(); ++j) out(f[i], f[j]) += M(i, j);
  return out;
}

Mat pmi_transform(const CoocMatrix& C, Scalar b) {
  if (C.weights.alpha.minCoeff() < 0)
    fail("NegativeWeights",
         "PMI needs nonnegative step weights (joint-distribution reading)");
  if (b <= 0) fail("ArgOutOfRange", "negative-sampling divisor must be > 0");
  const Index n = C.n();
  const Vec marg = C.m.rowwise().sum();
  Mat out = Mat::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    if (marg(i) <= 0) continue;  // zero row -> zero output row
    for (Index j = 0; j < n; ++j) {
      if (marg(j) <= 0) continue;
      const Scalar ratio = C.m(i, j) / (b * marg(i) * marg(j));
      if (ratio > 1) out(i, j) = std::log(ratio);
    }
  }
  return out;
}

}  // namespace cooclab
