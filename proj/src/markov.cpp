#include "cooclab/markov.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <numeric>
#include <queue>
#include <vector>

#include "cooclab/rng.hpp"

namespace cooclab {

namespace {

constexpr Scalar kRowSumTol = 1e-9;
constexpr Scalar kStatIterTol = 1e-13;
constexpr Scalar kStatResidualTol = 1e-10;
constexpr int kStatIterCap = 1000000;
// Below this size both spectral routes use genuinely different dense
// algorithms (SVD vs symmetric eigensolve); above it, both use symmetric
// eigensolves of the left/right Gram matrices.
constexpr Index kSvdRouteLimit = 256;

std::vector<std::vector<Index>> positive_adjacency(const Mat& m,
                                                   bool transpose) {
  const Index n = m.rows();
  std::vector<std::vector<Index>> adj(n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (m(i, j) > 0) adj[transpose ? j : i].push_back(transpose ? i : j);
  return adj;
}

std::vector<char> reachable(const std::vector<std::vector<Index>>& adj,
                            Index start) {
  std::vector<char> seen(adj.size(), 0);
  std::queue<Index> q;
  seen[start] = 1;
  q.push(start);
  while (!q.empty()) {
    Index u = q.front();
    q.pop();
    for (Index v : adj[u])
      if (!seen[v]) {
        seen[v] = 1;
        q.push(v);
      }
  }
  return seen;
}

}  // namespace

StochasticMatrix StochasticMatrix::validate(Mat raw, bool allow_large) {
  if (raw.rows() != raw.cols())
    fail("NonSquare", "transition matrix must be square, got " +
                          std::to_string(raw.rows()) + "x" +
                          std::to_string(raw.cols()));
  const Index n = raw.rows();
  if (n < 2) fail("TooFewStates", "need at least 2 states");
  if (n > kMaxDenseStates && !allow_large)
    fail("TooLarge", "dense chain with " + std::to_string(n) +
                         " states exceeds the cap of " +
                         std::to_string(kMaxDenseStates) +
                         "; pass allow_large to accept the memory cost");
  for (Index i = 0; i < n; ++i) {
    Scalar sum = 0;
    for (Index j = 0; j < n; ++j) {
      const Scalar p = raw(i, j);
      if (p < 0)
        fail("NegativeEntry", "entry (" + std::to_string(i) + "," +
                                  std::to_string(j) + ") = " +
                                  std::to_string(p));
      sum += p;
    }
    if (std::abs(sum - 1.0) > kRowSumTol)
      fail("RowSumOutOfTolerance",
           "row " + std::to_string(i) + " sums to " + std::to_string(sum));
    raw.row(i) /= sum;
  }
  return StochasticMatrix(std::move(raw));
}

std::uint64_t StochasticMatrix::content_hash() const noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto eat = [&h](std::uint64_t word) {
    for (int b = 0; b < 8; ++b) {
      h ^= (word >> (8 * b)) & 0xff;
      h *= 0x100000001b3ULL;
    }
  };
  eat(static_cast<std::uint64_t>(n()));
  for (Index i = 0; i < n(); ++i)
    for (Index j = 0; j < n(); ++j) eat(std::bit_cast<std::uint64_t>(m_(i, j)));
  return h;
}

ProbVector ProbVector::validate(Vec raw) {
  if (raw.size() < 1) fail("TooFewStates", "empty distribution");
  for (Index i = 0; i < raw.size(); ++i)
    if (raw(i) < 0)
      fail("NegativeEntry", "entry " + std::to_string(i) + " is negative");
  const Scalar sum = raw.sum();
  if (std::abs(sum - 1.0) > kRowSumTol)
    fail("NotADistribution", "entries sum to " + std::to_string(sum));
  raw /= sum;
  return ProbVector(std::move(raw));
}

ProbVector ProbVector::point_mass(Index n, Index i) {
  if (i < 0 || i >= n) fail("BadIndex", "point mass index out of range");
  Vec v = Vec::Zero(n);
  v(i) = 1;
  return ProbVector(std::move(v));
}

ProbVector ProbVector::uniform(Index n) {
  return ProbVector(Vec::Constant(n, 1.0 / static_cast<Scalar>(n)));
}

RegularityReport regularity_check(const StochasticMatrix& P) {
  const Mat& m = P.matrix();
  const Index n = P.n();
  const auto fwd = positive_adjacency(m, false);
  const auto bwd = positive_adjacency(m, true);
  const auto from0 = reachable(fwd, 0);
  const auto to0 = reachable(bwd, 0);

  RegularityReport rep;
  rep.irreducible = true;
  for (Index i = 0; i < n; ++i)
    if (!from0[i] || !to0[i]) {
      rep.irreducible = false;
      break;
    }

  // Period of state 0: BFS levels within its strongly connected component,
  // gcd of (level[u] + 1 - level[v]) over component edges. Every cycle
  // through 0 contributes, so the gcd is the period.
  std::vector<char> scc(n, 0);
  for (Index i = 0; i < n; ++i) scc[i] = from0[i] && to0[i];
  std::vector<long> level(n, -1);
  std::queue<Index> q;
  level[0] = 0;
  q.push(0);
  while (!q.empty()) {
    Index u = q.front();
    q.pop();
    for (Index v : fwd[u])
      if (scc[v] && level[v] < 0) {
        level[v] = level[u] + 1;
        q.push(v);
      }
  }
  long g = 0;
  for (Index u = 0; u < n; ++u) {
    if (!scc[u] || level[u] < 0) continue;
    for (Index v : fwd[u])
      if (scc[v] && level[v] >= 0)
        g = std::gcd(g, level[u] + 1 - level[v]);
  }
  rep.period = g > 0 ? static_cast<int>(g) : 1;
  rep.regular = rep.irreducible && rep.period == 1;
  return rep;
}

ProbVector stationary_distribution(const StochasticMatrix& P) {
  if (!regularity_check(P).regular)
    fail("NotRegular", "stationary distribution requires a regular chain");
  const Index n = P.n();
  const Mat& m = P.matrix();
  Vec x = Vec::Constant(n, 1.0 / static_cast<Scalar>(n));
  Vec next(n);
  bool converged = false;
  for (int it = 0; it < kStatIterCap; ++it) {
    next.noalias() = m.transpose() * x;
    next /= next.sum();
    const Scalar diff = (next - x).cwiseAbs().maxCoeff();
    x.swap(next);
    if (diff <= kStatIterTol) {
      converged = true;
      break;
    }
  }
  if (!converged)
    fail("NoConvergence", "power iteration hit the cap of " +
                              std::to_string(kStatIterCap) + " iterations");
  const Scalar residual = (m.transpose() * x - x).cwiseAbs().maxCoeff();
  if (residual > kStatResidualTol)
    fail("NoConvergence",
         "stationary residual " + std::to_string(residual) + " > 1e-10");
  if (x.minCoeff() <= 0)
    fail("NoConvergence", "stationary distribution has a nonpositive entry");
  return ProbVector::validate(std::move(x));
}

Scalar pi_norm(const Vec& x, const ProbVector& pi) {
  if (x.size() != pi.n())
    fail("LengthMismatch", "vector length does not match distribution");
  Scalar acc = 0;
  for (Index i = 0; i < x.size(); ++i) {
    if (pi[i] <= 0) fail("ZeroStationaryEntry", "pi has a nonpositive entry");
    acc += x(i) * x(i) / pi[i];
  }
  return std::sqrt(acc);
}

Scalar total_variation(const ProbVector& x, const ProbVector& y) {
  if (x.n() != y.n()) fail("LengthMismatch", "distribution lengths differ");
  return 0.5 * (x.vec() - y.vec()).cwiseAbs().sum();
}

int mixing_time(const StochasticMatrix& P, Scalar delta, int t_max) {
  if (delta <= 0 || delta >= 1) fail("ArgOutOfRange", "delta must be in (0,1)");
  const ProbVector pi = stationary_distribution(P);  // throws NotRegular
  const Mat& m = P.matrix();
  const Vec& pv = pi.vec();
  Mat power = m;  // rows of P^t are the point-mass distributions at time t
  Scalar prev_worst = 2;
  for (int t = 1; t <= t_max; ++t) {
    Scalar worst = 0;
    for (Index i = 0; i < P.n(); ++i)
      worst = std::max(worst, 0.5 * (power.row(i).transpose() - pv)
                                        .cwiseAbs()
                                        .sum());
    // repeated multiplication drifts each entry by O(t n u); anything
    // beyond that would be a genuine monotonicity violation
    if (worst > prev_worst + 1e-8)
      fail("NotMonotone", "worst-case TV increased from t-1 to t");
    prev_worst = worst;
    if (worst <= delta) return t;
    if (t < t_max) power *= m;
  }
  fail("NotMixedWithinCap",
       "chain not within delta of stationarity after " +
           std::to_string(t_max) + " steps");
}

namespace {

// Top eigenvalue of a symmetric PSD operator given as a matvec, keeping
// iterates orthogonal to the known fixed vector s. Deterministic start.
Scalar power_top_eig(const std::function<void(const Vec&, Vec&)>& apply,
                     const Vec& s, Index n) {
  SplitMix64 rng(0x5eedc001);
  Vec v(n);
  for (Index i = 0; i < n; ++i) v(i) = rng.next_u01() - 0.5;
  v -= s * s.dot(v);
  Scalar norm = v.norm();
  if (norm == 0) return 0;
  v /= norm;
  Vec w(n);
  Scalar lam = 0;
  for (int it = 0; it < 200000; ++it) {
    apply(v, w);
    w -= s * s.dot(w);
    const Scalar next = v.dot(w);
    const Scalar wn = w.norm();
    if (wn <= 1e-300) return 0;  // operator annihilates the complement
    v = w / wn;
    if (std::abs(next - lam) <= 1e-14 * std::max<Scalar>(1, std::abs(next)) &&
        it > 8) {
      return next;
    }
    lam = next;
  }
  return lam;
}

}  // namespace

namespace {

// The similarity B = D^{1/2} P D^{-1/2} needs every pi entry to small
// RELATIVE error: a state with pi near machine epsilon (geometric tails
// like the winning streak) otherwise corrupts the whole spectrum, since
// D^{-1/2} blows its absolute error up by 1/sqrt(pi). Extra transpose
// iterations converge those entries relatively as well.
Vec refine_stationary(const Mat& m, Vec x) {
  Vec next(x.size());
  for (int it = 0; it < 500000; ++it) {
    next.noalias() = m.transpose() * x;
    next /= next.sum();
    Scalar rel = 0;
    for (Index i = 0; i < x.size(); ++i)
      rel = std::max(rel, std::abs(next(i) - x(i)) /
                              std::max(next(i), Scalar(1e-300)));
    x.swap(next);
    if (rel <= 1e-13) break;
  }
  return x;
}

}  // namespace

Scalar spectral_expansion(const StochasticMatrix& P, const ProbVector& pi) {
  if (!regularity_check(P).regular)
    fail("NotRegular", "spectral expansion requires a regular chain");
  if (pi.n() != P.n()) fail("LengthMismatch", "pi length != n");
  const Index n = P.n();
  const Vec resid = P.matrix().transpose() * pi.vec() - pi.vec();
  if (resid.cwiseAbs().maxCoeff() > 1e-8)
    fail("NotStationary", "pi is not stationary for P");

  const Vec polished = refine_stationary(P.matrix(), pi.vec());
  Vec s = polished.cwiseSqrt();
  Mat B(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) B(i, j) = P(i, j) * s(i) / s(j);
  Mat Bd = B - s * s.transpose();

  Scalar lam_a, lam_b;
  if (n <= kSvdRouteLimit) {
    Eigen::BDCSVD<Mat> svd(Bd);
    lam_a = svd.singularValues()(0);
    Mat G = Bd * Bd.transpose();
    G = 0.5 * (G + G.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Mat> es(G, Eigen::EigenvaluesOnly);
    lam_b = std::sqrt(std::max<Scalar>(0, es.eigenvalues().maxCoeff()));
  } else {
    // right and left Gram operators of the deflated B, matvec form
    auto right = [&Bd](const Vec& x, Vec& y) {
      Vec t = Bd * x;
      y.noalias() = Bd.transpose() * t;
    };
    auto left = [&Bd](const Vec& x, Vec& y) {
      Vec t = Bd.transpose() * x;
      y.noalias() = Bd * t;
    };
    lam_a = std::sqrt(std::max<Scalar>(0, power_top_eig(right, s, n)));
    lam_b = std::sqrt(std::max<Scalar>(0, power_top_eig(left, s, n)));
  }

  if (std::abs(lam_a - lam_b) > 1e-6)
    fail("MethodDisagreement", "spectral routes differ by " +
                                   std::to_string(std::abs(lam_a - lam_b)));
  if (lam_a > 1 + 1e-8)
    fail("NotStationary",
         "computed expansion " + std::to_string(lam_a) +
             " exceeds 1; pi is not accurate enough for the similarity");
  return std::max<Scalar>(0, lam_a);
}

Scalar spectral_norm(const Mat& A) {
  if (A.rows() != A.cols()) fail("NotSymmetric", "matrix is not square");
  if (A.rows() == 0) return 0;
  if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-10)
    fail("NotSymmetric", "matrix is not symmetric within 1e-10");
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (A + A.transpose()),
                                        Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

Scalar max_eigenvalue(const Mat& A) {
  if (A.rows() != A.cols()) fail("NotSymmetric", "matrix is not square");
  if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-10)
    fail("NotSymmetric", "matrix is not symmetric within 1e-10");
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (A + A.transpose()),
                                        Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

bool is_reversible(const StochasticMatrix& P, const ProbVector& pi,
                   Scalar tol) {
  // Detailed balance is decided from P alone: propagate the balance ratios
  // w_v = w_u P(u,v)/P(v,u) along a spanning tree and check every edge
  // against the propagated candidate. A power-iterated pi carries
  // O(tol/gap) error on slow chains, far above any fixed balance
  // tolerance, so it is only sanity-checked loosely at the end.
  const Index n = P.n();
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      if ((P(i, j) > 0) != (P(j, i) > 0)) return false;

  Vec w = Vec::Zero(n);
  w(0) = 1;
  std::queue<Index> q;
  q.push(0);
  while (!q.empty()) {
    const Index u = q.front();
    q.pop();
    for (Index v = 0; v < n; ++v)
      if (P(u, v) > 0 && w(v) == 0 && v != u) {
        w(v) = w(u) * P(u, v) / P(v, u);
        q.push(v);
      }
  }
  if (w.minCoeff() <= 0) return false;  // reducible support
  w /= w.sum();
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      if (std::abs(w(i) * P(i, j) - w(j) * P(j, i)) > tol) return false;
  // the candidate must agree with the supplied stationary distribution
  return (w - pi.vec()).cwiseAbs().maxCoeff() <= 1e-6;
}

SpectralReport spectral_report(const StochasticMatrix& P, Scalar delta,
                               int t_max) {
  SpectralReport rep;
  const ProbVector pi = stationary_distribution(P);
  rep.lambda = spectral_expansion(P, pi);
  rep.gap = 1 - rep.lambda;
  rep.reversible = is_reversible(P, pi);
  rep.mixing_time = mixing_time(P, delta, t_max);
  rep.delta = delta;
  return rep;
}

}  // namespace cooclab
