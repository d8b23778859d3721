#include "cooclab/bounds.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>
#include <thread>
#include <utility>

#include "cooclab/rng.hpp"
#include "cooclab/walk.hpp"

namespace cooclab {

MatrixFunction MatrixFunction::validate(std::vector<Mat> values,
                                        const ProbVector& pi) {
  if (values.empty()) fail("ArgOutOfRange", "need at least one state matrix");
  if (static_cast<Index>(values.size()) != pi.n())
    fail("LengthMismatch", "state count != pi length");
  const Index d = values.front().rows();
  if (d < 1) fail("ArgOutOfRange", "matrix dimension must be >= 1");
  Mat mean = Mat::Zero(d, d);
  for (Index v = 0; v < static_cast<Index>(values.size()); ++v) {
    const Mat& f = values[v];
    if (f.rows() != d || f.cols() != d)
      fail("ShapeMismatch", "all state matrices must be d x d");
    if (spectral_norm(f) > 1 + 1e-12)
      fail("NormBoundViolated",
           "||f(" + std::to_string(v) + ")||_2 exceeds 1");
    mean += pi[v] * f;
  }
  if (mean.cwiseAbs().maxCoeff() > 1e-10)
    fail("NotCentered", "sum_v pi_v f(v) != 0");
  return MatrixFunction{d, std::move(values)};
}

Scalar matrix_chernoff_bound(long k, Index d, Scalar eps, Scalar lambda,
                             Scalar phi_norm, bool complex_case) {
  if (k < 1 || d < 1) fail("ArgOutOfRange", "k and d must be >= 1");
  if (eps <= 0 || eps >= 1) fail("ArgOutOfRange", "eps must be in (0,1)");
  if (lambda < 0 || lambda > 1)
    fail("ArgOutOfRange", "lambda must be in [0,1]");
  if (phi_norm < 1) fail("ArgOutOfRange", "||phi||_pi is always >= 1");
  const Scalar prefactor = complex_case ? 4.0 : 1.0;
  const Scalar dim = static_cast<Scalar>(d);
  return prefactor * phi_norm * dim * dim *
         std::exp(-eps * eps * (1 - lambda) * static_cast<Scalar>(k) / 72.0);
}

Scalar cooc_bound(Index n, int T, int tau, long L, Scalar eps,
                  Scalar phi_norm) {
  if (n < 1 || T < 1 || tau < 1) fail("ArgOutOfRange", "n, T, tau must be >= 1");
  if (L <= T) fail("WindowTooLarge", "need L > T");
  if (eps <= 0 || eps >= 1) fail("ArgOutOfRange", "eps must be in (0,1)");
  if (phi_norm < 1) fail("ArgOutOfRange", "||phi||_pi is always >= 1");
  const Scalar tt = static_cast<Scalar>(tau + T);
  const Scalar nn = static_cast<Scalar>(n);
  return 2.0 * tt * phi_norm * nn * nn *
         std::exp(-eps * eps * static_cast<Scalar>(L - T) / (576.0 * tt));
}

long recommended_length(Index n, int T, int tau, Scalar eps) {
  if (n < 2 || T < 1 || tau < 1) fail("ArgOutOfRange", "n, T, tau must be >= 1");
  if (eps <= 0 || eps >= 1) fail("ArgOutOfRange", "eps must be in (0,1)");
  const Scalar tt = static_cast<Scalar>(tau + T);
  const Scalar value =
      576.0 * tt * (3.0 * std::log(static_cast<Scalar>(n)) + std::log(tt)) /
          (eps * eps) +
      static_cast<Scalar>(T);
  return static_cast<long>(std::ceil(value));
}

Scalar subchain_expansion_bound(Scalar delta) {
  if (delta <= 0 || delta >= 1) fail("ArgOutOfRange", "delta must be in (0,1)");
  return std::sqrt(2.0 * delta);
}

MatrixFunction make_centered_function(const StochasticMatrix& P,
                                      const ProbVector& pi, Index d,
                                      std::uint64_t seed) {
  if (d < 1) fail("ArgOutOfRange", "d must be >= 1");
  const Index N = P.n();
  for (int attempt = 0; attempt < 100; ++attempt) {
    SplitMix64 rng(seed + static_cast<std::uint64_t>(attempt));
    std::vector<Mat> g(N);
    for (Index v = 0; v < N; ++v) {
      // draw the upper triangle (diagonal included) row-major, mirror it
      Mat m(d, d);
      for (Index i = 0; i < d; ++i)
        for (Index j = i; j < d; ++j) {
          const Scalar x = 2.0 * rng.next_u01() - 1.0;
          m(i, j) = x;
          m(j, i) = x;
        }
      g[v] = std::move(m);
    }
    Mat mean = Mat::Zero(d, d);
    for (Index v = 0; v < N; ++v) mean += pi[v] * g[v];
    Scalar max_norm = 0;
    for (Index v = 0; v < N; ++v) {
      g[v] -= mean;
      max_norm = std::max(max_norm, spectral_norm(g[v]));
    }
    if (max_norm == 0) {
      if (N == 1) return MatrixFunction{d, std::move(g)};  // f == 0
      continue;  // resample
    }
    for (Index v = 0; v < N; ++v) g[v] /= max_norm;
    return MatrixFunction::validate(std::move(g), pi);
  }
  fail("DegenerateAllZero", "centered draws degenerate for 100 seeds");
}

TailEstimate empirical_tail(const StochasticMatrix& P, const ProbVector& phi,
                            const MatrixFunction& f, long k, Scalar eps,
                            long trials, std::uint64_t seed, int threads) {
  if (trials < 100) fail("ArgOutOfRange", "need at least 100 trials");
  if (k < 1) fail("ArgOutOfRange", "k must be >= 1");
  if (static_cast<Index>(f.values.size()) != P.n())
    fail("LengthMismatch", "matrix function does not cover the state space");

  std::vector<char> exceeded(trials, 0);
  const auto run_trial = [&](long t) {
    const Trajectory walk =
        sample_walk(P, phi, k, mix(seed, static_cast<std::uint64_t>(t)));
    Mat acc = Mat::Zero(f.d, f.d);
    for (const std::int32_t v : walk.states) acc += f.values[v];
    acc /= static_cast<Scalar>(k);
    exceeded[t] = max_eigenvalue(acc) >= eps ? 1 : 0;
  };

  if (threads <= 1) {
    for (long t = 0; t < trials; ++t) run_trial(t);
  } else {
    std::atomic<long> cursor{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int w = 0; w < threads; ++w)
      pool.emplace_back([&] {
        for (long t = cursor.fetch_add(1); t < trials;
             t = cursor.fetch_add(1))
          run_trial(t);
      });
    for (auto& th : pool) th.join();
  }

  long hits = 0;
  for (char c : exceeded) hits += c;
  const Scalar ntr = static_cast<Scalar>(trials);
  const Scalar p = static_cast<Scalar>(hits) / ntr;
  const Scalar z = 1.959963984540054;  // 95%
  const Scalar z2 = z * z;
  const Scalar halfwidth =
      z * std::sqrt(p * (1 - p) / ntr + z2 / (4 * ntr * ntr)) / (1 + z2 / ntr);
  return TailEstimate{p, trials, halfwidth};
}

}  // namespace cooclab
