#include "cooclab/walk.hpp"

#include <algorithm>

#include "cooclab/rng.hpp"

namespace cooclab {

namespace {

// First index j with u < cum[j]; the last cell catches u beyond cum[n-1]
// (cumulative sums can fall a few ulp short of 1).
Index pick(const Scalar* cum, Index n, Scalar u) {
  const Scalar* it = std::upper_bound(cum, cum + n, u);
  return std::min<Index>(static_cast<Index>(it - cum), n - 1);
}

}  // namespace

Trajectory sample_walk(const StochasticMatrix& P, const ProbVector& phi,
                       Index L, std::uint64_t seed) {
  if (L < 1) fail("LengthZero", "walk length must be >= 1");
  const Index n = P.n();
  if (phi.n() != n) fail("LengthMismatch", "phi length != n");

  // cumulative rows, row-major
  std::vector<Scalar> cum(static_cast<size_t>(n) * n);
  for (Index i = 0; i < n; ++i) {
    Scalar acc = 0;
    for (Index j = 0; j < n; ++j) {
      acc += P(i, j);
      cum[static_cast<size_t>(i) * n + j] = acc;
    }
  }
  std::vector<Scalar> phicum(n);
  {
    Scalar acc = 0;
    for (Index j = 0; j < n; ++j) {
      acc += phi[j];
      phicum[j] = acc;
    }
  }

  Trajectory traj;
  traj.states.reserve(L);
  traj.n = n;
  traj.chain_id = P.content_hash();
  traj.seed = seed;

  SplitMix64 rng(seed);
  Index v = pick(phicum.data(), n, rng.next_u01());
  traj.states.push_back(static_cast<std::int32_t>(v));
  for (Index t = 1; t < L; ++t) {
    v = pick(cum.data() + static_cast<size_t>(v) * n, n, rng.next_u01());
    traj.states.push_back(static_cast<std::int32_t>(v));
  }
  return traj;
}

}  // namespace cooclab
