#ifndef COOCLAB_WALK_HPP
#define COOCLAB_WALK_HPP

#include <cstdint>
#include <vector>

#include "cooclab/markov.hpp"
#include "cooclab/types.hpp"

namespace cooclab {

struct Trajectory {
  std::vector<std::int32_t> states;
  Index n = 0;                   // state-space size of the source chain
  std::uint64_t chain_id = 0;    // content hash of the chain
  std::uint64_t seed = 0;
  Index length() const noexcept { return static_cast<Index>(states.size()); }
};

// L-step walk: v1 ~ phi, v_{t+1} ~ row v_t of P. One SplitMix64 draw per
// state, inverse CDF with strict `u < cumsum` and the final cell absorbing
// residual mass. Identical (P, phi, L, seed) give bit-identical output.
Trajectory sample_walk(const StochasticMatrix& P, const ProbVector& phi,
                       Index L, std::uint64_t seed);

}  // namespace cooclab

#endif
