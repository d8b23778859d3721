#ifndef COOCLAB_CHAINS_HPP
#define COOCLAB_CHAINS_HPP

#include <cstdint>
#include <vector>

#include "cooclab/markov.hpp"
#include "cooclab/types.hpp"

namespace cooclab {

// Undirected weighted graph as a canonical edge list: u <= v, each pair
// stored once, duplicate edges merged by weight summation.
struct EdgeList {
  Index n = 0;
  struct Edge {
    Index u, v;
    Scalar w;
  };
  std::vector<Edge> edges;

  // Canonicalizes and validates raw (u, v, w) triples.
  static EdgeList build(Index n, std::vector<Edge> raw);
};

// Hidden transition is kept as a plain validated row-stochastic matrix:
// a one-state hidden chain (i.i.d. observations) is legal here even though
// StochasticMatrix proper starts at two states.
struct HmmSpec {
  Mat hidden;    // |X| x |X| transition on hidden states
  Mat emission;  // |X| x |Y| row-stochastic P(y | x)

  static HmmSpec validate(Mat hidden_raw, Mat emission_raw);
};

// Two k-cliques joined through path_len intermediate vertices (a single
// bridging edge when path_len = 0); returns the simple random walk D^-1 A.
StochasticMatrix barbell(Index clique_size, Index path_len);

// Consecutive-tails counter on n states: every state returns to state 0
// with probability 1/2 and advances (the last state self-loops) otherwise.
StochasticMatrix winning_streak(Index n);

struct GnpWalk {
  StochasticMatrix chain;
  int attempts;            // resamples needed to land on a regular walk
  std::uint64_t seed_used;
};

// Random walk on an Erdos-Renyi G(n, p) draw. Non-regular draws
// (disconnected or bipartite) are resampled with seed+1, up to 100 tries.
GnpWalk erdos_renyi_walk(Index n, Scalar p, std::uint64_t seed);

// Weighted random walk P(u,v) = w(u,v) / d(u) on an undirected graph.
StochasticMatrix from_edge_list(const EdgeList& e, bool allow_large = false);

// Markov chain over (observable, hidden) pairs with positive emission
// probability; transition ((y,x) -> (y',x')) = hidden(x,x') * emission(x',y').
struct JointChain {
  StochasticMatrix chain;
  std::vector<Index> observable_map;  // joint state -> observable index
  std::vector<Index> hidden_map;      // joint state -> hidden index
  Index n_observables;
};

JointChain hmm_joint_chain(const HmmSpec& h);

}  // namespace cooclab

#endif
