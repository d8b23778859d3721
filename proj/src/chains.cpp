#include "cooclab/chains.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>

#include "cooclab/rng.hpp"

namespace cooclab {

EdgeList EdgeList::build(Index n, std::vector<Edge> raw) {
  std::map<std::pair<Index, Index>, Scalar> merged;
  for (const Edge& e : raw) {
    if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n)
      fail("BadIndex", "edge (" + std::to_string(e.u) + "," +
                           std::to_string(e.v) + ") outside [0," +
                           std::to_string(n) + ")");
    if (e.w <= 0) fail("BadWeight", "edge weights must be positive");
    merged[{std::min(e.u, e.v), std::max(e.u, e.v)}] += e.w;
  }
  EdgeList out;
  out.n = n;
  out.edges.reserve(merged.size());
  for (const auto& [key, w] : merged) out.edges.push_back({key.first, key.second, w});
  return out;
}

namespace {

void normalize_rows(Mat& m, const char* what) {
  for (Index i = 0; i < m.rows(); ++i) {
    Scalar sum = 0;
    for (Index j = 0; j < m.cols(); ++j) {
      if (m(i, j) < 0)
        fail("NegativeEntry", std::string(what) + " has a negative entry");
      sum += m(i, j);
    }
    if (std::abs(sum - 1.0) > 1e-9)
      fail("RowSumOutOfTolerance", std::string(what) + " row " +
                                       std::to_string(i) + " sums to " +
                                       std::to_string(sum));
    m.row(i) /= sum;
  }
}

}  // namespace

HmmSpec HmmSpec::validate(Mat hidden_raw, Mat emission_raw) {
  if (hidden_raw.rows() != hidden_raw.cols() || hidden_raw.rows() < 1)
    fail("NonSquare", "hidden transition must be square");
  normalize_rows(hidden_raw, "hidden transition");
  if (emission_raw.rows() != hidden_raw.rows())
    fail("ShapeMismatch", "emission rows must match hidden state count");
  if (emission_raw.cols() < 1) fail("ShapeMismatch", "emission needs columns");
  normalize_rows(emission_raw, "emission");
  return HmmSpec{std::move(hidden_raw), std::move(emission_raw)};
}

namespace {

StochasticMatrix walk_from_adjacency(const Mat& A, bool allow_large = false) {
  const Index n = A.rows();
  Mat P(n, n);
  for (Index i = 0; i < n; ++i) {
    const Scalar d = A.row(i).sum();
    if (d <= 0) fail("IsolatedVertex", "vertex " + std::to_string(i) +
                                           " has no incident edges");
    P.row(i) = A.row(i) / d;
  }
  return StochasticMatrix::validate(std::move(P), allow_large);
}

}  // namespace

StochasticMatrix barbell(Index clique_size, Index path_len) {
  if (clique_size < 3) fail("CliqueTooSmall", "clique size must be >= 3");
  if (path_len < 0) fail("ArgOutOfRange", "path length must be >= 0");
  const Index k = clique_size;
  const Index n = 2 * k + path_len;
  Mat A = Mat::Zero(n, n);
  auto link = [&A](Index a, Index b) { A(a, b) = A(b, a) = 1; };
  for (Index i = 0; i < k; ++i)
    for (Index j = i + 1; j < k; ++j) link(i, j);
  const Index right = k + path_len;
  for (Index i = right; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) link(i, j);
  // path attaches at the last vertex of the left clique and the first of
  // the right one
  Index prev = k - 1;
  for (Index p = k; p < k + path_len; ++p) {
    link(prev, p);
    prev = p;
  }
  link(prev, right);
  return walk_from_adjacency(A);
}

StochasticMatrix winning_streak(Index n) {
  if (n < 2) fail("TooFewStates", "winning streak needs n >= 2");
  Mat P = Mat::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    P(i, 0) += 0.5;
    P(i, std::min(i + 1, n - 1)) += 0.5;
  }
  return StochasticMatrix::validate(std::move(P));
}

GnpWalk erdos_renyi_walk(Index n, Scalar p, std::uint64_t seed) {
  if (n < 2) fail("TooFewStates", "G(n,p) walk needs n >= 2");
  if (p <= 0 || p >= 1) fail("ArgOutOfRange", "p must be in (0,1)");
  std::string last_failure = "GenerationFailed";
  for (int attempt = 1; attempt <= 100; ++attempt) {
    const std::uint64_t s = seed + static_cast<std::uint64_t>(attempt - 1);
    SplitMix64 rng(s);
    Mat A = Mat::Zero(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index j = i + 1; j < n; ++j)
        if (rng.next_u01() < p) A(i, j) = A(j, i) = 1;
    bool isolated = false;
    for (Index i = 0; i < n; ++i)
      if (A.row(i).sum() <= 0) {
        isolated = true;
        break;
      }
    if (isolated) {
      last_failure = "IsolatedVertexUnresolvable";
      continue;
    }
    StochasticMatrix P = walk_from_adjacency(A);
    if (!regularity_check(P).regular) {
      last_failure = "GenerationFailed";
      continue;
    }
    return GnpWalk{std::move(P), attempt, s};
  }
  fail(last_failure,
       "no regular G(n,p) walk after 100 attempts from seed " +
           std::to_string(seed));
}

StochasticMatrix from_edge_list(const EdgeList& e, bool allow_large) {
  if (e.n < 2) fail("TooFewStates", "graph needs at least 2 vertices");
  Mat A = Mat::Zero(e.n, e.n);
  for (const auto& edge : e.edges) {
    A(edge.u, edge.v) += edge.w;
    if (edge.u != edge.v) A(edge.v, edge.u) += edge.w;
  }
  return walk_from_adjacency(A, allow_large);
}

JointChain hmm_joint_chain(const HmmSpec& h) {
  const Index nx = h.hidden.rows();
  const Index ny = h.emission.cols();
  // joint states: (y, x) pairs with positive emission probability, ordered
  // by (y, x); zero-emission pairs are never visited and are dropped so the
  // chain stays irreducible when the hidden chain is
  std::vector<std::pair<Index, Index>> states;
  for (Index y = 0; y < ny; ++y)
    for (Index x = 0; x < nx; ++x)
      if (h.emission(x, y) > 0) states.emplace_back(y, x);
  const Index m = static_cast<Index>(states.size());
  if (m < 2) fail("TooFewStates", "joint chain has fewer than 2 states");
  Mat Q(m, m);
  for (Index a = 0; a < m; ++a)
    for (Index b = 0; b < m; ++b) {
      const auto [yb, xb] = states[b];
      Q(a, b) = h.hidden(states[a].second, xb) * h.emission(xb, yb);
    }
  JointChain out{StochasticMatrix::validate(std::move(Q)), {}, {}, ny};
  out.observable_map.reserve(m);
  out.hidden_map.reserve(m);
  for (const auto& [y, x] : states) {
    out.observable_map.push_back(y);
    out.hidden_map.push_back(x);
  }
  return out;
}

}  // namespace cooclab
