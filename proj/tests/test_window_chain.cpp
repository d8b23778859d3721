#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <functional>
#include <vector>

#include "cooclab/chains.hpp"
#include "cooclab/rng.hpp"
#include "cooclab/window_chain.hpp"

using namespace cooclab;

namespace {

Mat diamond_walk() {
  Mat P(4, 4);
  P << 0, 1.0 / 3, 1.0 / 3, 1.0 / 3,  //
      0.5, 0, 0.5, 0,                 //
      1.0 / 3, 1.0 / 3, 0, 1.0 / 3,   //
      0.5, 0, 0.5, 0;
  return P;
}

// dense-ish random regular chain: renormalized positive rows with a few
// zeroed entries
StochasticMatrix random_regular_chain(Index n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  while (true) {
    Mat m(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) {
        const Scalar u = rng.next_u01();
        m(i, j) = u < 0.25 ? 0.0 : u;
      }
    for (Index i = 0; i < n; ++i) {
      const Scalar s = m.row(i).sum();
      if (s <= 0) {
        m(i, (i + 1) % n) = 1.0;
        continue;
      }
      m.row(i) /= s;
    }
    auto P = StochasticMatrix::validate(m);
    if (regularity_check(P).regular) return P;
  }
}

}  // namespace

TEST_CASE("diamond fixture window chain at T=1") {
  auto P = StochasticMatrix::validate(diamond_walk());
  auto pi = stationary_distribution(P);
  auto wc = build_window_chain(P, pi, 1);
  CHECK(wc.size() == 10);  // directed edges of the 5-edge graph
  for (Index a = 0; a < 10; ++a)
    CHECK(std::abs(wc.sigma[a] - 0.1) < 1e-10);
  // zero spectral gap for the induced chain, 2/3 for the base chain
  CHECK(std::abs(spectral_expansion(wc.Q, wc.sigma) - 1.0) < 1e-8);
  CHECK(std::abs(spectral_expansion(P, pi) - 2.0 / 3.0) < 1e-8);
}

TEST_CASE("state-space caps") {
  auto catch_code = [](auto&& fn) -> std::string {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return "";
  };
  // tuple space 10^7 over the 1e6 cap
  {
    auto g = erdos_renyi_walk(10, 0.5, 1).chain;
    auto pi = stationary_distribution(g);
    CHECK(catch_code([&] { build_window_chain(g, pi, 6); }) ==
          "StateSpaceTooLarge");
  }
  // tuple space under 1e6 but enumerated states beyond the dense-Q cap
  {
    auto g = erdos_renyi_walk(40, 0.9, 2).chain;
    auto pi = stationary_distribution(g);
    CHECK(catch_code([&] { build_window_chain(g, pi, 2); }) ==
          "StateSpaceTooLarge");
  }
}

TEST_CASE("two-state flat chain window chain") {
  Mat flat(2, 2);
  flat << 0.5, 0.5, 0.5, 0.5;
  auto P = StochasticMatrix::validate(flat);
  auto pi = stationary_distribution(P);
  auto wc = build_window_chain(P, pi, 1);
  CHECK(wc.size() == 4);
  for (Index a = 0; a < 4; ++a) CHECK(wc.sigma[a] == doctest::Approx(0.25));
}

TEST_CASE("winning streak T=1 window states") {
  auto P = winning_streak(3);
  auto pi = stationary_distribution(P);
  auto wc = build_window_chain(P, pi, 1);
  CHECK(wc.size() == 6);
  const std::vector<std::vector<std::int32_t>> expect = {
      {0, 0}, {0, 1}, {1, 0}, {1, 2}, {2, 0}, {2, 2}};
  CHECK(wc.states == expect);
  for (Index a = 0; a < wc.size(); ++a) {
    const Scalar direct = pi[wc.states[a][0]] * P(wc.states[a][0], wc.states[a][1]);
    CHECK(wc.sigma[a] == doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("window transition law matches the base chain") {
  auto P = random_regular_chain(4, 99);
  auto pi = stationary_distribution(P);
  auto wc = build_window_chain(P, pi, 2);
  for (Index a = 0; a < wc.size(); ++a)
    for (Index b = 0; b < wc.size(); ++b) {
      const auto& u = wc.states[a];
      const auto& w = wc.states[b];
      const bool overlap = u[1] == w[0] && u[2] == w[1];
      const Scalar expect = overlap ? P(u[2], w[2]) : 0.0;
      REQUIRE(wc.Q(a, b) == expect);
    }
}

TEST_CASE("window initial distribution") {
  auto P = StochasticMatrix::validate(diamond_walk());
  auto pi = stationary_distribution(P);
  auto wc = build_window_chain(P, pi, 1);

  // phi = pi reproduces sigma
  auto rho = window_initial_distribution(wc, pi);
  CHECK((rho.vec() - wc.sigma.vec()).cwiseAbs().maxCoeff() < 1e-14);

  // point mass at vertex 0 spreads over its three outgoing windows
  auto rho0 = window_initial_distribution(wc, ProbVector::point_mass(4, 0));
  int live = 0;
  for (Index a = 0; a < wc.size(); ++a) {
    if (wc.states[a][0] == 0) {
      CHECK(rho0[a] == doctest::Approx(1.0 / 3));
      ++live;
    } else {
      CHECK(rho0[a] == 0.0);
    }
  }
  CHECK(live == 3);

  // norm identity over random starting distributions and chains
  SplitMix64 rng(2718);
  for (int t = 0; t < 20; ++t) {
    auto Q = random_regular_chain(2 + (t % 4), 500 + t);
    auto qpi = stationary_distribution(Q);
    auto qwc = build_window_chain(Q, qpi, 1 + (t % 3));
    Vec raw(Q.n());
    for (Index i = 0; i < Q.n(); ++i) raw(i) = rng.next_u01() + 1e-6;
    auto phi = ProbVector::validate(raw / raw.sum());
    auto r = window_initial_distribution(qwc, phi);
    CHECK(std::abs(pi_norm(r.vec(), qwc.sigma) - pi_norm(phi.vec(), qpi)) <
          1e-10);
  }
}

TEST_CASE("window matrix function") {
  Mat flat(2, 2);
  flat << 0.5, 0.5, 0.5, 0.5;
  auto P = StochasticMatrix::validate(flat);
  auto pi = stationary_distribution(P);
  auto w = StepWeights::uniform(1);
  const std::vector<std::int32_t> win = {0, 1};
  const Mat f = window_matrix_function(P, pi, w, win);
  CHECK(f(0, 0) == doctest::Approx(-0.125));
  CHECK(f(0, 1) == doctest::Approx(0.125));
  CHECK(f(1, 0) == doctest::Approx(0.125));
  CHECK(f(1, 1) == doctest::Approx(-0.125));
  CHECK(spectral_norm(f) == doctest::Approx(0.25));

  bool threw = false;
  try {
    window_matrix_function(P, pi, w, std::vector<std::int32_t>{0, 0, 1});
  } catch (const Error& e) {
    threw = e.code() == "UnknownWindow";
  }
  CHECK(threw);
}

TEST_CASE("zero mean and norm bound of the window function") {
  auto P = StochasticMatrix::validate(diamond_walk());
  auto pi = stationary_distribution(P);
  auto w = StepWeights::uniform(2);
  auto wc = build_window_chain(P, pi, 2);
  const Mat AE = asymptotic_expectation(P, pi, w);
  Mat mean = Mat::Zero(4, 4);
  for (Index a = 0; a < wc.size(); ++a) {
    const Mat f = window_matrix_function(AE, w, wc.states[a], 4);
    mean += wc.sigma[a] * f;
    CHECK(spectral_norm(f) <= 1.0 + 1e-12);
  }
  CHECK(mean.cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("empirical window transitions follow Q") {
  // winning_streak(3) at T=1 has 6 window states; compare transition
  // frequencies along one long walk to the rows of Q
  auto P = winning_streak(3);
  auto pi = stationary_distribution(P);
  auto wc = build_window_chain(P, pi, 1);
  auto traj = sample_walk(P, pi, 200000, 808);
  Mat counts = Mat::Zero(wc.size(), wc.size());
  std::vector<std::int32_t> prev = {traj.states[0], traj.states[1]};
  for (size_t i = 2; i < traj.states.size(); ++i) {
    std::vector<std::int32_t> curw = {traj.states[i - 1], traj.states[i]};
    counts(wc.index_of(prev), wc.index_of(curw)) += 1;
    prev = std::move(curw);
  }
  Scalar chi2 = 0;
  int cells = 0;
  for (Index a = 0; a < wc.size(); ++a) {
    const Scalar row = counts.row(a).sum();
    for (Index b = 0; b < wc.size(); ++b) {
      const Scalar expect = row * wc.Q(a, b);
      if (expect >= 5) {
        chi2 += (counts(a, b) - expect) * (counts(a, b) - expect) / expect;
        ++cells;
      } else {
        CHECK(counts(a, b) <= 5);  // impossible transitions never occur
      }
    }
  }
  // ~9 free cells; the 0.999 quantile of chi^2_9 is 27.9
  CHECK(cells >= 6);
  CHECK(chi2 < 35.0);
}

TEST_CASE("verification report on the diamond fixture") {
  auto P = StochasticMatrix::validate(diamond_walk());
  auto rep = verify_window_chain(P, ProbVector::uniform(4), 1,
                                 StepWeights::uniform(1));
  for (const auto& c : rep.checks) {
    INFO(c.name, " measured=", c.measured, " tol=", c.tolerance);
    if (!c.advisory) CHECK(c.pass);
  }
  CHECK(rep.all_pass());
  // tau(Q) - tau(P) is exactly T: tau(P) = 4 and tau(Q) = 5 here, one
  // beyond the T-entry-window variant of the offset bound
  for (const auto& c : rep.checks) {
    if (c.name == "mixing_time_offset") CHECK(c.measured == 1.0);
    if (c.name == "mixing_time_offset_strict") {
      CHECK(c.advisory);
      CHECK_FALSE(c.pass);
    }
  }
}

TEST_CASE("verification sweep over random regular chains") {
  // small sweep here; the 50-chain version runs in the acceptance suite
  SplitMix64 rng(13);
  for (int t = 0; t < 8; ++t) {
    const Index n = 2 + static_cast<Index>(rng.next() % 4);
    const int T = 1 + static_cast<int>(rng.next() % 2);
    auto P = random_regular_chain(n, 9000 + t);
    auto rep = verify_window_chain(P, ProbVector::uniform(n), T,
                                   StepWeights::uniform(T));
    INFO("n=", n, " T=", T);
    CHECK(rep.all_pass());
    for (const auto& c : rep.checks)
      if (c.name == "mixing_time_offset")
        CHECK(c.measured == static_cast<Scalar>(T));
  }
}
