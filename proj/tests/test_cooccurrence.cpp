#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <functional>
#include <sstream>
#include <vector>

#include "cooclab/chains.hpp"
#include "cooclab/cooccurrence.hpp"
#include "cooclab/io.hpp"
#include "cooclab/rng.hpp"
#include "cooclab/walk.hpp"
#include "oracles.hpp"

using namespace cooclab;

namespace {

std::string code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

Trajectory fixed_traj(std::vector<std::int32_t> states, Index n) {
  Trajectory t;
  t.states = std::move(states);
  t.n = n;
  return t;
}

Mat diamond_walk() {
  Mat P(4, 4);
  P << 0, 1.0 / 3, 1.0 / 3, 1.0 / 3,  //
      0.5, 0, 0.5, 0,                 //
      1.0 / 3, 1.0 / 3, 0, 1.0 / 3,   //
      0.5, 0, 0.5, 0;
  return P;
}

}  // namespace

TEST_CASE("step weights") {
  auto u = StepWeights::uniform(4);
  CHECK(u.alpha.sum() == doctest::Approx(1.0));
  CHECK_NOTHROW(StepWeights::validate((Vec(2) << 0.5, -0.5).finished()));
  CHECK(code_of([] {
          StepWeights::validate((Vec(2) << 0.5, 0.4).finished());
        }) == "WeightsNotNormalized");
}

TEST_CASE("hand-traced co-occurrence") {
  // (0,1,0), T=1: two windows, both orientations, normalize by 2(L-T)
  auto C = estimate_cooc(fixed_traj({0, 1, 0}, 2), StepWeights::uniform(1));
  CHECK(C.m(0, 1) == doctest::Approx(0.5));
  CHECK(C.m(1, 0) == doctest::Approx(0.5));
  CHECK(C.m(0, 0) == 0.0);
  CHECK(C.m(1, 1) == 0.0);

  // (a,b,c) distinct, T=2 uniform: one window, four quarter entries
  auto D = estimate_cooc(fixed_traj({0, 1, 2}, 3), StepWeights::uniform(2));
  CHECK(D.m(0, 1) == doctest::Approx(0.25));
  CHECK(D.m(1, 0) == doctest::Approx(0.25));
  CHECK(D.m(0, 2) == doctest::Approx(0.25));
  CHECK(D.m(2, 0) == doctest::Approx(0.25));
  CHECK(D.m.sum() == doctest::Approx(1.0));

  // constant trajectory: all mass on the diagonal cell
  auto E = estimate_cooc(fixed_traj({1, 1, 1, 1}, 2), StepWeights::uniform(1));
  CHECK(E.m(1, 1) == doctest::Approx(1.0));
  CHECK(E.m.sum() == doctest::Approx(1.0));

  CHECK(code_of([] {
          estimate_cooc(fixed_traj({0, 1}, 2), StepWeights::uniform(2));
        }) == "WindowTooLarge");
}

TEST_CASE("hash-map accumulation beyond the dense buffer limit") {
  // state spaces past 2048 take the map-then-densify path; the result must
  // match the plain dense reference on the same sequence
  const Index n = 2100;
  SplitMix64 rng(64);
  std::vector<std::int32_t> seq;
  for (int i = 0; i < 4000; ++i)
    seq.push_back(static_cast<std::int32_t>(rng.next() % n));
  auto w = StepWeights::uniform(3);
  auto C = estimate_cooc(fixed_traj(seq, n), w);
  Mat ref = oracle::cooc_of_sequence(seq, n, w);
  CHECK((C.m - ref).cwiseAbs().maxCoeff() < 1e-13);
  CHECK((C.m - C.m.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(std::abs(C.m.sum() - 1.0) < 1e-9);
}

TEST_CASE("estimator matches the sliding-window oracle on random walks") {
  auto P = StochasticMatrix::validate(diamond_walk());
  auto pi = stationary_distribution(P);
  for (int T = 1; T <= 3; ++T) {
    auto w = StepWeights::uniform(T);
    auto traj = sample_walk(P, pi, 400, 1000 + T);
    auto C = estimate_cooc(traj, w);
    Mat ref = oracle::cooc_of_sequence(traj.states, 4, w);
    CHECK((C.m - ref).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("symmetry and entry sum invariants") {
  auto P = StochasticMatrix::validate(diamond_walk());
  auto pi = stationary_distribution(P);
  auto signed_w = StepWeights::validate((Vec(3) << 0.5, -0.25, 0.25).finished());
  auto traj = sample_walk(P, pi, 5000, 77);
  auto C = estimate_cooc(traj, signed_w);
  CHECK((C.m - C.m.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(std::abs(C.m.sum() - signed_w.signed_sum()) < 1e-9);
}

TEST_CASE("asymptotic expectation") {
  Mat flat(2, 2);
  flat << 0.5, 0.5, 0.5, 0.5;
  auto P = StochasticMatrix::validate(flat);
  auto AE = asymptotic_expectation(P, stationary_distribution(P),
                                   StepWeights::uniform(1));
  CHECK(AE(0, 0) == doctest::Approx(0.25));
  CHECK(AE(0, 1) == doctest::Approx(0.25));

  auto D = StochasticMatrix::validate(diamond_walk());
  auto dpi = stationary_distribution(D);
  auto ae = asymptotic_expectation(D, dpi, StepWeights::uniform(1));
  // entry (0,1) = (pi_0 P_01 + pi_1 P_10) / 2 = (0.3/3 + 0.2/2)/2
  CHECK(ae(0, 1) == doctest::Approx(0.1).epsilon(1e-10));

  auto w = StepWeights::validate((Vec(2) << 0.75, -0.25).finished());
  auto ae2 = asymptotic_expectation(D, dpi, w);
  CHECK((ae2 - ae2.transpose()).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(std::abs(ae2.sum() - w.signed_sum()) < 1e-12);
}

TEST_CASE("per-window expectation converges to the asymptotic one") {
  // chains with enough decay headroom: by i = 10 tau the gap must be below
  // 1e-8 (needs 10 tau |ln lambda| well above ln 1e8; the diamond fixture
  // at lambda=2/3, tau=4 sits right at that edge and is checked for
  // monotone decay only)
  Mat three(3, 3);
  three << 0.2, 0.5, 0.3, 0.4, 0.1, 0.5, 0.3, 0.3, 0.4;
  const StochasticMatrix chains[] = {winning_streak(6),
                                     StochasticMatrix::validate(three)};
  for (const auto& P : chains) {
    auto pi = stationary_distribution(P);
    auto phi = ProbVector::point_mass(P.n(), 1);
    auto w = StepWeights::uniform(2);
    const Mat AE = asymptotic_expectation(P, pi, w);
    const int tau = mixing_time(P);
    Scalar prev = 1e300;
    for (Index i = 1; i <= 10 * tau; ++i) {
      const Scalar gap = (oracle::window_expected_cooc(P, phi, i, w) - AE)
                             .cwiseAbs()
                             .maxCoeff();
      CHECK(gap <= prev + 1e-15);
      prev = gap;
    }
    CHECK(prev < 1e-8);
  }

  auto D = StochasticMatrix::validate(diamond_walk());
  auto dpi = stationary_distribution(D);
  auto w = StepWeights::uniform(2);
  const Mat AE = asymptotic_expectation(D, dpi, w);
  Scalar prev = 1e300;
  for (Index i = 1; i <= 60; ++i) {
    const Scalar gap =
        (oracle::window_expected_cooc(D, ProbVector::point_mass(4, 1), i, w) -
         AE)
            .cwiseAbs()
            .maxCoeff();
    CHECK(gap <= prev + 1e-15);
    prev = gap;
  }
  CHECK(prev < 1e-8);  // i = 60 leaves (2/3)^60 ~ 3e-11 of headroom
}

TEST_CASE("exact enumeration matches the Monte-Carlo mean") {
  // small instances kept fast here; the acceptance run uses 1e5 trials
  struct Combo {
    Index n;
    int T;
    Index L;
    std::uint64_t seed;
  };
  for (const Combo combo : {Combo{2, 1, 4, 555}, Combo{3, 2, 5, 556},
                            Combo{3, 1, 6, 557}}) {
    Mat m(combo.n, combo.n);
    if (combo.n == 2)
      m << 0.3, 0.7, 0.6, 0.4;
    else
      m << 0.2, 0.5, 0.3, 0.4, 0.1, 0.5, 0.3, 0.3, 0.4;
    auto P = StochasticMatrix::validate(m);
    auto phi = ProbVector::uniform(combo.n);
    auto w = StepWeights::uniform(combo.T);
    const Mat exact = oracle::exact_expected_cooc(P, phi, combo.L, w);

    const long trials = 20000;
    Mat mean = Mat::Zero(combo.n, combo.n);
    Mat msq = Mat::Zero(combo.n, combo.n);
    for (long t = 0; t < trials; ++t) {
      auto traj = sample_walk(P, phi, combo.L, mix(combo.seed, t));
      const Mat c = estimate_cooc(traj, w).m;
      mean += c;
      msq += c.cwiseProduct(c);
    }
    mean /= static_cast<Scalar>(trials);
    msq /= static_cast<Scalar>(trials);
    for (Index i = 0; i < combo.n; ++i)
      for (Index j = 0; j < combo.n; ++j) {
        const Scalar var =
            std::max<Scalar>(0, msq(i, j) - mean(i, j) * mean(i, j));
        const Scalar se = std::sqrt(var / static_cast<Scalar>(trials));
        CHECK(std::abs(mean(i, j) - exact(i, j)) <= 3 * se + 1e-12);
      }
  }
}

TEST_CASE("error norm") {
  auto P = StochasticMatrix::validate(diamond_walk());
  auto pi = stationary_distribution(P);
  auto w = StepWeights::uniform(2);
  auto AE = asymptotic_expectation(P, pi, w);
  auto traj = sample_walk(P, pi, 2000, 9);
  auto C = estimate_cooc(traj, w);
  CHECK(error_2norm(C, C.m) == 0.0);

  CoocMatrix diag{Mat::Zero(2, 2), StepWeights::uniform(1), 0, 0, 2};
  diag.m(0, 0) = 0.1;
  diag.m(1, 1) = -0.2;
  CHECK(error_2norm(diag, Mat::Zero(2, 2)) == doctest::Approx(0.2));

  // independent dense eigensolve cross-check on a random symmetric diff
  SplitMix64 rng(31);
  Mat S(5, 5);
  for (Index i = 0; i < 5; ++i)
    for (Index j = i; j < 5; ++j) {
      S(i, j) = rng.next_u01() - 0.5;
      S(j, i) = S(i, j);
    }
  Eigen::EigenSolver<Mat> es(S);
  Scalar ref = 0;
  for (Index i = 0; i < 5; ++i)
    ref = std::max(ref, std::abs(es.eigenvalues()(i).real()));
  CoocMatrix wrap{S, StepWeights::uniform(1), 0, 0, 2};
  CHECK(std::abs(error_2norm(wrap, Mat::Zero(5, 5)) - ref) < 1e-9);

  CHECK(code_of([&] { error_2norm(C, Mat::Zero(2, 2)); }) == "ShapeMismatch");

  // error norm decreases with trajectory length (median over fixed seeds)
  std::vector<Scalar> medians;
  for (long L : {100L, 1000L, 10000L, 100000L}) {
    std::vector<Scalar> errs;
    for (long t = 0; t < 9; ++t) {
      auto tr = sample_walk(P, pi, L, mix(4242, mix(L, t)));
      errs.push_back(error_2norm(estimate_cooc(tr, w), AE));
    }
    std::sort(errs.begin(), errs.end());
    medians.push_back(errs[4]);
  }
  for (size_t i = 1; i < medians.size(); ++i) CHECK(medians[i] <= medians[i - 1]);
}

TEST_CASE("state projection") {
  Mat M(4, 4);
  SplitMix64 rng(8);
  for (Index i = 0; i < 4; ++i)
    for (Index j = 0; j < 4; ++j) M(i, j) = rng.next_u01();

  auto same = project_states(M, {0, 1, 2, 3}, 4);
  CHECK((same - M).cwiseAbs().maxCoeff() == 0.0);

  auto one = project_states(M, {0, 0, 0, 0}, 1);
  CHECK(one(0, 0) == doctest::Approx(M.sum()).epsilon(1e-15));

  // 2-2 partition: each output entry is the matching 2x2 block sum
  auto half = project_states(M, {0, 0, 1, 1}, 2);
  CHECK(half(0, 1) == doctest::Approx(M.block(0, 2, 2, 2).sum()));
  CHECK(half(1, 0) == doctest::Approx(M.block(2, 0, 2, 2).sum()));
  CHECK(half.sum() == doctest::Approx(M.sum()).epsilon(1e-15));

  CHECK(code_of([&] { project_states(M, {0, 0, 0, 2}, 3); }) ==
        "NonSurjective");
}

TEST_CASE("pmi transform") {
  CoocMatrix uniform{Mat::Constant(2, 2, 0.25), StepWeights::uniform(1), 0, 0,
                     2};
  CHECK(pmi_transform(uniform, 1.0).cwiseAbs().maxCoeff() == 0.0);
  // huge divisor truncates everything
  CHECK(pmi_transform(uniform, 1e9).cwiseAbs().maxCoeff() == 0.0);

  CoocMatrix diag{Mat::Zero(2, 2), StepWeights::uniform(1), 0, 0, 2};
  diag.m(0, 0) = 0.5;
  diag.m(1, 1) = 0.5;
  const Mat out = pmi_transform(diag, 1.0);
  CHECK(out(0, 0) == doctest::Approx(std::log(2.0)));
  CHECK(out(1, 1) == doctest::Approx(std::log(2.0)));
  CHECK(out(0, 1) == 0.0);

  CoocMatrix neg{Mat::Constant(2, 2, 0.25),
                 StepWeights::validate((Vec(2) << 0.5, -0.5).finished()), 0, 0,
                 2};
  CHECK(code_of([&] { pmi_transform(neg, 1.0); }) == "NegativeWeights");

  // zero row stays zero
  CoocMatrix hole{Mat::Zero(3, 3), StepWeights::uniform(1), 0, 0, 2};
  hole.m(1, 1) = 0.6;
  hole.m(1, 2) = 0.2;
  hole.m(2, 1) = 0.2;
  const Mat h = pmi_transform(hole, 1.0);
  for (Index j = 0; j < 3; ++j) CHECK(h(0, j) == 0.0);
}

TEST_CASE("cooc coordinate file round trip") {
  auto P = StochasticMatrix::validate(diamond_walk());
  auto pi = stationary_distribution(P);
  auto traj = sample_walk(P, pi, 300, 11);
  auto C = estimate_cooc(traj, StepWeights::uniform(2));
  std::ostringstream out;
  write_cooc(out, C);
  std::istringstream in(out.str());
  auto back = read_cooc(in);
  CHECK(back.n() == C.n());
  CHECK(back.weights.T == 2);
  CHECK(back.seed == C.seed);
  CHECK((back.m - C.m).cwiseAbs().maxCoeff() == 0.0);
}
