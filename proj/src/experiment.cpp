#include "cooclab/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>
#include <utility>

#include "cooclab/io.hpp"
#include "cooclab/rng.hpp"
#include "cooclab/walk.hpp"

namespace cooclab {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::istringstream in(s);
  std::string item;
  while (std::getline(in, item, sep)) parts.push_back(item);
  return parts;
}

}  // namespace

BuiltChain build_chain(const std::string& spec, bool allow_large) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos)
    fail("BadChainSpec",
         "expected kind:args (barbell:k,path | streak:n | gnp:n,p,seed | "
         "file:path | hmm:path), got '" +
             spec + "'");
  const std::string kind = spec.substr(0, colon);
  const std::string args = spec.substr(colon + 1);
  if (kind == "barbell") {
    const auto parts = split(args, ',');
    if (parts.size() != 2) fail("BadChainSpec", "barbell:k,path");
    return {spec, barbell(std::stol(parts[0]), std::stol(parts[1])), {}, 0, ""};
  }
  if (kind == "streak") {
    return {spec, winning_streak(std::stol(args)), {}, 0, ""};
  }
  if (kind == "gnp") {
    const auto parts = split(args, ',');
    if (parts.size() != 3) fail("BadChainSpec", "gnp:n,p,seed");
    GnpWalk g = erdos_renyi_walk(std::stol(parts[0]), std::stod(parts[1]),
                                 std::stoull(parts[2]));
    return {spec, std::move(g.chain), {}, 0,
            "attempts=" + std::to_string(g.attempts)};
  }
  if (kind == "file") {
    return {spec, from_edge_list(read_edge_list_file(args), allow_large),
            {}, 0, ""};
  }
  if (kind == "hmm") {
    JointChain j = hmm_joint_chain(read_hmm_file(args));
    return {spec, std::move(j.chain), std::move(j.observable_map),
            j.n_observables, ""};
  }
  if (kind == "matrix") {
    return {spec, StochasticMatrix::validate(read_matrix_file(args),
                                             allow_large),
            {}, 0, ""};
  }
  fail("BadChainSpec", "unknown chain kind '" + kind + "'");
}

PhiSpec PhiSpec::parse(const std::string& text) {
  if (text == "stationary") return {PhiKind::Stationary, 0, ""};
  if (text == "uniform") return {PhiKind::Uniform, 0, ""};
  if (text.rfind("point:", 0) == 0)
    return {PhiKind::Point, std::stol(text.substr(6)), ""};
  if (text.rfind("vec:", 0) == 0)
    return {PhiKind::File, 0, text.substr(4)};
  fail("BadPhiSpec", "expected stationary | uniform | point:<i> | vec:<path>");
}

ProbVector PhiSpec::realize(const StochasticMatrix& P,
                            const ProbVector& pi) const {
  switch (kind) {
    case PhiKind::Stationary:
      return pi;
    case PhiKind::Uniform:
      return ProbVector::uniform(P.n());
    case PhiKind::Point:
      return ProbVector::point_mass(P.n(), point);
    case PhiKind::File: {
      std::ifstream in(path);
      if (!in) fail("FileNotFound", "cannot open " + path);
      Vec v = read_vector_line(in);
      if (v.size() != P.n())
        fail("LengthMismatch", "phi file length != chain size");
      return ProbVector::validate(std::move(v));
    }
  }
  fail("BadPhiSpec", "unreachable");
}

std::string PhiSpec::label() const {
  switch (kind) {
    case PhiKind::Stationary:
      return "stationary";
    case PhiKind::Uniform:
      return "uniform";
    case PhiKind::Point:
      return "point:" + std::to_string(point);
    case PhiKind::File:
      return "vec:" + path;
  }
  return "?";
}

std::vector<ExperimentRecord> run_convergence(const ExperimentSpec& spec) {
  if (spec.trials < 1) fail("ArgOutOfRange", "trials must be >= 1");
  if (spec.L_grid.empty()) fail("ArgOutOfRange", "empty L grid");
  for (size_t i = 0; i < spec.L_grid.size(); ++i) {
    if (spec.L_grid[i] <= spec.weights.T)
      fail("WindowTooLarge", "every grid length must exceed T");
    if (i > 0 && spec.L_grid[i] <= spec.L_grid[i - 1])
      fail("ArgOutOfRange", "L grid must be strictly increasing");
  }

  const StochasticMatrix& P = spec.chain.P;
  const ProbVector pi = stationary_distribution(P);
  const ProbVector phi = spec.phi.realize(P, pi);
  const Mat AE = asymptotic_expectation(P, pi, spec.weights);
  const std::uint64_t chain_seed = mix(spec.base_seed, P.content_hash());

  const long total = static_cast<long>(spec.L_grid.size()) * spec.trials;
  std::vector<ExperimentRecord> records(total);
  const auto run_one = [&](long slot) {
    const long li = slot / spec.trials;
    const int trial = static_cast<int>(slot % spec.trials);
    const long L = spec.L_grid[li];
    const std::uint64_t seed =
        mix(mix(chain_seed, static_cast<std::uint64_t>(L)),
            static_cast<std::uint64_t>(trial));
    const Trajectory traj = sample_walk(P, phi, L, seed);
    const CoocMatrix C = estimate_cooc(traj, spec.weights);
    records[slot] = {spec.chain.label, P.n(), spec.weights.T, L,
                     trial,            seed,  error_2norm(C, AE)};
  };

  if (spec.threads <= 1) {
    for (long slot = 0; slot < total; ++slot) run_one(slot);
  } else {
    std::atomic<long> cursor{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < spec.threads; ++w)
      pool.emplace_back([&] {
        for (long s = cursor.fetch_add(1); s < total; s = cursor.fetch_add(1))
          run_one(s);
      });
    for (auto& th : pool) th.join();
  }
  return records;
}

namespace {

Scalar quantile_sorted(const std::vector<Scalar>& v, Scalar q) {
  const Scalar pos = q * static_cast<Scalar>(v.size() - 1);
  const size_t lo = static_cast<size_t>(pos);
  if (lo + 1 >= v.size()) return v.back();
  const Scalar frac = pos - static_cast<Scalar>(lo);
  return v[lo] + frac * (v[lo + 1] - v[lo]);
}

}  // namespace

std::vector<SummaryRow> summarize(
    const std::vector<ExperimentRecord>& records) {
  if (records.empty()) fail("Empty", "no records to summarize");
  std::vector<ExperimentRecord> sorted = records;
  std::sort(sorted.begin(), sorted.end(),
            [](const ExperimentRecord& a, const ExperimentRecord& b) {
              if (a.chain != b.chain) return a.chain < b.chain;
              if (a.L != b.L) return a.L < b.L;
              return a.trial < b.trial;
            });
  std::vector<SummaryRow> rows;
  size_t i = 0;
  while (i < sorted.size()) {
    size_t j = i;
    std::vector<Scalar> errs;
    while (j < sorted.size() && sorted[j].chain == sorted[i].chain &&
           sorted[j].L == sorted[i].L) {
      errs.push_back(sorted[j].error);
      ++j;
    }
    std::sort(errs.begin(), errs.end());
    rows.push_back({sorted[i].chain, sorted[i].L, quantile_sorted(errs, 0.5),
                    quantile_sorted(errs, 0.25), quantile_sorted(errs, 0.75),
                    static_cast<int>(errs.size())});
    i = j;
  }
  return rows;
}

Scalar fit_loglog_slope(const std::vector<SummaryRow>& rows) {
  std::vector<std::pair<Scalar, Scalar>> pts;
  for (const SummaryRow& r : rows) {
    if (r.median <= 0) continue;
    pts.emplace_back(std::log(static_cast<Scalar>(r.L)), std::log(r.median));
  }
  // distinct L values
  std::vector<Scalar> xs;
  for (const auto& [x, y] : pts) xs.push_back(x);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  if (xs.size() < 3)
    fail("DegenerateInput",
         "slope fit needs >= 3 distinct grid lengths with positive medians");
  Scalar sx = 0, sy = 0, sxx = 0, sxy = 0;
  const Scalar m = static_cast<Scalar>(pts.size());
  for (const auto& [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

std::string records_to_csv(const std::vector<ExperimentRecord>& records) {
  std::string out = "chain,n,T,L,trial,seed,error_2norm\n";
  for (const ExperimentRecord& r : records) {
    out += r.chain;
    out += ',';
    out += std::to_string(r.n);
    out += ',';
    out += std::to_string(r.T);
    out += ',';
    out += std::to_string(r.L);
    out += ',';
    out += std::to_string(r.trial);
    out += ',';
    out += std::to_string(r.seed);
    out += ',';
    out += format_double(r.error);
    out += '\n';
  }
  return out;
}

std::string summary_to_csv(const std::vector<SummaryRow>& rows) {
  // quartile band: q25/q75 are the error bars
  std::string out = "chain,L,median,q25,q75,count\n";
  for (const SummaryRow& r : rows) {
    out += r.chain;
    out += ',';
    out += std::to_string(r.L);
    out += ',';
    out += format_double(r.median);
    out += ',';
    out += format_double(r.q25);
    out += ',';
    out += format_double(r.q75);
    out += ',';
    out += std::to_string(r.count);
    out += '\n';
  }
  return out;
}

}  // namespace cooclab
