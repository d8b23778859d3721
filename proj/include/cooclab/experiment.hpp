#ifndef COOCLAB_EXPERIMENT_HPP
#define COOCLAB_EXPERIMENT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "cooclab/cooccurrence.hpp"
#include "cooclab/markov.hpp"
#include "cooclab/types.hpp"

namespace cooclab {

// Chain spec mini-language:
//   barbell:k,path   streak:n   gnp:n,p,seed   file:path   hmm:path
//   matrix:path (transition-matrix text format)
struct BuiltChain {
  std::string label;
  StochasticMatrix P;
  // set for hmm: chains, empty otherwise
  std::vector<Index> observable_map;
  Index n_observables = 0;
  std::string note;  // e.g. G(n,p) resampling attempts
};

BuiltChain build_chain(const std::string& spec, bool allow_large = false);

enum class PhiKind { Stationary, Uniform, Point, File };

struct PhiSpec {
  PhiKind kind = PhiKind::Stationary;
  Index point = 0;
  std::string path;  // probability-vector text file for vec:<path>

  // "stationary" | "uniform" | "point:<i>" | "vec:<path>"
  static PhiSpec parse(const std::string& text);
  ProbVector realize(const StochasticMatrix& P, const ProbVector& pi) const;
  std::string label() const;
};

struct ExperimentSpec {
  BuiltChain chain;
  StepWeights weights;
  std::vector<long> L_grid;
  int trials = 64;
  std::uint64_t base_seed = 42;
  PhiSpec phi;
  int threads = 1;
};

struct ExperimentRecord {
  std::string chain;
  Index n = 0;
  int T = 0;
  long L = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  Scalar error = 0;  // ||C - AE||_2
};

// One record per (L, trial). Trial seeds are
// mix(mix(mix(base_seed, chain_hash), L), trial), so the records are
// identical for any worker count.
std::vector<ExperimentRecord> run_convergence(const ExperimentSpec& spec);

struct SummaryRow {
  std::string chain;
  long L = 0;
  Scalar median = 0;
  Scalar q25 = 0;
  Scalar q75 = 0;
  int count = 0;
};

// Per-(chain, L) medians and quartile band, linear interpolation.
std::vector<SummaryRow> summarize(const std::vector<ExperimentRecord>& records);

// Least-squares slope of ln(median error) against ln(L).
Scalar fit_loglog_slope(const std::vector<SummaryRow>& rows);

// CSV bodies, `\n` line endings, shortest round-trip decimals.
std::string records_to_csv(const std::vector<ExperimentRecord>& records);
std::string summary_to_csv(const std::vector<SummaryRow>& rows);

}  // namespace cooclab

#endif
