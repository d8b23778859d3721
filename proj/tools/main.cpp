#include <CLI11.hpp>

#include <bit>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cooclab/bounds.hpp"
#include "cooclab/chains.hpp"
#include "cooclab/cooccurrence.hpp"
#include "cooclab/experiment.hpp"
#include "cooclab/io.hpp"
#include "cooclab/markov.hpp"
#include "cooclab/rng.hpp"
#include "cooclab/walk.hpp"
#include "cooclab/window_chain.hpp"

using namespace cooclab;

namespace {

StepWeights weights_from(int T, const std::string& alpha_csv) {
  if (alpha_csv.empty()) return StepWeights::uniform(T);
  std::vector<Scalar> vals;
  std::istringstream in(alpha_csv);
  std::string item;
  while (std::getline(in, item, ',')) vals.push_back(std::stod(item));
  Vec alpha(static_cast<Index>(vals.size()));
  for (Index i = 0; i < alpha.size(); ++i) alpha(i) = vals[i];
  return StepWeights::validate(std::move(alpha));
}

std::vector<long> grid_from(const std::string& csv) {
  std::vector<long> grid;
  std::istringstream in(csv);
  std::string item;
  while (std::getline(in, item, ',')) grid.push_back(std::stol(item));
  return grid;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) fail("FileNotFound", "cannot write " + out_path);
  out << text;
}

int default_threads() {
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "co-occurrence matrices of Markov chains: estimators, induced "
      "window chains, tail bounds, convergence experiments"};
  app.require_subcommand(1);

  std::string chain_spec, out_path, summary_path, alpha_csv, phi_text =
      "stationary";
  bool allow_large = false;
  int threads = default_threads();

  // analyze
  auto* analyze = app.add_subcommand(
      "analyze", "chain summary: n, pi, spectral expansion, mixing time");
  double an_delta = 0.125;
  long an_tmax = 100000;
  bool no_mixing = false;
  std::string dump_matrix_path, dump_pi_path;
  analyze->add_option("chain", chain_spec)->required();
  analyze->add_option("--delta", an_delta, "mixing tolerance");
  analyze->add_option("--tmax", an_tmax, "mixing-time step cap");
  analyze->add_flag("--no-mixing", no_mixing, "skip the mixing-time scan");
  analyze->add_option("--dump-matrix", dump_matrix_path,
                      "write the transition matrix in text format");
  analyze->add_option("--dump-pi", dump_pi_path,
                      "write the stationary distribution as one line");
  analyze->add_flag("--allow-large", allow_large,
                    "accept chains beyond 5000 states (dense memory!)");

  // sample
  auto* sample = app.add_subcommand("sample", "write one seeded trajectory");
  long sm_len = 1000;
  std::uint64_t sm_seed = 42;
  sample->add_option("chain", chain_spec)->required();
  sample->add_option("--len", sm_len, "walk length")->required();
  sample->add_option("--seed", sm_seed, "walk seed")->required();
  sample->add_option("--phi", phi_text, "stationary | uniform | point:<i>");
  sample->add_option("--out", out_path, "output file (default stdout)");
  sample->add_flag("--allow-large", allow_large);

  // estimate
  auto* estimate = app.add_subcommand(
      "estimate",
      "co-occurrence matrix of a chain walk or a trajectory file "
      "(traj:<path>)");
  int es_T = 2;
  long es_len = 10000;
  std::uint64_t es_seed = 42;
  estimate->add_option("source", chain_spec, "chain spec or traj:<path>")
      ->required();
  estimate->add_option("--T", es_T, "window size");
  estimate->add_option("--alpha", alpha_csv,
                       "comma-separated step weights (default uniform)");
  std::string ae_path;
  bool project_observables = false;
  estimate->add_option("--len", es_len, "walk length when sampling a chain");
  estimate->add_option("--seed", es_seed, "walk seed when sampling a chain");
  estimate->add_option("--phi", phi_text);
  estimate->add_option("--out", out_path);
  estimate->add_option("--ae", ae_path,
                       "also write the asymptotic expectation (chains only)");
  estimate->add_flag("--project-observables", project_observables,
                     "for hmm chains, merge joint states by observable");
  estimate->add_flag("--allow-large", allow_large);

  // converge
  auto* converge = app.add_subcommand(
      "converge", "error vs trajectory length experiment (CSV)");
  std::string grid_csv = "10,100,1000,10000,100000,1000000";
  int cv_T = 2, cv_trials = 64;
  std::uint64_t cv_seed = 42;
  bool big_L = false, print_slope = false;
  converge->add_option("chain", chain_spec)->required();
  converge->add_option("--grid", grid_csv, "comma-separated lengths");
  converge->add_option("--trials", cv_trials, "trials per length");
  converge->add_option("--T", cv_T, "window size");
  converge->add_option("--alpha", alpha_csv);
  converge->add_option("--seed", cv_seed, "base seed");
  converge->add_option("--phi", phi_text);
  converge->add_option("--threads", threads, "worker count");
  converge->add_option("--out", out_path, "records CSV path");
  converge->add_option("--summary", summary_path,
                       "write per-L median/quartile CSV here");
  converge->add_flag("--slope", print_slope,
                     "print the log-log slope of the medians");
  converge->add_flag("--big-L", big_L, "allow grid lengths beyond 1e6");
  converge->add_flag("--allow-large", allow_large);

  // bound
  auto* bound = app.add_subcommand("bound", "closed-form tail bounds");
  std::string bd_kind = "cooc";
  long bd_n = 2, bd_T = 1, bd_tau = 1, bd_L = 1000, bd_k = 1000, bd_d = 2;
  double bd_eps = 0.1, bd_lambda = 0.5, bd_phi_norm = 1.0;
  bool bd_complex = false;
  bound->add_option("--kind", bd_kind, "cooc | chernoff");
  bound->add_option("--n", bd_n, "state count (cooc)");
  bound->add_option("--T", bd_T, "window size (cooc)");
  bound->add_option("--tau", bd_tau, "mixing time (cooc)");
  bound->add_option("--L", bd_L, "trajectory length (cooc)");
  bound->add_option("--k", bd_k, "walk length (chernoff)");
  bound->add_option("--d", bd_d, "matrix dimension (chernoff)");
  bound->add_option("--eps", bd_eps, "error threshold");
  bound->add_option("--lambda", bd_lambda, "spectral expansion (chernoff)");
  bound->add_option("--phi-norm", bd_phi_norm, "||phi||_pi");
  bound->add_flag("--complex", bd_complex, "Hermitian case (prefactor 4)");

  // advise
  auto* advise = app.add_subcommand(
      "advise", "trajectory length with explicit constants");
  long ad_n = 2, ad_T = 1, ad_tau = 1;
  double ad_eps = 0.1;
  advise->add_option("--n", ad_n)->required();
  advise->add_option("--T", ad_T)->required();
  advise->add_option("--tau", ad_tau)->required();
  advise->add_option("--eps", ad_eps)->required();

  // verify
  auto* verify = app.add_subcommand(
      "verify", "window-chain construction checks for one chain");
  int vf_T = 1;
  double vf_delta = 0.125;
  verify->add_option("chain", chain_spec)->required();
  verify->add_option("--T", vf_T, "window size");
  verify->add_option("--alpha", alpha_csv);
  verify->add_option("--delta", vf_delta, "mixing tolerance");
  verify->add_option("--phi", phi_text);
  verify->add_flag("--allow-large", allow_large);

  // chernoff-mc
  auto* mc = app.add_subcommand(
      "chernoff-mc", "empirical eigenvalue tails vs the closed-form bound");
  std::string k_grid_csv = "100,1000,10000", eps_grid_csv = "0.1,0.2,0.4";
  long mc_d = 2, mc_trials = 2000;
  std::uint64_t mc_seed = 7, mc_fseed = 12;
  mc->add_option("chain", chain_spec)->required();
  mc->add_option("--d", mc_d, "matrix dimension");
  mc->add_option("--k-grid", k_grid_csv, "walk lengths");
  mc->add_option("--eps-grid", eps_grid_csv, "thresholds");
  mc->add_option("--trials", mc_trials, "trials per grid point");
  mc->add_option("--seed", mc_seed, "trial seed base");
  mc->add_option("--fseed", mc_fseed, "matrix-function seed");
  mc->add_option("--phi", phi_text);
  mc->add_option("--threads", threads);
  mc->add_option("--out", out_path);
  mc->add_flag("--allow-large", allow_large);

  // pmi
  auto* pmi = app.add_subcommand(
      "pmi", "truncated PMI transform of a co-occurrence coordinate file");
  std::string pmi_in;
  double pmi_b = 1.0;
  pmi->add_option("cooc", pmi_in, "co-occurrence coordinate file")->required();
  pmi->add_option("--b", pmi_b, "negative-sampling divisor");
  pmi->add_option("--out", out_path);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*analyze) {
      BuiltChain c = build_chain(chain_spec, allow_large);
      const auto reg = regularity_check(c.P);
      std::cout << "chain " << c.label << "\n";
      if (!c.note.empty()) std::cout << "note " << c.note << "\n";
      std::cout << "n " << c.P.n() << "\n";
      std::cout << "irreducible " << (reg.irreducible ? "yes" : "no") << "\n";
      std::cout << "period " << reg.period << "\n";
      std::cout << "regular " << (reg.regular ? "yes" : "no") << "\n";
      if (!dump_matrix_path.empty()) {
        std::ostringstream buf;
        write_matrix(buf, c.P.matrix());
        emit(buf.str(), dump_matrix_path);
      }
      if (reg.regular) {
        const ProbVector pi = stationary_distribution(c.P);
        if (!dump_pi_path.empty()) {
          std::ostringstream buf;
          write_vector_line(buf, pi.vec());
          emit(buf.str(), dump_pi_path);
        }
        std::cout << "pi_min " << format_double(pi.vec().minCoeff()) << "\n";
        std::cout << "pi_max " << format_double(pi.vec().maxCoeff()) << "\n";
        const Scalar lambda = spectral_expansion(c.P, pi);
        std::cout << "lambda " << format_double(lambda) << "\n";
        std::cout << "gap " << format_double(1 - lambda) << "\n";
        std::cout << "reversible " << (is_reversible(c.P, pi) ? "yes" : "no")
                  << "\n";
        if (!no_mixing) {
          const int tau =
              mixing_time(c.P, an_delta, static_cast<int>(an_tmax));
          std::cout << "delta " << format_double(an_delta) << "\n";
          std::cout << "mixing_time " << tau << "\n";
        }
      }
      return 0;
    }

    if (*sample) {
      BuiltChain c = build_chain(chain_spec, allow_large);
      const ProbVector pi = stationary_distribution(c.P);
      const ProbVector phi = PhiSpec::parse(phi_text).realize(c.P, pi);
      const Trajectory t = sample_walk(c.P, phi, sm_len, sm_seed);
      std::ostringstream buf;
      write_trajectory(buf, t);
      emit(buf.str(), out_path);
      return 0;
    }

    if (*estimate) {
      const StepWeights w = weights_from(es_T, alpha_csv);
      if (chain_spec.rfind("traj:", 0) == 0) {
        if (!ae_path.empty() || project_observables)
          fail("BadChainSpec",
               "--ae and --project-observables need a chain, not a "
               "trajectory file");
        const Trajectory t = read_trajectory_file(chain_spec.substr(5));
        std::ostringstream buf;
        write_cooc(buf, estimate_cooc(t, w));
        emit(buf.str(), out_path);
        return 0;
      }
      BuiltChain c = build_chain(chain_spec, allow_large);
      if (project_observables && c.observable_map.empty())
        fail("BadChainSpec", "--project-observables needs an hmm: chain");
      const ProbVector pi = stationary_distribution(c.P);
      const ProbVector phi = PhiSpec::parse(phi_text).realize(c.P, pi);
      const Trajectory t = sample_walk(c.P, phi, es_len, es_seed);
      CoocMatrix C = estimate_cooc(t, w);
      Mat AE;
      if (!ae_path.empty() || project_observables)
        AE = asymptotic_expectation(c.P, pi, w);
      if (project_observables) {
        C.m = project_states(C.m, c.observable_map, c.n_observables);
        if (!ae_path.empty())
          AE = project_states(AE, c.observable_map, c.n_observables);
      }
      std::ostringstream buf;
      write_cooc(buf, C);
      emit(buf.str(), out_path);
      if (!ae_path.empty()) {
        std::ostringstream ae_buf;
        ae_buf << "# n=" << AE.rows() << " T=" << w.T << " alpha=";
        for (Index r = 0; r < w.alpha.size(); ++r)
          ae_buf << (r ? "," : "") << format_double(w.alpha(r));
        ae_buf << " seed=" << t.seed << " chain=" << t.chain_id << "\n";
        write_coords(ae_buf, AE);
        emit(ae_buf.str(), ae_path);
      }
      return 0;
    }

    if (*converge) {
      ExperimentSpec spec{build_chain(chain_spec, allow_large),
                          weights_from(cv_T, alpha_csv),
                          grid_from(grid_csv),
                          cv_trials,
                          cv_seed,
                          PhiSpec::parse(phi_text),
                          threads};
      for (long L : spec.L_grid)
        if (L > 1000000 && !big_L)
          fail("ArgOutOfRange",
               "grid length beyond 1e6; pass --big-L to accept the runtime");
      const auto records = run_convergence(spec);
      emit(records_to_csv(records), out_path);
      const auto rows = summarize(records);
      if (!summary_path.empty()) emit(summary_to_csv(rows), summary_path);
      if (print_slope)
        std::cout << "slope " << format_double(fit_loglog_slope(rows)) << "\n";
      return 0;
    }

    if (*bound) {
      if (bd_kind == "cooc") {
        std::cout << format_double(cooc_bound(bd_n, static_cast<int>(bd_T),
                                              static_cast<int>(bd_tau), bd_L,
                                              bd_eps, bd_phi_norm))
                  << "\n";
      } else if (bd_kind == "chernoff") {
        std::cout << format_double(matrix_chernoff_bound(
                         bd_k, bd_d, bd_eps, bd_lambda, bd_phi_norm,
                         bd_complex))
                  << "\n";
      } else {
        fail("ArgOutOfRange", "--kind must be cooc or chernoff");
      }
      return 0;
    }

    if (*advise) {
      std::cout << recommended_length(ad_n, static_cast<int>(ad_T),
                                      static_cast<int>(ad_tau), ad_eps)
                << "\n";
      return 0;
    }

    if (*verify) {
      BuiltChain c = build_chain(chain_spec, allow_large);
      const ProbVector pi = stationary_distribution(c.P);
      const ProbVector phi = PhiSpec::parse(phi_text).realize(c.P, pi);
      const StepWeights w = weights_from(vf_T, alpha_csv);
      const VerificationReport rep =
          verify_window_chain(c.P, phi, vf_T, w, vf_delta);
      for (const auto& chk : rep.checks) {
        std::ostringstream line;
        line << (chk.advisory ? "NOTE " : (chk.pass ? "PASS " : "FAIL "))
             << chk.name;
        std::cout << line.str();
        for (size_t i = line.str().size(); i < 34; ++i) std::cout << ' ';
        std::cout << " measured " << format_double(chk.measured)
                  << "  tolerance " << format_double(chk.tolerance) << "\n";
      }
      std::cout << "---\n";
      for (const auto& chk : rep.checks)
        std::cout << chk.name << "="
                  << (chk.advisory ? (chk.pass ? "note-pass" : "note-exceeded")
                                   : (chk.pass ? "pass" : "fail"))
                  << " measured=" << format_double(chk.measured)
                  << " tolerance=" << format_double(chk.tolerance) << "\n";
      return rep.all_pass() ? 0 : 1;
    }

    if (*mc) {
      BuiltChain c = build_chain(chain_spec, allow_large);
      const ProbVector pi = stationary_distribution(c.P);
      const ProbVector phi = PhiSpec::parse(phi_text).realize(c.P, pi);
      const Scalar lambda = spectral_expansion(c.P, pi);
      const Scalar phi_norm = pi_norm(phi.vec(), pi);
      const MatrixFunction f = make_centered_function(c.P, pi, mc_d, mc_fseed);
      std::string csv = "k,eps,p_hat,ci_halfwidth,bound\n";
      for (long k : grid_from(k_grid_csv)) {
        std::istringstream es(eps_grid_csv);
        std::string item;
        while (std::getline(es, item, ',')) {
          const Scalar eps = std::stod(item);
          // per-point seed from the grid values, not the grid position
          const std::uint64_t point_seed =
              mix(mc_seed, mix(static_cast<std::uint64_t>(k),
                               std::bit_cast<std::uint64_t>(eps)));
          const TailEstimate est =
              empirical_tail(c.P, phi, f, k, eps, mc_trials, point_seed,
                             threads);
          const Scalar b =
              matrix_chernoff_bound(k, mc_d, eps, lambda, phi_norm, false);
          csv += std::to_string(k) + "," + item + "," +
                 format_double(est.p_hat) + "," +
                 format_double(est.wilson_halfwidth) + "," + format_double(b) +
                 "\n";
        }
      }
      emit(csv, out_path);
      return 0;
    }

    if (*pmi) {
      const CoocMatrix C = read_cooc_file(pmi_in);
      const Mat out = pmi_transform(C, pmi_b);
      std::ostringstream buf;
      buf << "# n=" << C.n() << " b=" << format_double(pmi_b) << "\n";
      write_coords(buf, out);
      emit(buf.str(), out_path);
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
