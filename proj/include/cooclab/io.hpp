#ifndef COOCLAB_IO_HPP
#define COOCLAB_IO_HPP

#include <iosfwd>
#include <string>

#include "cooclab/chains.hpp"
#include "cooclab/cooccurrence.hpp"
#include "cooclab/markov.hpp"
#include "cooclab/walk.hpp"

namespace cooclab {

// Shortest decimal that round-trips the exact double.
std::string format_double(Scalar x);

// Transition-matrix text format: first line `n`, then n rows of n decimals.
// (General matrix blocks may carry `rows cols` on the first line; square
// blocks are written with the single integer.)
Mat read_matrix(std::istream& in);
Mat read_matrix_file(const std::string& path);
void write_matrix(std::ostream& out, const Mat& m);

// Probability-vector format: one line of n decimals.
Vec read_vector_line(std::istream& in);
void write_vector_line(std::ostream& out, const Vec& v);

// Edge list: optional `# n=<int>` header, then `u v [w]` per line
// (w defaults to 1); blank lines and other `#` comments are skipped.
EdgeList read_edge_list(std::istream& in);
EdgeList read_edge_list_file(const std::string& path);

// HMM file: hidden-transition block, blank line, emission block.
HmmSpec read_hmm(std::istream& in);
HmmSpec read_hmm_file(const std::string& path);

// Trajectory dump: header comments with seed, chain hash, n, L; then one
// state index per line.
void write_trajectory(std::ostream& out, const Trajectory& t);
Trajectory read_trajectory(std::istream& in);
Trajectory read_trajectory_file(const std::string& path);

// Co-occurrence coordinate format: `# n=... T=... alpha=... seed=...`
// header, then `i j value` for nonzeros.
void write_cooc(std::ostream& out, const CoocMatrix& c);
CoocMatrix read_cooc(std::istream& in);
CoocMatrix read_cooc_file(const std::string& path);

// Coordinate export for a plain matrix (same body format, lighter header).
void write_coords(std::ostream& out, const Mat& m);

}  // namespace cooclab

#endif
