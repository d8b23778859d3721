#include "cooclab/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <tuple>
#include <vector>

namespace cooclab {

namespace {

std::ifstream open_or_fail(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("FileNotFound", "cannot open " + path);
  return in;
}

std::string next_content_line(std::istream& in, bool skip_comments = true) {
  std::string line;
  while (std::getline(in, line)) {
    size_t pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos) continue;
    if (skip_comments && line[pos] == '#') continue;
    return line;
  }
  return {};
}

}  // namespace

std::string format_double(Scalar x) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

Mat read_matrix(std::istream& in) {
  std::string header = next_content_line(in);
  if (header.empty()) fail("ParseError", "missing matrix header line");
  std::istringstream hs(header);
  long rows = 0, cols = 0;
  if (!(hs >> rows)) fail("ParseError", "bad matrix header: " + header);
  if (!(hs >> cols)) cols = rows;
  if (rows < 1 || cols < 1) fail("ParseError", "bad matrix dimensions");
  Mat m(rows, cols);
  for (long i = 0; i < rows; ++i) {
    std::string line = next_content_line(in);
    if (line.empty()) fail("ParseError", "matrix row " + std::to_string(i) +
                                             " missing");
    std::istringstream ls(line);
    for (long j = 0; j < cols; ++j)
      if (!(ls >> m(i, j)))
        fail("ParseError", "matrix row " + std::to_string(i) + " too short");
  }
  return m;
}

Mat read_matrix_file(const std::string& path) {
  auto in = open_or_fail(path);
  return read_matrix(in);
}

void write_matrix(std::ostream& out, const Mat& m) {
  if (m.rows() == m.cols()) {
    out << m.rows() << "\n";
  } else {
    out << m.rows() << " " << m.cols() << "\n";
  }
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j)
      out << (j ? " " : "") << format_double(m(i, j));
    out << "\n";
  }
}

Vec read_vector_line(std::istream& in) {
  std::string line = next_content_line(in);
  if (line.empty()) fail("ParseError", "missing vector line");
  std::istringstream ls(line);
  std::vector<Scalar> vals;
  Scalar x;
  while (ls >> x) vals.push_back(x);
  if (vals.empty()) fail("ParseError", "empty vector line");
  Vec v(static_cast<Index>(vals.size()));
  for (Index i = 0; i < v.size(); ++i) v(i) = vals[i];
  return v;
}

void write_vector_line(std::ostream& out, const Vec& v) {
  for (Index i = 0; i < v.size(); ++i)
    out << (i ? " " : "") << format_double(v(i));
  out << "\n";
}

EdgeList read_edge_list(std::istream& in) {
  Index n = -1;
  std::vector<EdgeList::Edge> raw;
  Index max_idx = -1;
  std::string line;
  while (std::getline(in, line)) {
    size_t pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos) continue;
    if (line[pos] == '#') {
      const auto eq = line.find("n=");
      if (eq != std::string::npos) n = std::stol(line.substr(eq + 2));
      continue;
    }
    std::istringstream ls(line);
    long u, v;
    double w = 1.0;
    if (!(ls >> u >> v)) fail("ParseError", "bad edge line: " + line);
    ls >> w;
    raw.push_back({u, v, w});
    max_idx = std::max({max_idx, static_cast<Index>(u), static_cast<Index>(v)});
  }
  if (n < 0) n = max_idx + 1;
  return EdgeList::build(n, std::move(raw));
}

EdgeList read_edge_list_file(const std::string& path) {
  auto in = open_or_fail(path);
  return read_edge_list(in);
}

HmmSpec read_hmm(std::istream& in) {
  Mat hidden = read_matrix(in);
  Mat emission = read_matrix(in);
  return HmmSpec::validate(std::move(hidden), std::move(emission));
}

HmmSpec read_hmm_file(const std::string& path) {
  auto in = open_or_fail(path);
  return read_hmm(in);
}

void write_trajectory(std::ostream& out, const Trajectory& t) {
  out << "# seed=" << t.seed << " chain=" << t.chain_id << " n=" << t.n
      << " L=" << t.length() << "\n";
  for (const std::int32_t s : t.states) out << s << "\n";
}

Trajectory read_trajectory(std::istream& in) {
  Trajectory t;
  std::string line;
  while (std::getline(in, line)) {
    size_t pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos) continue;
    if (line[pos] == '#') {
      std::istringstream hs(line.substr(pos + 1));
      std::string tok;
      while (hs >> tok) {
        if (tok.rfind("seed=", 0) == 0) t.seed = std::stoull(tok.substr(5));
        if (tok.rfind("chain=", 0) == 0)
          t.chain_id = std::stoull(tok.substr(6));
        if (tok.rfind("n=", 0) == 0) t.n = std::stol(tok.substr(2));
      }
      continue;
    }
    t.states.push_back(static_cast<std::int32_t>(std::stol(line)));
  }
  if (t.states.empty()) fail("ParseError", "trajectory has no states");
  Index max_state = 0;
  for (const std::int32_t s : t.states) {
    if (s < 0) fail("ParseError", "negative state index");
    max_state = std::max<Index>(max_state, s);
  }
  if (t.n <= max_state) t.n = max_state + 1;
  return t;
}

Trajectory read_trajectory_file(const std::string& path) {
  auto in = open_or_fail(path);
  return read_trajectory(in);
}

void write_cooc(std::ostream& out, const CoocMatrix& c) {
  out << "# n=" << c.n() << " T=" << c.weights.T << " alpha=";
  for (Index r = 0; r < c.weights.alpha.size(); ++r)
    out << (r ? "," : "") << format_double(c.weights.alpha(r));
  out << " seed=" << c.seed << " chain=" << c.chain_id
      << " L=" << c.traj_length << "\n";
  write_coords(out, c.m);
}

CoocMatrix read_cooc(std::istream& in) {
  Index n = 0;
  Vec alpha;
  std::uint64_t seed = 0, chain = 0;
  Index L = 0;
  std::string line;
  std::vector<std::tuple<Index, Index, Scalar>> entries;
  while (std::getline(in, line)) {
    size_t pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos) continue;
    if (line[pos] == '#') {
      std::istringstream hs(line.substr(pos + 1));
      std::string tok;
      while (hs >> tok) {
        if (tok.rfind("n=", 0) == 0) n = std::stol(tok.substr(2));
        if (tok.rfind("seed=", 0) == 0) seed = std::stoull(tok.substr(5));
        if (tok.rfind("chain=", 0) == 0) chain = std::stoull(tok.substr(6));
        if (tok.rfind("L=", 0) == 0) L = std::stol(tok.substr(2));
        if (tok.rfind("alpha=", 0) == 0) {
          std::string list = tok.substr(6);
          std::vector<Scalar> vals;
          std::istringstream as(list);
          std::string item;
          while (std::getline(as, item, ',')) vals.push_back(std::stod(item));
          alpha.resize(static_cast<Index>(vals.size()));
          for (Index r = 0; r < alpha.size(); ++r) alpha(r) = vals[r];
        }
      }
      continue;
    }
    std::istringstream ls(line);
    long i, j;
    Scalar v;
    if (!(ls >> i >> j >> v)) fail("ParseError", "bad coordinate line: " + line);
    entries.emplace_back(i, j, v);
  }
  if (n == 0) fail("ParseError", "co-occurrence file missing n= header");
  if (alpha.size() == 0) fail("ParseError", "co-occurrence file missing alpha=");
  Mat m = Mat::Zero(n, n);
  for (const auto& [i, j, v] : entries) {
    if (i < 0 || j < 0 || i >= n || j >= n)
      fail("ParseError", "coordinate out of range");
    m(i, j) = v;
  }
  return CoocMatrix{std::move(m), StepWeights::validate(std::move(alpha)),
                    chain, seed, L};
}

CoocMatrix read_cooc_file(const std::string& path) {
  auto in = open_or_fail(path);
  return read_cooc(in);
}

void write_coords(std::ostream& out, const Mat& m) {
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j)
      if (m(i, j) != 0)
        out << i << " " << j << " " << format_double(m(i, j)) << "\n";
}

}  // namespace cooclab
