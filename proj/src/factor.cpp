#include "hamlab/factor.hpp"

#include "hamlab/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace hamlab {

int isolated_budget(int n) {
  if (n <= 2) return 0;
  const double l = std::log(static_cast<double>(n));
  return static_cast<int>(std::ceil(n / (l * l)));
}

Factor::Factor(int n, std::vector<std::vector<Vertex>> cycles, VertexSet isolated) : n_(n) {
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  auto claim = [&](Vertex v) {
    if (v < 0 || v >= n) throw PreconditionError("Factor: vertex " + std::to_string(v) + " out of range");
    if (seen[v]) throw PreconditionError("Factor: vertex " + std::to_string(v) + " used twice");
    seen[v] = 1;
  };
  for (auto& c : cycles) {
    if (c.size() < 3) throw PreconditionError("Factor: cycle shorter than 3");
    for (Vertex v : c) claim(v);
    c = canonical_cycle(c);
  }
  std::sort(isolated.begin(), isolated.end());
  for (Vertex v : isolated) claim(v);
  if (std::find(seen.begin(), seen.end(), 0) != seen.end())
    throw PreconditionError("Factor: vertices neither on a cycle nor isolated");
  std::sort(cycles.begin(), cycles.end());
  cycles_ = std::move(cycles);
  isolated_ = std::move(isolated);
  for (const auto& c : cycles_) {
    auto e = cycle_edges(c);
    edges_.insert(edges_.end(), e.begin(), e.end());
  }
  std::sort(edges_.begin(), edges_.end());
}

bool Factor::is_subgraph_of(const Graph& g) const {
  if (g.n() != n_) return false;
  return std::all_of(edges_.begin(), edges_.end(), [&](const Edge& e) { return g.has_edge(e.u, e.v); });
}

bool Factor::is_almost_two_factor_of(const Graph& g, int budget) const {
  return static_cast<int>(isolated_.size()) <= budget && is_subgraph_of(g);
}

CycleCover::CycleCover(int n, std::vector<Vertex> successor) : n_(n), successor_(std::move(successor)) {
  if (static_cast<int>(successor_.size()) != n) throw PreconditionError("CycleCover: successor size mismatch");
  std::vector<char> hit(static_cast<std::size_t>(n), 0);
  for (Vertex v = 0; v < n; ++v) {
    const Vertex w = successor_[v];
    if (w == -1) continue;
    if (w < 0 || w >= n || w == v) throw PreconditionError("CycleCover: bad successor");
    if (successor_[w] == -1 || hit[w]) throw PreconditionError("CycleCover: not a bijection on covered vertices");
    hit[w] = 1;
  }
  std::vector<char> done(static_cast<std::size_t>(n), 0);
  for (Vertex v = 0; v < n; ++v) {
    if (successor_[v] == -1 || done[v]) continue;
    ++s_;
    for (Vertex w = v; !done[w]; w = successor_[w]) done[w] = 1;
  }
}

VertexSet CycleCover::covered() const {
  VertexSet out;
  for (Vertex v = 0; v < n_; ++v)
    if (successor_[v] != -1) out.push_back(v);
  return out;
}

bool CycleCover::is_subgraph_of(const OrientedGraph& d) const {
  if (d.n() != n_) return false;
  for (Vertex v = 0; v < n_; ++v)
    if (successor_[v] != -1 && !d.has_arc(v, successor_[v])) return false;
  return true;
}

bool CycleCover::is_almost_one_factor_of(const OrientedGraph& d) const {
  return is_subgraph_of(d) && static_cast<int>(covered().size()) >= n_ - isolated_budget(n_);
}

Factor read_factor(std::istream& in, int n) {
  std::vector<std::vector<Vertex>> cycles;
  VertexSet isolated;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    const bool iso = tok == "i";
    std::vector<Vertex> ids;
    if (!iso) ls.seekg(0);
    long long v = 0;
    while (ls >> v) ids.push_back(static_cast<Vertex>(v));
    if (!ls.eof()) throw ParseError("factor line " + std::to_string(line_no) + ": expected vertex ids");
    if (iso)
      isolated.insert(isolated.end(), ids.begin(), ids.end());
    else
      cycles.push_back(std::move(ids));
  }
  try {
    return Factor(n, std::move(cycles), std::move(isolated));
  } catch (const PreconditionError& e) {
    throw ParseError(e.what());
  }
}

Factor read_factor_file(const std::string& path, int n) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open " + path);
  return read_factor(f, n);
}

void write_factor(std::ostream& out, const Factor& f) {
  for (const auto& c : f.cycles()) {
    for (std::size_t i = 0; i < c.size(); ++i) out << (i ? " " : "") << c[i];
    out << '\n';
  }
  if (!f.isolated().empty()) {
    out << 'i';
    for (Vertex v : f.isolated()) out << ' ' << v;
    out << '\n';
  }
}

}  // namespace hamlab
