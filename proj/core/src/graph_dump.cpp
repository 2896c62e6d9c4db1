#include "smixup/graph_dump.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace smixup {

namespace {

void put(std::ostream& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, " %.17g", v);
  out << buf;
}

void expect_bar(std::istream& in, std::size_t line) {
  std::string bar;
  if (!(in >> bar) || bar != "|") throw std::runtime_error("graph dump line " + std::to_string(line) + ": expected '|'");
}

}  // namespace

void write_graph_dump(std::ostream& out, const std::vector<Graph>& graphs) {
  for (const Graph& g : graphs) {
    out << g.num_nodes() << ' ' << g.feature_dim() << ' ' << g.num_classes() << " |";
    for (Index i = 0; i < g.adjacency.size(); ++i) put(out, g.adjacency.data()[i]);
    out << " |";
    for (Index i = 0; i < g.features.size(); ++i) put(out, g.features.data()[i]);
    out << " |";
    for (Index i = 0; i < g.label.size(); ++i) put(out, g.label(i));
    out << '\n';
  }
}

std::vector<Graph> read_graph_dump(std::istream& in) {
  std::vector<Graph> graphs;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream fields(text);
    long n = 0;
    long d = 0;
    long c = 0;
    if (!(fields >> n >> d >> c) || n < 1 || d < 0 || c < 1) {
      throw std::runtime_error("graph dump line " + std::to_string(line) + ": bad header");
    }
    Graph g;
    g.adjacency.resize(n, n);
    g.features.resize(n, d);
    g.label.resize(c);
    auto read_block = [&](double* dst, long count) {
      expect_bar(fields, line);
      for (long k = 0; k < count; ++k) {
        if (!(fields >> dst[k])) throw std::runtime_error("graph dump line " + std::to_string(line) + ": short record");
      }
    };
    read_block(g.adjacency.data(), n * n);
    read_block(g.features.data(), n * d);
    read_block(g.label.data(), c);
    graphs.push_back(std::move(g));
  }
  return graphs;
}

}  // namespace smixup
