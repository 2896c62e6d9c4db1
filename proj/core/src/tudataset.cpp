#include "smixup/tudataset.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string_view>
#include <vector>

namespace smixup {

namespace fs = std::filesystem;

ParseError::ParseError(const fs::path& file, std::size_t line, const std::string& what)
    : std::runtime_error(file.filename().string() + ":" + std::to_string(line) + ": " + what),
      file_(file),
      line_(line) {}

namespace {

struct Line {
  std::size_t number;
  std::string text;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<Line> read_lines(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw ParseError(file, 0, "cannot open file");
  std::vector<Line> lines;
  std::string text;
  std::size_t number = 0;
  while (std::getline(in, text)) {
    ++number;
    if (trim(text).empty()) continue;
    lines.push_back({number, std::string(trim(text))});
  }
  return lines;
}

std::vector<std::string_view> split_commas(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = s.find(',', start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

long long parse_int(std::string_view s, const fs::path& file, std::size_t line) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError(file, line, "expected an integer, got '" + std::string(s) + "'");
  }
  return v;
}

double parse_real(std::string_view s, const fs::path& file, std::size_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError(file, line, "expected a real number, got '" + std::string(s) + "'");
  }
  return v;
}

fs::path member(const fs::path& dir, const std::string& name, const char* suffix) {
  return dir / (name + suffix);
}

}  // namespace

GraphDataset load_tudataset(const fs::path& directory, const std::string& name) {
  const fs::path a_file = member(directory, name, "_A.txt");
  const fs::path ind_file = member(directory, name, "_graph_indicator.txt");
  const fs::path label_file = member(directory, name, "_graph_labels.txt");
  const fs::path attr_file = member(directory, name, "_node_attributes.txt");
  const fs::path nlabel_file = member(directory, name, "_node_labels.txt");
  for (const fs::path& f : {a_file, ind_file, label_file}) {
    if (!fs::exists(f)) throw ParseError(f, 0, "missing mandatory file");
  }

  // Graph labels first: they fix the number of graphs.
  std::vector<long long> raw_labels;
  for (const Line& l : read_lines(label_file)) raw_labels.push_back(parse_int(l.text, label_file, l.number));
  if (raw_labels.empty()) throw ParseError(label_file, 0, "no graphs");
  const auto num_graphs = static_cast<long long>(raw_labels.size());

  std::vector<int> node_graph;   // 0-based graph per global node
  std::vector<int> node_local;   // position within its graph
  std::vector<int> graph_sizes(static_cast<std::size_t>(num_graphs), 0);
  for (const Line& l : read_lines(ind_file)) {
    const long long gid = parse_int(l.text, ind_file, l.number);
    if (gid < 1 || gid > num_graphs) {
      throw ParseError(ind_file, l.number,
                       "graph id " + std::to_string(gid) + " has no entry in " + label_file.filename().string() +
                           " (" + std::to_string(num_graphs) + " graphs)");
    }
    const auto g = static_cast<std::size_t>(gid - 1);
    node_graph.push_back(static_cast<int>(g));
    node_local.push_back(graph_sizes[g]++);
  }
  const auto num_nodes = static_cast<long long>(node_graph.size());
  for (std::size_t g = 0; g < graph_sizes.size(); ++g) {
    if (graph_sizes[g] == 0) throw ParseError(ind_file, 0, "graph " + std::to_string(g + 1) + " has no nodes");
  }

  // Optional node attributes.
  std::optional<Matrix> attributes;
  if (fs::exists(attr_file)) {
    const auto lines = read_lines(attr_file);
    if (static_cast<long long>(lines.size()) != num_nodes) {
      throw ParseError(attr_file, lines.empty() ? 0 : lines.back().number,
                       "expected " + std::to_string(num_nodes) + " attribute rows, found " +
                           std::to_string(lines.size()));
    }
    Index width = -1;
    for (std::size_t k = 0; k < lines.size(); ++k) {
      const auto fields = split_commas(lines[k].text);
      if (width < 0) {
        width = static_cast<Index>(fields.size());
        attributes = Matrix(num_nodes, width);
      } else if (static_cast<Index>(fields.size()) != width) {
        throw ParseError(attr_file, lines[k].number,
                         "ragged attribute row: " + std::to_string(fields.size()) + " values, expected " +
                             std::to_string(width));
      }
      for (Index c = 0; c < width; ++c) {
        (*attributes)(static_cast<Index>(k), c) = parse_real(fields[static_cast<std::size_t>(c)], attr_file, lines[k].number);
      }
    }
  }

  // Optional integer node labels, one-hot over their sorted distinct values.
  std::optional<Matrix> label_block;
  if (fs::exists(nlabel_file)) {
    const auto lines = read_lines(nlabel_file);
    if (static_cast<long long>(lines.size()) != num_nodes) {
      throw ParseError(nlabel_file, lines.empty() ? 0 : lines.back().number,
                       "expected " + std::to_string(num_nodes) + " node labels, found " +
                           std::to_string(lines.size()));
    }
    std::vector<long long> values;
    values.reserve(lines.size());
    for (const Line& l : lines) {
      const auto fields = split_commas(l.text);
      values.push_back(parse_int(fields.front(), nlabel_file, l.number));
    }
    std::set<long long> distinct(values.begin(), values.end());
    std::map<long long, Index> slot;
    for (long long v : distinct) slot.emplace(v, static_cast<Index>(slot.size()));
    label_block = Matrix::Zero(num_nodes, static_cast<Index>(distinct.size()));
    for (std::size_t k = 0; k < values.size(); ++k) (*label_block)(static_cast<Index>(k), slot[values[k]]) = 1.0;
  }

  const Index feature_dim = (attributes ? attributes->cols() : 0) + (label_block ? label_block->cols() : 0);

  std::set<long long> distinct_labels(raw_labels.begin(), raw_labels.end());
  std::map<long long, int> class_of;
  for (long long v : distinct_labels) class_of.emplace(v, static_cast<int>(class_of.size()));

  GraphDataset ds;
  ds.name = name;
  ds.num_classes = static_cast<int>(distinct_labels.size());
  ds.feature_dim = static_cast<int>(feature_dim);
  ds.graphs.resize(static_cast<std::size_t>(num_graphs));
  for (std::size_t g = 0; g < ds.graphs.size(); ++g) {
    Graph& graph = ds.graphs[g];
    graph.adjacency = Matrix::Zero(graph_sizes[g], graph_sizes[g]);
    graph.features = Matrix::Zero(graph_sizes[g], feature_dim);
    graph.label = one_hot(class_of[raw_labels[g]], ds.num_classes);
  }
  for (long long k = 0; k < num_nodes; ++k) {
    Graph& graph = ds.graphs[static_cast<std::size_t>(node_graph[static_cast<std::size_t>(k)])];
    const Index row = node_local[static_cast<std::size_t>(k)];
    Index c = 0;
    if (attributes) {
      graph.features.row(row).head(attributes->cols()) = attributes->row(k);
      c = attributes->cols();
    }
    if (label_block) graph.features.row(row).segment(c, label_block->cols()) = label_block->row(k);
  }

  for (const Line& l : read_lines(a_file)) {
    const auto fields = split_commas(l.text);
    if (fields.size() != 2) throw ParseError(a_file, l.number, "expected 'i, j'");
    const long long u = parse_int(fields[0], a_file, l.number);
    const long long v = parse_int(fields[1], a_file, l.number);
    for (long long x : {u, v}) {
      if (x < 1 || x > num_nodes) {
        throw ParseError(a_file, l.number,
                         "node index " + std::to_string(x) + " out of range 1.." + std::to_string(num_nodes));
      }
    }
    const auto gu = node_graph[static_cast<std::size_t>(u - 1)];
    const auto gv = node_graph[static_cast<std::size_t>(v - 1)];
    if (gu != gv) throw ParseError(a_file, l.number, "edge joins nodes of different graphs");
    if (u == v) continue;  // self-loops are never stored
    Graph& graph = ds.graphs[static_cast<std::size_t>(gu)];
    const Index i = node_local[static_cast<std::size_t>(u - 1)];
    const Index j = node_local[static_cast<std::size_t>(v - 1)];
    graph.adjacency(i, j) = 1.0;
    graph.adjacency(j, i) = 1.0;
  }
  return ds;
}

namespace {

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const fs::path& file) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  return out;
}

}  // namespace

void save_tudataset(const GraphDataset& ds, const fs::path& directory, const std::string& name) {
  fs::create_directories(directory);
  auto edges = open_out(member(directory, name, "_A.txt"));
  auto indicator = open_out(member(directory, name, "_graph_indicator.txt"));
  auto labels = open_out(member(directory, name, "_graph_labels.txt"));
  std::ofstream attrs;
  if (ds.feature_dim > 0) attrs = open_out(member(directory, name, "_node_attributes.txt"));

  long long offset = 0;
  for (std::size_t g = 0; g < ds.graphs.size(); ++g) {
    const Graph& graph = ds.graphs[g];
    const Index n = graph.num_nodes();
    for (Index i = 0; i < n; ++i) {
      indicator << (g + 1) << '\n';
      for (Index j = 0; j < n; ++j) {
        if (graph.adjacency(i, j) != 0.0) edges << (offset + i + 1) << ", " << (offset + j + 1) << '\n';
      }
      if (ds.feature_dim > 0) {
        for (Index c = 0; c < graph.feature_dim(); ++c) attrs << (c ? ", " : "") << format_real(graph.features(i, c));
        attrs << '\n';
      }
    }
    labels << graph.class_index() << '\n';
    offset += n;
  }
}

}  // namespace smixup
