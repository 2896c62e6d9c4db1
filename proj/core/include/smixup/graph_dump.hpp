#pragma once

#include <iosfwd>
#include <vector>

#include "smixup/graph.hpp"

namespace smixup {

/// One graph per line, fields separated by single spaces:
///   n d C | a_00 ... a_(n-1)(n-1) | x_00 ... x_(n-1)(d-1) | y_0 ... y_(C-1)
/// Adjacency and features are row-major; reals use %.17g.
void write_graph_dump(std::ostream& out, const std::vector<Graph>& graphs);
std::vector<Graph> read_graph_dump(std::istream& in);

}  // namespace smixup
