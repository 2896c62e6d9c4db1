#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "smixup/graph.hpp"

namespace smixup {

/// Malformed dataset input; the message is prefixed with "FILE:LINE: ".
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::filesystem::path& file, std::size_t line, const std::string& what);
  const std::filesystem::path& file() const { return file_; }
  std::size_t line() const { return line_; }

 private:
  std::filesystem::path file_;
  std::size_t line_;
};

/// Reads the TUDataset flat-file layout:
///   NAME_A.txt                "i, j" per directed edge, 1-based global node ids
///   NAME_graph_indicator.txt  1-based graph id per node
///   NAME_graph_labels.txt     integer label per graph
///   NAME_node_attributes.txt  optional, comma-separated reals per node
///   NAME_node_labels.txt      optional, integer per node (one-hot encoded)
/// Graph labels are remapped to 0..C-1 in ascending order of their value.
/// When both node files exist the features are [attributes | one-hot labels].
GraphDataset load_tudataset(const std::filesystem::path& directory, const std::string& name);

/// Writes the dataset back in the same layout. Graph labels are written as
/// class indices, features (if any) as NAME_node_attributes.txt.
void save_tudataset(const GraphDataset& ds, const std::filesystem::path& directory, const std::string& name);

}  // namespace smixup
