#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "smixup/matrix.hpp"

namespace smixup {

/// Named learnable matrices; std::map keeps iteration (and file) order stable.
using ParamStore = std::map<std::string, Matrix>;

/// Versioned text container of named, shaped matrices plus string metadata:
///
///   smixup-checkpoint 1
///   meta <key> <value>            (any number, value runs to end of line)
///   tensor <name> <rows> <cols>
///   <cols values per line, %.17g> (rows lines)
///   end
///
/// %.17g makes every double round-trip bitwise.
struct Checkpoint {
  std::map<std::string, std::string> meta;
  ParamStore tensors;
};

inline constexpr int kCheckpointVersion = 1;

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& file);
Checkpoint load_checkpoint(const std::filesystem::path& file);

std::string serialize_checkpoint(const Checkpoint& ckpt);
Checkpoint parse_checkpoint(const std::string& text);

}  // namespace smixup
