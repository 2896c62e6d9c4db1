#include "smixup/checkpoint.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace smixup {

std::string serialize_checkpoint(const Checkpoint& ckpt) {
  std::string out = "smixup-checkpoint " + std::to_string(kCheckpointVersion) + "\n";
  for (const auto& [key, value] : ckpt.meta) {
    if (key.find_first_of(" \t\n") != std::string::npos || value.find('\n') != std::string::npos) {
      throw std::invalid_argument("checkpoint meta key/value contains whitespace: " + key);
    }
    out += "meta " + key + " " + value + "\n";
  }
  char buf[40];
  for (const auto& [name, m] : ckpt.tensors) {
    out += "tensor " + name + " " + std::to_string(m.rows()) + " " + std::to_string(m.cols()) + "\n";
    for (Index i = 0; i < m.rows(); ++i) {
      for (Index j = 0; j < m.cols(); ++j) {
        std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
        if (j) out += ' ';
        out += buf;
      }
      out += '\n';
    }
  }
  out += "end\n";
  return out;
}

Checkpoint parse_checkpoint(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& what) -> std::runtime_error {
    return std::runtime_error("checkpoint line " + std::to_string(lineno) + ": " + what);
  };

  if (!std::getline(in, line)) throw std::runtime_error("checkpoint: empty input");
  ++lineno;
  {
    std::istringstream header(line);
    std::string magic;
    int version = 0;
    if (!(header >> magic >> version) || magic != "smixup-checkpoint") throw fail("bad header");
    if (version != kCheckpointVersion) throw fail("unsupported version " + std::to_string(version));
  }

  Checkpoint ckpt;
  bool ended = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string kind;
    fields >> kind;
    if (kind == "end") {
      ended = true;
      break;
    }
    if (kind == "meta") {
      std::string key;
      fields >> key;
      std::string value;
      std::getline(fields >> std::ws, value);
      ckpt.meta[key] = value;
    } else if (kind == "tensor") {
      std::string name;
      long rows = -1;
      long cols = -1;
      if (!(fields >> name >> rows >> cols) || rows < 0 || cols < 0) throw fail("bad tensor header");
      Matrix m(rows, cols);
      for (long i = 0; i < rows; ++i) {
        if (!std::getline(in, line)) throw fail("truncated tensor " + name);
        ++lineno;
        const char* p = line.c_str();
        for (long j = 0; j < cols; ++j) {
          char* end = nullptr;
          m(i, j) = std::strtod(p, &end);
          if (end == p) throw fail("expected " + std::to_string(cols) + " values");
          p = end;
        }
      }
      if (!ckpt.tensors.emplace(name, std::move(m)).second) throw fail("duplicate tensor " + name);
    } else {
      throw fail("unknown record '" + kind + "'");
    }
  }
  if (!ended) throw std::runtime_error("checkpoint: missing end marker");
  return ckpt;
}

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write checkpoint " + file.string());
  out << serialize_checkpoint(ckpt);
}

Checkpoint load_checkpoint(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read checkpoint " + file.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_checkpoint(buf.str());
}

}  // namespace smixup
