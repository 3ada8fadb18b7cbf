#pragma once

#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gmlab/error.hpp"
#include "gmlab/registry.hpp"

namespace gmlab::testing {

inline std::shared_ptr<const MarkovTable> table(std::size_t size, std::size_t depth, std::vector<double> probs) {
  return std::make_shared<MarkovTable>(size, depth, std::move(probs));
}

/// Binary depth-1 table with rows (0.3, 0.7) and (0.6, 0.4).
inline std::shared_ptr<const MarkovTable> binary_table() { return table(2, 1, {0.3, 0.7, 0.6, 0.4}); }

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("gmlab_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream(path) << body;
  return path.string();
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Kind of the gmlab::Error thrown by f, or nullopt when it returns normally.
template <class F>
std::optional<ErrorKind> error_kind(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

}  // namespace gmlab::testing
