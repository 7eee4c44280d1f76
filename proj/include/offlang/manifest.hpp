#pragma once

#include <json.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace offlang {

std::string sha256_hex(std::string_view bytes);
// Throws IoError when the file cannot be read.
std::string file_sha256(const std::string& path);

inline constexpr std::string_view kToolVersion = "0.1.0";

// Run record: command line, working directory, input and output digests and
// command-specific results. No timestamps, so identical runs give identical
// manifests.
class Manifest {
 public:
  Manifest(std::string command, std::vector<std::string> argv);

  void add_input(const std::string& role, const std::string& path);
  void add_output(const std::string& role, const std::string& path);
  nlohmann::ordered_json& results() { return doc_["results"]; }
  nlohmann::ordered_json& doc() { return doc_; }

  std::string dump() const { return doc_.dump(2) + "\n"; }
  void write(const std::string& path) const;

 private:
  nlohmann::ordered_json doc_;
};

nlohmann::ordered_json read_manifest(const std::string& path);

}  // namespace offlang
