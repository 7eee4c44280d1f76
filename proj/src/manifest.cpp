#include "offlang/manifest.hpp"

#include <openssl/evp.h>

#include <filesystem>
#include <memory>

#include "offlang/error.hpp"
#include "text_io.hpp"

namespace offlang {

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr)) {
    throw Error("sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xF];
  }
  return out;
}

std::string file_sha256(const std::string& path) { return sha256_hex(detail::read_file(path)); }

Manifest::Manifest(std::string command, std::vector<std::string> argv) {
  doc_["tool"] = "offlang";
  doc_["version"] = kToolVersion;
  doc_["command"] = std::move(command);
  doc_["argv"] = std::move(argv);
  doc_["cwd"] = std::filesystem::current_path().string();
  doc_["inputs"] = nlohmann::ordered_json::array();
  doc_["outputs"] = nlohmann::ordered_json::array();
  doc_["results"] = nlohmann::ordered_json::object();
}

void Manifest::add_input(const std::string& role, const std::string& path) {
  doc_["inputs"].push_back({{"role", role}, {"path", path}, {"sha256", file_sha256(path)}});
}

void Manifest::add_output(const std::string& role, const std::string& path) {
  doc_["outputs"].push_back({{"role", role}, {"path", path}, {"sha256", file_sha256(path)}});
}

void Manifest::write(const std::string& path) const { detail::write_file(path, dump()); }

nlohmann::ordered_json read_manifest(const std::string& path) {
  try {
    return nlohmann::ordered_json::parse(detail::read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": not a manifest: " + e.what(), 0);
  }
}

}  // namespace offlang
