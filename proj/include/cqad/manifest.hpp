#ifndef CQAD_MANIFEST_HPP
#define CQAD_MANIFEST_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace cqad {

inline constexpr const char* kToolVersion = "0.1.0";

// FNV-1a over the file bytes; cheap provenance check for run outputs.
uint64_t fnv1a_file(const std::string& path);
std::string fnv1a_hex(uint64_t h);

struct RunManifest {
  std::string subcommand;
  std::vector<std::string> config_paths;
  uint64_t seed = 0;
  std::string tool_version = kToolVersion;
  double wall_clock_s = 0.0;
  std::vector<std::pair<std::string, std::string>> output_hashes;
};

// Writes <first output>.manifest.json next to the outputs.
void write_manifest(const RunManifest& manifest);

// CSV with '.' decimals, LF line endings, header always present.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path,
                     const std::vector<std::string>& header);
  ~CsvWriter();
  void row(const std::vector<std::string>& cells);
  static std::string num(double value);

 private:
  struct Impl;
  Impl* impl_;
};

}  // namespace cqad

#endif
