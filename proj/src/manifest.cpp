#include "cqad/manifest.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace cqad {

uint64_t fnv1a_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot hash " + path);
  uint64_t h = 1469598103934665603ull;
  char buf[4096];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ull;
    }
    if (!in) break;
  }
  return h;
}

std::string fnv1a_hex(uint64_t h) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

void write_manifest(const RunManifest& m) {
  if (m.output_hashes.empty()) return;
  nlohmann::json outputs = nlohmann::json::array();
  for (const auto& [file, hash] : m.output_hashes)
    outputs.push_back({{"file", file}, {"fnv1a", hash}});
  nlohmann::json j = {{"subcommand", m.subcommand},
                      {"configs", m.config_paths},
                      {"seed", m.seed},
                      {"tool_version", m.tool_version},
                      {"wall_clock_s", m.wall_clock_s},
                      {"outputs", outputs}};
  const std::string path = m.output_hashes.front().first + ".manifest.json";
  std::ofstream out(path);
  out << j.dump(2) << "\n";
}

struct CsvWriter::Impl {
  std::ofstream out;
};

CsvWriter::CsvWriter(const std::string& path,
                     const std::vector<std::string>& header)
    : impl_(new Impl) {
  impl_->out.open(path, std::ios::binary);  // LF endings on every platform
  if (!impl_->out) {
    delete impl_;
    throw std::invalid_argument("cannot open " + path);
  }
  row(header);
}

CsvWriter::~CsvWriter() { delete impl_; }

void CsvWriter::row(const std::vector<std::string>& cells) {
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) impl_->out << ",";
    impl_->out << cells[i];
  }
  impl_->out << "\n";
}

std::string CsvWriter::num(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

}  // namespace cqad
