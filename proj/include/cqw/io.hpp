#pragma once

// Output plumbing shared by the command-line tool: CSV number formatting,
// file writing, content digests and run manifests.

#include <nlohmann/json.hpp>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cqw/error.hpp"

namespace cqw::io {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kToolVersion = "1.0.0";

/// 17 significant digits, shortest exponent form; "nan"/"inf"/"-inf" otherwise.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

/// Builds CSV text row by row with LF line endings.
class CsvWriter {
 public:
  explicit CsvWriter(const std::vector<std::string>& header) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (i) out_ << ',';
      out_ << header[i];
    }
    out_ << '\n';
    columns_ = header.size();
  }

  CsvWriter& cell(double v) { return raw(format_double(v)); }
  CsvWriter& cell(int v) { return raw(std::to_string(v)); }
  CsvWriter& cell(std::string_view v) { return raw(std::string(v)); }
  CsvWriter& cell(const char* v) { return raw(v); }

  void end_row() {
    if (in_row_ != columns_) throw Error("CSV row has the wrong number of cells");
    out_ << '\n';
    in_row_ = 0;
  }

  std::string str() const { return out_.str(); }

 private:
  CsvWriter& raw(const std::string& text) {
    if (in_row_) out_ << ',';
    out_ << text;
    ++in_row_;
    return *this;
  }

  std::ostringstream out_;
  std::size_t columns_ = 0;
  std::size_t in_row_ = 0;
};

/// FNV-1a, 64 bit.
inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex_digest(std::string_view bytes) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(bytes)));
  return buf;
}

inline void write_file(const std::string& path, std::string_view content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  f.close();
  if (!f) throw IoError("failed writing '" + path + "'");
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

/// Collects the files of one run and writes them together with a manifest
/// (subcommand, parameters, seed, tool version, per-file digests).
class RunOutput {
 public:
  RunOutput(std::string prefix, std::string subcommand, Json parameters)
      : prefix_(std::move(prefix)),
        subcommand_(std::move(subcommand)),
        parameters_(std::move(parameters)) {}

  void set_seed(std::uint64_t seed) { seed_ = seed; }

  // `suffix` like ".csv" or ".transitions.csv"; returns the full path.
  std::string add(const std::string& suffix, std::string content) {
    files_.emplace_back(prefix_ + suffix, std::move(content));
    return files_.back().first;
  }

  Json manifest() const {
    Json m;
    m["subcommand"] = subcommand_;
    m["parameters"] = parameters_;
    if (seed_) {
      m["master_seed"] = *seed_;
    } else {
      m["master_seed"] = nullptr;
    }
    m["tool_version"] = std::string(kToolVersion);
    Json digests = Json::object();
    for (const auto& [path, content] : files_) {
      digests[std::filesystem::path(path).filename().string()] =
          "fnv1a64:" + hex_digest(content);
    }
    m["outputs"] = std::move(digests);
    return m;
  }

  void write() const {
    for (const auto& [path, content] : files_) write_file(path, content);
    write_file(prefix_ + ".manifest.json", dump(manifest()));
  }

 private:
  std::string prefix_;
  std::string subcommand_;
  Json parameters_;
  std::optional<std::uint64_t> seed_;
  std::vector<std::pair<std::string, std::string>> files_;
};

}  // namespace cqw::io
