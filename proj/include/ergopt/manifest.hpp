#pragma once

// Run manifests: what was run, on which inputs, producing which files.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "ergopt/errors.hpp"

#ifndef ERGOPT_VERSION
#define ERGOPT_VERSION "0.1.0"
#endif

namespace ergopt {

inline std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h = 14695981039346656037ull) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct RunManifest {
  std::string command;
  nlohmann::json config = nlohmann::json::object();
  std::vector<std::pair<std::string, std::string>> inputs;  // path, content digest
  std::vector<std::string> outputs;
  std::string started = utc_timestamp();
  std::string finished;
  int exit_code = 0;
  nlohmann::json diagnostics = nlohmann::json::object();

  void add_input(const std::string& path, std::string_view content) { inputs.emplace_back(path, hex64(fnv1a64(content))); }

  std::string config_hash() const { return hex64(fnv1a64(config.dump())); }

  std::string input_digest() const {
    std::uint64_t h = fnv1a64("");
    for (const auto& [path, digest] : inputs) h = fnv1a64(digest, h);
    return hex64(h);
  }

  nlohmann::json to_json() const {
    nlohmann::json in = nlohmann::json::array();
    for (const auto& [path, digest] : inputs) in.push_back({{"path", path}, {"digest", digest}});
    return {{"command", command},
            {"config", config},
            {"config_hash", config_hash()},
            {"timestamps", {{"started", started}, {"finished", finished}}},
            {"inputs", in},
            {"input_digest", input_digest()},
            {"outputs", outputs},
            {"tool_version", ERGOPT_VERSION},
            {"exit_code", exit_code},
            {"diagnostics", diagnostics}};
  }

  void write(const std::string& path) {
    finished = utc_timestamp();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write manifest " + path);
    out << to_json().dump(2) << '\n';
  }
};

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << content;
}

}  // namespace ergopt
