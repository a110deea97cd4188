#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "config.hpp"
#include "output.hpp"

namespace dlab::cli {

enum class Status { pass, warn, fail };
std::string_view to_string(Status s);

struct Check {
  std::string name;
  Status status = Status::pass;
  std::string message;
  json data;
};

struct FileEntry {
  std::string path;  // relative to the output directory
  std::string sha256;
  bool deterministic = true;
};

struct RunOptions {
  int jobs = 1;
  std::filesystem::path out_dir;
  std::optional<std::filesystem::path> golden;  // manifest to compare against
};

struct RunReport {
  std::string subcommand;
  json config;
  std::vector<Check> checks;
  std::vector<FileEntry> files;
  std::vector<std::pair<std::string, double>> timings;  // seconds

  bool any_failed() const;
  json to_json() const;
};

const std::vector<std::string>& subcommand_names();

/// Runs a suite, writes its outputs plus report.json and manifest.json into
/// options.out_dir. Check failures are collected, never thrown.
RunReport run(const std::string& subcommand, const ScenarioConfig& cfg, const RunOptions& options);

}  // namespace dlab::cli
