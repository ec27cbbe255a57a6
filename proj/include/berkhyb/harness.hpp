#pragma once

#include "berkhyb/json_io.hpp"

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

namespace berkhyb {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr const char* kReportSchema = "berkhyb.report/1";

// All randomness in a run comes from (seed, stream) pairs.
std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream);

struct PlotRow {
  std::string experiment;
  double t = 0;
  std::string series;
  double value = 0;
};

struct RunReport {
  std::string kind;
  Json json;
  std::vector<PlotRow> plot;
  // Extra output files (name relative to the output directory, contents).
  std::vector<std::pair<std::string, std::string>> files;
  bool passed = true;
  // Member runs of a suite, each written to the subdirectory named by its `name`.
  std::string name;
  std::vector<RunReport> children;
};

struct RunOptions {
  std::optional<std::uint64_t> seed;  // overrides the manifest seed
  int threads = 1;
};

const std::vector<std::string>& experiment_kinds();

// Loads and runs a manifest. kind must match the manifest's "kind" field. Input problems
// raise ConfigError before any computation.
RunReport run_manifest(const std::filesystem::path& manifest, const std::string& kind, const RunOptions& opts);

// Long-format CSV "experiment,t,series,value"; header only for an empty report.
std::string plot_csv(const RunReport& report);
void emit_plot_data(const RunReport& report, const std::filesystem::path& path);

// report.json, plot.csv and the extra files of the report (recursively for a suite), each
// written to a temporary name first and renamed once everything is on disk.
void write_outputs(const RunReport& report, const std::filesystem::path& out_dir);

void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace berkhyb
