#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "locfade/simkit.hpp"

namespace locfade::cli {

/// Malformed document. Line and column are 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line, int column)
      : std::runtime_error(what), line_(line), column_(column) {}
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

/// Well-formed document with a bad or unknown field.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Experiment { CrlbSweep, KRatio, MleCompare, Roc, PdVsSnr, KSweep, CentralVsDist, ThresholdOpt };

struct ExperimentInfo {
  Experiment id;
  const char* name;
  const char* figures;
  const char* summary;
};

const std::vector<ExperimentInfo>& experiments();
std::optional<Experiment> experiment_from_name(std::string_view name);
const ExperimentInfo& info(Experiment e);

enum class Emit { Csv, Svg };

struct RunConfig {
  Experiment experiment = Experiment::CrlbSweep;
  std::filesystem::path scenario_path;
  std::uint64_t seed = 0;
  std::optional<std::size_t> trials;  // from the document when set there
  std::filesystem::path output_dir = ".";
  std::set<Emit> emit{Emit::Csv, Emit::Svg};
};

struct ParsedConfig {
  Scenario scenario;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
};

/// Document to validated scenario. Unknown keys are errors.
ParsedConfig parse_config(std::string_view text);
ParsedConfig load_config(const std::filesystem::path& path);

/// Canonical JSON for a scenario: every field, sorted keys, no whitespace.
std::string canonical_config(const Scenario& scenario);
/// Git blob id of `content` ("blob <len>\0" prefix, SHA-1, lowercase hex).
std::string git_blob_sha1(std::string_view content);

std::string render_csv(const ExperimentResult& result);
std::vector<ResultRow> parse_csv(std::string_view text);
std::string render_svg(const ExperimentResult& result);
std::string render_meta(const ExperimentResult& result);

/// Writes via a sibling temp file and rename, so readers never see a
/// partial file.
void write_atomic(const std::filesystem::path& path, std::string_view content);

void emit_csv(const ExperimentResult& result, const std::filesystem::path& path);
void emit_svg(const ExperimentResult& result, const std::filesystem::path& path);

/// Runs one experiment; trials of 0 means the scenario default.
ExperimentResult run(Experiment e, const Scenario& scenario, std::uint64_t seed, std::size_t trials);

}  // namespace locfade::cli
