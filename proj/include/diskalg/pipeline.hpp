#pragma once

// Experiment runner: subcommands, structured summary, CSV outputs.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "diskalg/config.hpp"

namespace diskalg {

enum class Verdict { Pass, Evidence, Deferred, Fail, Skipped };

/// Certified checks carry a proof-grade bound; sampled checks only inspect
/// finitely many points.
enum class CheckKind { Certified, Sampled };

std::string to_string(Verdict v);

class StageResult {
 public:
  /// A successful sampled check becomes Evidence, never Pass.
  static StageResult checked(std::string name, CheckKind kind, bool ok,
                             nlohmann::json details = nlohmann::json::object());
  static StageResult skipped(std::string name, std::string reason);
  static StageResult deferred(std::string name, CheckKind kind,
                              nlohmann::json details);

  const std::string& name() const { return name_; }
  CheckKind kind() const { return kind_; }
  Verdict verdict() const { return verdict_; }
  const nlohmann::json& details() const { return details_; }

  nlohmann::json to_json() const;

 private:
  StageResult(std::string name, CheckKind kind, Verdict v, nlohmann::json d)
      : name_(std::move(name)), kind_(kind), verdict_(v), details_(std::move(d)) {}

  std::string name_;
  CheckKind kind_;
  Verdict verdict_;
  nlohmann::json details_;
};

struct SummaryReport {
  std::string subcommand;
  std::string config_name;
  std::vector<StageResult> stages;
  std::vector<std::string> files;

  /// 0 when no stage failed, 1 otherwise.
  int exit_code() const;
  nlohmann::json to_json() const;
};

struct RunOptions {
  std::filesystem::path config;
  std::optional<std::filesystem::path> out;
  std::optional<std::uint64_t> seed;
  std::optional<int> max_degree;
};

const std::vector<std::string>& subcommands();

/// Runs one subcommand on a parsed configuration and writes its CSVs and
/// summary.json into out_dir.
SummaryReport execute(const std::string& subcommand, const Config& cfg,
                      const std::filesystem::path& out_dir,
                      const RunOptions& opts = {});

/// Full CLI entry: 0 all certified checks pass, 1 a check failed, 2 invalid
/// configuration or usage.
int run(const std::string& subcommand, const RunOptions& opts, std::ostream& log);

/// Writes via a temporary file and rename.
void write_file_atomic(const std::filesystem::path& path,
                       const std::string& content);

/// 17 significant digits.
std::string format_real(double x);

}  // namespace diskalg
