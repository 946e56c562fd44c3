#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gevrey/common/errors.hpp"

namespace gevrey::harness {

enum class Experiment { kGlStudy, kQmcStudy, kMcStudy, kTruncStudy, kChecks, kSolveEvp, kCbc };

std::string_view experiment_name(Experiment e);
Experiment parse_experiment(std::string_view name);

struct RunConfig {
  Experiment experiment = Experiment::kGlStudy;

  std::string model;
  std::string custom_file;  // coefficient table when model = custom
  std::size_t m = 64;

  std::string solver = "cholesky";  // or "pcg"
  double tol = 1e-14;
  std::size_t max_iter = 10000;

  // gl-study; n_max doubles as the largest n for checks combinatorics
  std::size_t n_min = 1;
  std::size_t n_max = 20;
  std::size_t n_star = 40;
  std::size_t fit_min = 3;
  std::size_t fit_max = 16;

  // qmc-study, mc-study, trunc-study, cbc
  std::size_t s = 20;
  std::size_t level_min = 4;
  std::size_t level_max = 10;
  std::size_t shifts = 8;
  std::size_t mc_replicates = 8;
  std::uint64_t seed = 2024;
  std::optional<double> delta;  // from the model when unset
  double theta = 0.55;
  std::string beta = "j^-5";
  std::string vector_in;
  std::string vector_out;
  std::vector<std::size_t> s_list;
  std::size_t s_ref = 16;
  std::uint64_t n = 1024;

  // checks
  std::string check = "combinatorics";  // or "gevrey"
  std::size_t nu_max = 8;
  std::size_t dim_max = 4;
  std::size_t K = 20;
  std::size_t quad_n = 64;
  std::vector<double> deltas{1.0, 1.5, 2.0, 3.0, 4.0};
  std::size_t max_order = 4;
  double fd_step = 0.05;  // finite-difference step for the bound check

  // solve-evp
  std::vector<double> y;
  bool second = false;
  std::string matrix_out;
  std::string eigvec_out;

  std::string out;
  std::string svg;

  bool operator==(const RunConfig&) const = default;
};

/// All violations found, one message each ("line N: ...").
class ConfigError : public ValidationError {
 public:
  explicit ConfigError(std::vector<std::string> messages);
  const std::vector<std::string>& messages() const noexcept { return messages_; }

 private:
  std::vector<std::string> messages_;
};

/// Defaults for one experiment.
RunConfig default_config(Experiment e);

/// Line-oriented "key = value" text with one [experiment] section per run.
/// '#' and ';' start comments. Throws ConfigError listing every problem.
std::vector<RunConfig> parse_config_set(std::string_view text);

/// Exactly one section.
RunConfig parse_config(std::string_view text);

/// The section for experiment e from a config file. Throws IoError if the file
/// cannot be read and ValidationError if the section is missing.
RunConfig load_config(const std::filesystem::path& path, Experiment e);

/// Sets one key as if it appeared in the section; throws ConfigError.
void apply_override(RunConfig& cfg, std::string_view key, std::string_view value);

/// Cross-field checks (e.g. n_max < n_star); throws ConfigError.
void validate(const RunConfig& cfg);

/// Keys accepted by an experiment, in serialization order.
std::vector<std::string> keys_for(Experiment e);

/// "[experiment]" followed by every key of the experiment.
std::string serialize(const RunConfig& cfg);

}  // namespace gevrey::harness
