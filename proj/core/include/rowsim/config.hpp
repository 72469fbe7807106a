#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rowsim/cells.hpp"
#include "rowsim/characterize.hpp"
#include "rowsim/controller.hpp"
#include "rowsim/mitigation.hpp"
#include "rowsim/patterns.hpp"

namespace rowsim {

struct SimParams {
  Ns horizon_ns = 2 * 63897600LL;
  double temperature_c = 50.0;
  Ns col_access_ns = 15;
  int queue_capacity = 64;
};

struct AttackParams {
  std::vector<int> num_reads = {1, 16, 32, 64};
  std::vector<int> num_aggr_acts = {2, 3};
  std::vector<std::string> variants = {"batched_flush"};
  int victim_row = 4096;
  int bank = 0;
};

struct ExperimentParams {
  std::string experiment = "acmin_grid";
  std::vector<Ns> taggon_grid_ns = {36, 7800, 70200, 30000000};
  std::vector<long> ac_grid = {1, 10, 100, 1000, 10000};
  std::vector<Ns> delta_grid_ns = {240, 600, 1200, 2400, 6000};
  std::vector<double> fractions = {0.0, 0.25, 0.5, 0.75, 1.0};
  int sample_rows = 4;          ///< rows drawn evenly from the 3072-row preset
  std::vector<int> rows;        ///< explicit override of the sample
  std::vector<std::string> patterns = {"single_sided"};
  Ns retention_horizon_ns = 4'000'000'000LL;
};

/// Everything a run needs: fully serializable, eagerly validated, and
/// deterministic - equal configs produce byte-identical result files.
struct RunConfig {
  std::uint64_t seed = 1;
  std::string task = "characterize";  // simulate | characterize | attack
  std::string preset;                 // e.g. "table2/t_mro_96"
  std::string trace_path;

  Geometry geometry;
  TimingParams timing;
  MechanismModel model = default_model();
  std::string model_preset = "default";  // default | table2 | custom
  double model_scale = 1.0;

  CellParams cells;
  RowPolicy policy;
  MitigationConfig mitigation;
  RowRemap remap;
  SimParams sim;
  PatternSpec pattern;
  SearchConfig search;
  ExperimentParams experiment;
  AttackParams attack;
  std::string output_dir = "results";

  /// The (t_mro, T'RH) pair behind an *_rp mitigation: the published table
  /// row when the cap matches one, otherwise derived from the model curve.
  std::optional<RpAdaptation> resolved_rp() const;

  ControllerConfig controller_config() const;

  void validate() const;
};

/// Parses and validates a config file. Unknown keys are rejected; every
/// module invariant is checked eagerly. Errors name the key and constraint.
RunConfig load_config(const std::string& path);
RunConfig parse_config_text(const std::string& json_text);

/// Full round-trippable serialization (all fields materialized, sorted keys).
std::string serialize_config(const RunConfig& config);

/// Applies a `key.path=value` override (CLI --set).
void apply_override(RunConfig& config, const std::string& assignment);

/// Named presets ("table2/t_mro_36".."table2/t_mro_636", "attack_realsys").
std::vector<std::string> preset_names();

}  // namespace rowsim
