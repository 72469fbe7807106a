#pragma once

#include <string>
#include <vector>

#include "rowsim/characterize.hpp"
#include "rowsim/config.hpp"
#include "rowsim/controller.hpp"

namespace rowsim {

/// One experiment's structured summary. Serialized as a single
/// schema-versioned JSON document; the flat tabular files live beside it.
/// Result files carry no timestamps so equal configs produce byte-identical
/// outputs; wall-clock goes to the console only.
struct ResultRecord {
  int schema_version = 1;
  std::string experiment_id;
  std::string config_echo;  // serialized RunConfig
  std::string metrics_json;
};

std::string result_to_json(const ResultRecord& record);
void write_result_file(const std::string& path, const ResultRecord& record);

/// Flat CSV rows for the plot-data families. Every file starts with a
/// schema-version comment line and a column header.
struct CsvTable {
  std::string family;  // acmin-vs-taggon, taggonmin-vs-ac, ber-onoff, overlap,
                       // ecc-hist, attack-bars, sweep-summary, sim-summary
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

void write_csv(const std::string& path, const CsvTable& table);

/// Splits a results JSON document back into its per-family CSV tables
/// (re-emitting plot data from a stored summary).
std::vector<CsvTable> plotdata_from_result(const std::string& result_json_text);

/// JSON encoding of a SimulationReport's metrics.
std::string simulation_metrics_json(const SimulationReport& report);

}  // namespace rowsim
