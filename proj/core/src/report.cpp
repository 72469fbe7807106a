#include "rowsim/report.hpp"

#include <fstream>

#include <json.hpp>

#include "rowsim/errors.hpp"

namespace rowsim {

using nlohmann::json;

std::string result_to_json(const ResultRecord& record) {
  json j;
  j["schema_version"] = record.schema_version;
  j["experiment_id"] = record.experiment_id;
  j["config"] = json::parse(record.config_echo);
  j["metrics"] = record.metrics_json.empty() ? json::object() : json::parse(record.metrics_json);
  return j.dump(2) + "\n";
}

void write_result_file(const std::string& path, const ResultRecord& record) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write result file: " + path);
  out << result_to_json(record);
}

void write_csv(const std::string& path, const CsvTable& table) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write csv file: " + path);
  out << "# rowsim-results v1 family=" << table.family << "\n";
  for (size_t i = 0; i < table.columns.size(); ++i)
    out << table.columns[i] << (i + 1 < table.columns.size() ? "," : "\n");
  for (const auto& row : table.rows) {
    for (size_t i = 0; i < row.size(); ++i) out << row[i] << (i + 1 < row.size() ? "," : "");
    out << "\n";
  }
}

std::string simulation_metrics_json(const SimulationReport& r) {
  json j;
  j["requests_served"] = r.requests_served;
  j["reads"] = r.reads;
  j["writes"] = r.writes;
  j["row_hits"] = r.row_hits;
  j["row_misses"] = r.row_misses;
  j["hit_rate"] = r.hit_rate;
  j["total_acts"] = r.total_acts;
  j["periodic_refreshes"] = r.periodic_refreshes;
  j["postponed_refreshes"] = r.postponed_refreshes;
  j["preventive_refreshes"] = r.preventive_refreshes;
  j["backpressure_events"] = r.backpressure_events;
  j["mean_latency_ns"] = r.mean_latency_ns;
  j["p50_latency_ns"] = r.p50_latency_ns;
  j["p95_latency_ns"] = r.p95_latency_ns;
  j["p99_latency_ns"] = r.p99_latency_ns;
  j["max_latency_ns"] = r.max_latency_ns;
  j["per_window_max_row_acts"] = r.per_window_max_row_acts;
  j["max_row_acts_per_window"] = r.max_row_acts_per_window;
  j["t_agg_on_histogram"] = r.t_agg_on_histogram;
  j["max_t_agg_on_ns"] = r.max_t_agg_on;
  j["mean_t_agg_on_ns"] = r.mean_t_agg_on;
  j["bitflip_count"] = static_cast<long>(r.bitflips.size());
  j["rows_with_bitflips"] = r.rows_with_bitflips;
  json flips = json::array();
  for (const auto& f : r.bitflips)
    flips.push_back({{"bank", f.bank},
                     {"row", f.flip.row},
                     {"column", f.flip.column},
                     {"direction", to_string(f.flip.direction)},
                     {"mechanism", to_string(f.flip.mechanism)}});
  j["bitflips"] = flips;
  j["end_time_ns"] = r.end_time;
  return j.dump();
}

std::vector<CsvTable> plotdata_from_result(const std::string& result_json_text) {
  json j;
  try {
    j = json::parse(result_json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("results parse error: ") + e.what());
  }
  std::vector<CsvTable> tables;
  if (!j.contains("metrics")) return tables;
  const json& m = j["metrics"];
  if (m.contains("tables")) {
    for (const auto& t : m["tables"]) {
      CsvTable table;
      table.family = t.value("family", "table");
      for (const auto& c : t["columns"]) table.columns.push_back(c.get<std::string>());
      for (const auto& row : t["rows"]) {
        std::vector<std::string> cells;
        for (const auto& cell : row) {
          if (cell.is_string())
            cells.push_back(cell.get<std::string>());
          else
            cells.push_back(cell.dump());
        }
        table.rows.push_back(cells);
      }
      tables.push_back(std::move(table));
    }
  }
  return tables;
}

}  // namespace rowsim
