#include "rowsim/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rowsim/errors.hpp"

namespace rowsim {

using nlohmann::json;

namespace {

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const std::string& context) {
  if (!j.is_object()) throw ConfigError(context + ": expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : allowed)
      if (it.key() == k) {
        known = true;
        break;
      }
    if (!known) throw ConfigError(context + ": unknown key '" + it.key() + "'");
  }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (auto it = j.find(key); it != j.end()) out = it->get<T>();
}

void read_ns(const json& j, const char* key, Ns& out) {
  if (auto it = j.find(key); it != j.end()) out = it->get<long long>();
}

PatternSpec::Kind pattern_kind_from(const std::string& s) {
  if (s == "single_sided") return PatternSpec::Kind::SingleSided;
  if (s == "double_sided") return PatternSpec::Kind::DoubleSided;
  if (s == "onoff") return PatternSpec::Kind::OnOff;
  if (s == "trr_bypass") return PatternSpec::Kind::TrrBypass;
  throw ConfigError("pattern.kind: unknown value '" + s + "'");
}

const char* to_string(PatternSpec::Kind k) {
  switch (k) {
    case PatternSpec::Kind::SingleSided: return "single_sided";
    case PatternSpec::Kind::DoubleSided: return "double_sided";
    case PatternSpec::Kind::OnOff: return "onoff";
    case PatternSpec::Kind::TrrBypass: return "trr_bypass";
  }
  return "?";
}

MitigationKind mitigation_kind_from(const std::string& s) {
  if (s == "none") return MitigationKind::None;
  if (s == "trr") return MitigationKind::Trr;
  if (s == "graphene") return MitigationKind::Graphene;
  if (s == "para") return MitigationKind::Para;
  if (s == "graphene_rp") return MitigationKind::GrapheneRp;
  if (s == "para_rp") return MitigationKind::ParaRp;
  throw ConfigError("mitigation: unknown value '" + s +
                    "' (expected none|trr|graphene|para|graphene_rp|para_rp)");
}

RowPolicy::Kind policy_kind_from(const std::string& s) {
  if (s == "open_page") return RowPolicy::Kind::OpenPage;
  if (s == "closed_page") return RowPolicy::Kind::ClosedPage;
  if (s == "capped_open") return RowPolicy::Kind::CappedOpen;
  throw ConfigError("row_policy.kind: unknown value '" + s + "'");
}

DoseCurve curve_from(const json& j, const std::string& context) {
  check_keys(j, {"anchors", "tail_slope", "temperature_scale"}, context);
  DoseCurve c;
  if (auto it = j.find("anchors"); it != j.end()) {
    c.anchors.clear();
    for (const auto& a : *it) {
      if (!a.is_array() || a.size() != 2)
        throw ConfigError(context + ".anchors: expected [on_time_ns, dose] pairs");
      c.anchors.push_back({a[0].get<long long>(), a[1].get<double>()});
    }
  }
  read(j, "tail_slope", c.tail_slope);
  if (auto it = j.find("temperature_scale"); it != j.end()) {
    c.temperature_scale.clear();
    for (const auto& p : *it) {
      if (!p.is_array() || p.size() != 2)
        throw ConfigError(context + ".temperature_scale: expected [celsius, factor] pairs");
      c.temperature_scale.push_back({p[0].get<double>(), p[1].get<double>()});
    }
  }
  return c;
}

json curve_to(const DoseCurve& c) {
  json j;
  j["anchors"] = json::array();
  for (const auto& a : c.anchors) j["anchors"].push_back({a.on_time, a.dose});
  j["tail_slope"] = c.tail_slope;
  j["temperature_scale"] = json::array();
  for (const auto& p : c.temperature_scale) j["temperature_scale"].push_back({p.celsius, p.factor});
  return j;
}

void apply_preset(RunConfig& cfg, const std::string& preset) {
  if (preset.rfind("table2/t_mro_", 0) == 0) {
    const std::string suffix = preset.substr(std::string("table2/t_mro_").size());
    Ns t_mro = 0;
    try {
      t_mro = std::stoll(suffix);
    } catch (...) {
      throw ConfigError("preset: bad table2 cap '" + preset + "'");
    }
    const auto row = table2_row_for(t_mro);
    if (!row)
      throw ConfigError("preset: no table2 row for t_mro=" + suffix +
                        " (available: 36, 66, 96, 186, 336, 636)");
    cfg.model = table2_source_model();
    cfg.model_preset = "table2";
    cfg.mitigation.t_mro_ns = row->t_mro;
    cfg.mitigation.graphene_T = row->graphene_t;
    cfg.mitigation.para_p = row->para_p;
    cfg.policy.kind = RowPolicy::Kind::CappedOpen;
    cfg.policy.t_mro = row->t_mro;
    return;
  }
  if (preset == "attack_realsys") {
    // chip-scale thresholds: a real module's hammer threshold is tens of
    // thousands of activations, not the projected 1K of the adaptation table
    cfg.model = scaled_model(60.0);
    cfg.model_scale = 60.0;
    cfg.model_preset = "default";
    return;
  }
  throw ConfigError("preset: unknown preset '" + preset + "'");
}

RunConfig from_json(const json& j) {
  check_keys(j,
             {"seed", "task", "preset", "trace", "geometry", "timing", "model", "cells",
              "row_policy", "mitigation", "row_remap", "sim", "pattern", "search", "experiment",
              "attack", "output_dir"},
             "config");
  RunConfig cfg;
  read(j, "preset", cfg.preset);
  if (!cfg.preset.empty()) apply_preset(cfg, cfg.preset);

  read(j, "seed", cfg.seed);
  read(j, "task", cfg.task);
  read(j, "trace", cfg.trace_path);
  read(j, "output_dir", cfg.output_dir);

  if (auto it = j.find("geometry"); it != j.end()) {
    check_keys(*it, {"channels", "ranks", "bankgroups", "banks_per_group", "rows", "columns"},
               "geometry");
    read(*it, "channels", cfg.geometry.channels);
    read(*it, "ranks", cfg.geometry.ranks);
    read(*it, "bankgroups", cfg.geometry.bankgroups);
    read(*it, "banks_per_group", cfg.geometry.banks_per_group);
    read(*it, "rows", cfg.geometry.rows);
    read(*it, "columns", cfg.geometry.columns);
  }

  if (auto it = j.find("timing"); it != j.end()) {
    check_keys(*it,
               {"tRAS_ns", "tRP_ns", "tRCD_ns", "tRC_ns", "tREFI_ns", "tREFW_ns", "tRFC_ns",
                "max_postponed_refs"},
               "timing");
    read_ns(*it, "tRAS_ns", cfg.timing.tRAS);
    read_ns(*it, "tRP_ns", cfg.timing.tRP);
    read_ns(*it, "tRCD_ns", cfg.timing.tRCD);
    cfg.timing.tRC = cfg.timing.tRAS + cfg.timing.tRP;
    read_ns(*it, "tRC_ns", cfg.timing.tRC);
    read_ns(*it, "tREFI_ns", cfg.timing.tREFI);
    read_ns(*it, "tREFW_ns", cfg.timing.tREFW);
    read_ns(*it, "tRFC_ns", cfg.timing.tRFC);
    read(*it, "max_postponed_refs", cfg.timing.max_postponed_refs);
  }

  if (auto it = j.find("model"); it != j.end()) {
    check_keys(*it,
               {"preset", "scale", "hammer", "press", "theta_hammer", "theta_press",
                "distance_coupling", "min_on_time_ns"},
               "model");
    read(*it, "preset", cfg.model_preset);
    if (cfg.model_preset == "default")
      cfg.model = default_model();
    else if (cfg.model_preset == "table2")
      cfg.model = table2_source_model();
    else if (cfg.model_preset != "custom")
      throw ConfigError("model.preset: unknown value '" + cfg.model_preset + "'");
    read(*it, "scale", cfg.model_scale);
    cfg.model.theta_hammer *= cfg.model_scale;
    cfg.model.theta_press *= cfg.model_scale;
    if (auto c = it->find("hammer"); c != it->end()) cfg.model.hammer = curve_from(*c, "model.hammer");
    if (auto c = it->find("press"); c != it->end()) cfg.model.press = curve_from(*c, "model.press");
    read(*it, "theta_hammer", cfg.model.theta_hammer);
    read(*it, "theta_press", cfg.model.theta_press);
    if (auto c = it->find("distance_coupling"); c != it->end()) {
      if (!c->is_array() || c->size() != 3)
        throw ConfigError("model.distance_coupling: expected three factors");
      for (int d = 0; d < 3; ++d) cfg.model.distance_coupling[d] = (*c)[d].get<double>();
    }
    read_ns(*it, "min_on_time_ns", cfg.model.min_on_time);
  } else if (cfg.model_scale != 1.0 && cfg.preset.empty()) {
    // nothing: scale only enters through the model object or a preset
  }

  if (auto it = j.find("cells"); it != j.end()) {
    check_keys(*it,
               {"press_cells", "hammer_cells", "retention_cells", "multiplier_sigma",
                "overlap_hammer", "overlap_retention", "press_cluster_min", "press_cluster_max",
                "anti_row_fraction", "retention_median_budget_ns", "retention_sigma",
                "retention_min_budget_ns"},
               "cells");
    read(*it, "press_cells", cfg.cells.press_cells);
    read(*it, "hammer_cells", cfg.cells.hammer_cells);
    read(*it, "retention_cells", cfg.cells.retention_cells);
    read(*it, "multiplier_sigma", cfg.cells.multiplier_sigma);
    read(*it, "overlap_hammer", cfg.cells.overlap_hammer);
    read(*it, "overlap_retention", cfg.cells.overlap_retention);
    read(*it, "press_cluster_min", cfg.cells.press_cluster_min);
    read(*it, "press_cluster_max", cfg.cells.press_cluster_max);
    read(*it, "anti_row_fraction", cfg.cells.anti_row_fraction);
    read(*it, "retention_median_budget_ns", cfg.cells.retention.median_budget_ns);
    read(*it, "retention_sigma", cfg.cells.retention.sigma);
    read(*it, "retention_min_budget_ns", cfg.cells.retention.min_budget_ns);
  }

  if (auto it = j.find("row_policy"); it != j.end()) {
    check_keys(*it, {"kind", "t_mro_ns"}, "row_policy");
    std::string kind = to_string(cfg.policy.kind);
    read(*it, "kind", kind);
    cfg.policy.kind = policy_kind_from(kind);
    read_ns(*it, "t_mro_ns", cfg.policy.t_mro);
  }

  if (auto it = j.find("mitigation"); it != j.end()) {
    check_keys(*it,
               {"kind", "t_mro_ns", "graphene_T", "para_p", "trr_capacity", "blast_radius"},
               "mitigation");
    std::string kind = to_string(cfg.mitigation.kind);
    read(*it, "kind", kind);
    cfg.mitigation.kind = mitigation_kind_from(kind);
    read_ns(*it, "t_mro_ns", cfg.mitigation.t_mro_ns);
    read(*it, "graphene_T", cfg.mitigation.graphene_T);
    read(*it, "para_p", cfg.mitigation.para_p);
    read(*it, "trr_capacity", cfg.mitigation.trr_capacity);
    read(*it, "blast_radius", cfg.mitigation.blast_radius);
  }
  // an adapted defense is only sound together with its row-open cap
  if (cfg.mitigation.is_rp()) {
    cfg.policy.kind = RowPolicy::Kind::CappedOpen;
    cfg.policy.t_mro = cfg.mitigation.t_mro_ns;
  }

  if (auto it = j.find("row_remap"); it != j.end()) {
    check_keys(*it, {"kind", "xor_mask"}, "row_remap");
    std::string kind = cfg.remap.kind() == RowRemap::Kind::Identity ? "identity" : "xor_mask";
    int mask = cfg.remap.mask();
    read(*it, "kind", kind);
    read(*it, "xor_mask", mask);
    if (kind == "identity")
      cfg.remap = RowRemap::identity();
    else if (kind == "xor_mask")
      cfg.remap = RowRemap::xor_mask(mask);
    else
      throw ConfigError("row_remap.kind: unknown value '" + kind + "'");
  }

  if (auto it = j.find("sim"); it != j.end()) {
    check_keys(*it, {"horizon_ns", "temperature_c", "col_access_ns", "queue_capacity"}, "sim");
    read_ns(*it, "horizon_ns", cfg.sim.horizon_ns);
    read(*it, "temperature_c", cfg.sim.temperature_c);
    read_ns(*it, "col_access_ns", cfg.sim.col_access_ns);
    read(*it, "queue_capacity", cfg.sim.queue_capacity);
  }

  if (auto it = j.find("pattern"); it != j.end()) {
    check_keys(*it,
               {"kind", "bank", "row", "t_agg_on_ns", "activations", "delta_ta2a_ns",
                "on_fraction", "num_aggr_acts", "num_reads", "num_dummy", "variant", "iterations",
                "dummy_distance", "dummy_stride", "time_budget_ns"},
               "pattern");
    std::string kind = to_string(cfg.pattern.kind);
    read(*it, "kind", kind);
    cfg.pattern.kind = pattern_kind_from(kind);
    read(*it, "bank", cfg.pattern.aggressor.bank);
    read(*it, "row", cfg.pattern.aggressor.row);
    read_ns(*it, "t_agg_on_ns", cfg.pattern.t_agg_on);
    long long acts = cfg.pattern.activations;
    read(*it, "activations", acts);
    cfg.pattern.activations = acts;
    read_ns(*it, "delta_ta2a_ns", cfg.pattern.delta_ta2a);
    read(*it, "on_fraction", cfg.pattern.on_fraction);
    read(*it, "num_aggr_acts", cfg.pattern.num_aggr_acts);
    read(*it, "num_reads", cfg.pattern.num_reads);
    read(*it, "num_dummy", cfg.pattern.num_dummy);
    std::string variant =
        cfg.pattern.variant == PatternSpec::FlushVariant::Batched ? "batched_flush"
                                                                  : "interleaved_flush";
    read(*it, "variant", variant);
    if (variant == "batched_flush")
      cfg.pattern.variant = PatternSpec::FlushVariant::Batched;
    else if (variant == "interleaved_flush")
      cfg.pattern.variant = PatternSpec::FlushVariant::Interleaved;
    else
      throw ConfigError("pattern.variant: unknown value '" + variant + "'");
    long long iters = cfg.pattern.iterations;
    read(*it, "iterations", iters);
    cfg.pattern.iterations = iters;
    read(*it, "dummy_distance", cfg.pattern.dummy_distance);
    read(*it, "dummy_stride", cfg.pattern.dummy_stride);
    read_ns(*it, "time_budget_ns", cfg.pattern.time_budget);
  }

  if (auto it = j.find("search"); it != j.end()) {
    check_keys(*it,
               {"accuracy", "budget_ns", "repeats", "temperature_c", "taggon_grid_step_ns",
                "taggon_max_ns"},
               "search");
    read(*it, "accuracy", cfg.search.accuracy);
    read_ns(*it, "budget_ns", cfg.search.time_budget);
    read(*it, "repeats", cfg.search.repeats);
    read(*it, "temperature_c", cfg.search.temperature_c);
    read_ns(*it, "taggon_grid_step_ns", cfg.search.taggon_grid_step);
    read_ns(*it, "taggon_max_ns", cfg.search.taggon_max);
  }

  if (auto it = j.find("experiment"); it != j.end()) {
    check_keys(*it,
               {"kind", "taggon_grid_ns", "ac_grid", "delta_grid_ns", "fractions", "sample_rows",
                "rows", "patterns", "retention_horizon_ns"},
               "experiment");
    read(*it, "kind", cfg.experiment.experiment);
    if (auto g = it->find("taggon_grid_ns"); g != it->end()) {
      cfg.experiment.taggon_grid_ns.clear();
      for (const auto& v : *g) cfg.experiment.taggon_grid_ns.push_back(v.get<long long>());
    }
    if (auto g = it->find("ac_grid"); g != it->end()) {
      cfg.experiment.ac_grid.clear();
      for (const auto& v : *g) cfg.experiment.ac_grid.push_back(v.get<long>());
    }
    if (auto g = it->find("delta_grid_ns"); g != it->end()) {
      cfg.experiment.delta_grid_ns.clear();
      for (const auto& v : *g) cfg.experiment.delta_grid_ns.push_back(v.get<long long>());
    }
    if (auto g = it->find("fractions"); g != it->end()) {
      cfg.experiment.fractions.clear();
      for (const auto& v : *g) cfg.experiment.fractions.push_back(v.get<double>());
    }
    read(*it, "sample_rows", cfg.experiment.sample_rows);
    if (auto g = it->find("rows"); g != it->end()) {
      cfg.experiment.rows.clear();
      for (const auto& v : *g) cfg.experiment.rows.push_back(v.get<int>());
    }
    if (auto g = it->find("patterns"); g != it->end()) {
      cfg.experiment.patterns.clear();
      for (const auto& v : *g) cfg.experiment.patterns.push_back(v.get<std::string>());
    }
    read_ns(*it, "retention_horizon_ns", cfg.experiment.retention_horizon_ns);
  }

  if (auto it = j.find("attack"); it != j.end()) {
    check_keys(*it, {"num_reads", "num_aggr_acts", "variants", "victim_row", "bank"}, "attack");
    if (auto g = it->find("num_reads"); g != it->end()) {
      cfg.attack.num_reads.clear();
      for (const auto& v : *g) cfg.attack.num_reads.push_back(v.get<int>());
    }
    if (auto g = it->find("num_aggr_acts"); g != it->end()) {
      cfg.attack.num_aggr_acts.clear();
      for (const auto& v : *g) cfg.attack.num_aggr_acts.push_back(v.get<int>());
    }
    if (auto g = it->find("variants"); g != it->end()) {
      cfg.attack.variants.clear();
      for (const auto& v : *g) cfg.attack.variants.push_back(v.get<std::string>());
    }
    read(*it, "victim_row", cfg.attack.victim_row);
    read(*it, "bank", cfg.attack.bank);
  }

  cfg.model.min_on_time = cfg.timing.tRAS;
  cfg.validate();
  return cfg;
}

json to_json(const RunConfig& cfg) {
  json j;
  j["seed"] = cfg.seed;
  j["task"] = cfg.task;
  j["preset"] = cfg.preset;
  j["trace"] = cfg.trace_path;
  j["output_dir"] = cfg.output_dir;

  j["geometry"] = {{"channels", cfg.geometry.channels},
                   {"ranks", cfg.geometry.ranks},
                   {"bankgroups", cfg.geometry.bankgroups},
                   {"banks_per_group", cfg.geometry.banks_per_group},
                   {"rows", cfg.geometry.rows},
                   {"columns", cfg.geometry.columns}};
  j["timing"] = {{"tRAS_ns", cfg.timing.tRAS},     {"tRP_ns", cfg.timing.tRP},
                 {"tRCD_ns", cfg.timing.tRCD},     {"tRC_ns", cfg.timing.tRC},
                 {"tREFI_ns", cfg.timing.tREFI},   {"tREFW_ns", cfg.timing.tREFW},
                 {"tRFC_ns", cfg.timing.tRFC},     {"max_postponed_refs", cfg.timing.max_postponed_refs}};
  j["model"] = {{"preset", "custom"},
                {"scale", 1.0},
                {"hammer", curve_to(cfg.model.hammer)},
                {"press", curve_to(cfg.model.press)},
                {"theta_hammer", cfg.model.theta_hammer},
                {"theta_press", cfg.model.theta_press},
                {"distance_coupling",
                 {cfg.model.distance_coupling[0], cfg.model.distance_coupling[1],
                  cfg.model.distance_coupling[2]}},
                {"min_on_time_ns", cfg.model.min_on_time}};
  j["cells"] = {{"press_cells", cfg.cells.press_cells},
                {"hammer_cells", cfg.cells.hammer_cells},
                {"retention_cells", cfg.cells.retention_cells},
                {"multiplier_sigma", cfg.cells.multiplier_sigma},
                {"overlap_hammer", cfg.cells.overlap_hammer},
                {"overlap_retention", cfg.cells.overlap_retention},
                {"press_cluster_min", cfg.cells.press_cluster_min},
                {"press_cluster_max", cfg.cells.press_cluster_max},
                {"anti_row_fraction", cfg.cells.anti_row_fraction},
                {"retention_median_budget_ns", cfg.cells.retention.median_budget_ns},
                {"retention_sigma", cfg.cells.retention.sigma},
                {"retention_min_budget_ns", cfg.cells.retention.min_budget_ns}};
  j["row_policy"] = {{"kind", to_string(cfg.policy.kind)}, {"t_mro_ns", cfg.policy.t_mro}};
  j["mitigation"] = {{"kind", to_string(cfg.mitigation.kind)},
                     {"t_mro_ns", cfg.mitigation.t_mro_ns},
                     {"graphene_T", cfg.mitigation.graphene_T},
                     {"para_p", cfg.mitigation.para_p},
                     {"trr_capacity", cfg.mitigation.trr_capacity},
                     {"blast_radius", cfg.mitigation.blast_radius}};
  j["row_remap"] = {
      {"kind", cfg.remap.kind() == RowRemap::Kind::Identity ? "identity" : "xor_mask"},
      {"xor_mask", cfg.remap.mask()}};
  j["sim"] = {{"horizon_ns", cfg.sim.horizon_ns},
              {"temperature_c", cfg.sim.temperature_c},
              {"col_access_ns", cfg.sim.col_access_ns},
              {"queue_capacity", cfg.sim.queue_capacity}};
  j["pattern"] = {{"kind", to_string(cfg.pattern.kind)},
                  {"bank", cfg.pattern.aggressor.bank},
                  {"row", cfg.pattern.aggressor.row},
                  {"t_agg_on_ns", cfg.pattern.t_agg_on},
                  {"activations", cfg.pattern.activations},
                  {"delta_ta2a_ns", cfg.pattern.delta_ta2a},
                  {"on_fraction", cfg.pattern.on_fraction},
                  {"num_aggr_acts", cfg.pattern.num_aggr_acts},
                  {"num_reads", cfg.pattern.num_reads},
                  {"num_dummy", cfg.pattern.num_dummy},
                  {"variant", cfg.pattern.variant == PatternSpec::FlushVariant::Batched
                                  ? "batched_flush"
                                  : "interleaved_flush"},
                  {"iterations", cfg.pattern.iterations},
                  {"dummy_distance", cfg.pattern.dummy_distance},
                  {"dummy_stride", cfg.pattern.dummy_stride},
                  {"time_budget_ns", cfg.pattern.time_budget}};
  j["search"] = {{"accuracy", cfg.search.accuracy},
                 {"budget_ns", cfg.search.time_budget},
                 {"repeats", cfg.search.repeats},
                 {"temperature_c", cfg.search.temperature_c},
                 {"taggon_grid_step_ns", cfg.search.taggon_grid_step},
                 {"taggon_max_ns", cfg.search.taggon_max}};
  j["experiment"] = {{"kind", cfg.experiment.experiment},
                     {"taggon_grid_ns", cfg.experiment.taggon_grid_ns},
                     {"ac_grid", cfg.experiment.ac_grid},
                     {"delta_grid_ns", cfg.experiment.delta_grid_ns},
                     {"fractions", cfg.experiment.fractions},
                     {"sample_rows", cfg.experiment.sample_rows},
                     {"rows", cfg.experiment.rows},
                     {"patterns", cfg.experiment.patterns},
                     {"retention_horizon_ns", cfg.experiment.retention_horizon_ns}};
  j["attack"] = {{"num_reads", cfg.attack.num_reads},
                 {"num_aggr_acts", cfg.attack.num_aggr_acts},
                 {"variants", cfg.attack.variants},
                 {"victim_row", cfg.attack.victim_row},
                 {"bank", cfg.attack.bank}};
  return j;
}

}  // namespace

void RunConfig::validate() const {
  geometry.validate();
  timing.validate();
  model.validate();
  cells.validate();
  policy.validate(timing);
  mitigation.validate(timing);
  search.validate();
  pattern.validate(timing);
  if (task != "simulate" && task != "characterize" && task != "attack")
    throw ConfigError("task: must be simulate|characterize|attack");
  if (sim.horizon_ns <= 0) throw ConfigError("sim.horizon_ns: must be positive");
  if (sim.col_access_ns <= 0) throw ConfigError("sim.col_access_ns: must be positive");
  if (sim.queue_capacity <= 0) throw ConfigError("sim.queue_capacity: must be positive");
  const std::string& e = experiment.experiment;
  if (e != "acmin_grid" && e != "taggonmin_grid" && e != "ber_onoff" && e != "overlap" &&
      e != "ecc_hist" && e != "retention")
    throw ConfigError(
        "experiment.kind: must be acmin_grid|taggonmin_grid|ber_onoff|overlap|ecc_hist|retention");
  if (pattern.aggressor.row < 0 || pattern.aggressor.row >= geometry.rows - 3)
    throw ConfigError("pattern.row: must leave room for victims within the bank");
}

std::optional<RpAdaptation> RunConfig::resolved_rp() const {
  if (!mitigation.is_rp()) return std::nullopt;
  if (auto row = table2_row_for(mitigation.t_mro_ns)) {
    RpAdaptation a;
    a.t_mro = row->t_mro;
    a.adapted_threshold = row->adapted_threshold;
    a.reduction = 1.0 - static_cast<double>(row->adapted_threshold) / 1000.0;
    return a;
  }
  return derive_rp_config(model, mitigation.t_mro_ns, 1000, 80.0, timing.tRAS);
}

ControllerConfig RunConfig::controller_config() const {
  ControllerConfig c;
  c.geometry = geometry;
  c.timing = timing;
  c.policy = policy;
  c.mitigation = mitigation;
  c.model = model;
  c.model.min_on_time = timing.tRAS;
  c.cells = cells;
  c.remap = remap;
  c.temperature_c = sim.temperature_c;
  c.col_access_ns = sim.col_access_ns;
  c.queue_capacity = sim.queue_capacity;
  c.seed = seed;
  return c;
}

RunConfig parse_config_text(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  return from_json(j);
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string serialize_config(const RunConfig& config) { return to_json(config).dump(2) + "\n"; }

void apply_override(RunConfig& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos)
    throw ConfigError("--set expects key.path=value, got '" + assignment + "'");
  std::string path = assignment.substr(0, eq);
  const std::string value = assignment.substr(eq + 1);

  json j = to_json(config);
  // after serialization the model is fully materialized
  json* node = &j;
  size_t start = 0;
  std::vector<std::string> parts;
  while (true) {
    const auto dot = path.find('.', start);
    parts.push_back(path.substr(start, dot - start));
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  for (size_t i = 0; i + 1 < parts.size(); ++i) {
    if (!node->contains(parts[i]))
      throw ConfigError("--set: unknown key '" + parts[i] + "' in '" + path + "'");
    node = &(*node)[parts[i]];
  }
  if (!node->contains(parts.back()))
    throw ConfigError("--set: unknown key '" + parts.back() + "' in '" + path + "'");
  json parsed;
  try {
    parsed = json::parse(value);
  } catch (...) {
    parsed = value;  // plain string
  }
  (*node)[parts.back()] = parsed;
  config = from_json(j);
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& row : table2_rows())
    names.push_back("table2/t_mro_" + std::to_string(row.t_mro));
  names.push_back("attack_realsys");
  return names;
}

}  // namespace rowsim
