#include "rowsim/characterize.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "rowsim/errors.hpp"

namespace rowsim {

void SearchConfig::validate() const {
  if (accuracy <= 0.0 || accuracy > 1.0) throw ConfigError("search.accuracy: must be in (0, 1]");
  if (time_budget <= 0) throw ConfigError("search.budget_ns: must be positive");
  if (repeats < 1) throw ConfigError("search.repeats: must be >= 1");
  if (taggon_grid_step <= 0) throw ConfigError("search.taggon_grid_step: must be positive");
}

SearchOutcome bisect_threshold(const std::function<bool(long)>& predicate, long limit,
                               double accuracy) {
  if (limit < 1) return SearchOutcome::no_bitflip();
  if (predicate(1)) return SearchOutcome::at(1);

  // exponential ramp for the first passing probe
  long lo = 1;  // known failing
  long hi = 2;
  bool found = false;
  while (hi < limit) {
    if (predicate(hi)) {
      found = true;
      break;
    }
    lo = hi;
    hi = std::min(limit, hi * 2);
  }
  if (!found) {
    if (!predicate(limit)) return SearchOutcome::no_bitflip();
    lo = std::max(lo, hi / 2);
    hi = limit;
  }

  auto gap_ok = [accuracy](long lo_v, long hi_v) {
    const long tol = std::max<long>(1, static_cast<long>(std::ceil(accuracy * hi_v)));
    return hi_v - lo_v <= tol;
  };
  while (!gap_ok(lo, hi)) {
    const long mid = lo + (hi - lo) / 2;
    if (predicate(mid))
      hi = mid;
    else
      lo = mid;
  }
  return SearchOutcome::at(hi);
}

Characterizer::Characterizer(const Geometry& geometry, const TimingParams& timing,
                             const MechanismModel& model, const CellParams& cells,
                             std::uint64_t seed, RowRemap remap)
    : geometry_(geometry),
      timing_(timing),
      model_(model),
      profile_(cells, geometry.columns, seed),
      remap_(remap) {
  model_.validate();
}

std::vector<int> Characterizer::default_row_sample(const Geometry& geometry) {
  std::vector<int> rows;
  const int chunk = std::min(1024, geometry.rows / 3);
  for (int r = 0; r < chunk; ++r) rows.push_back(r);
  const int mid = geometry.rows / 2 - chunk / 2;
  for (int r = 0; r < chunk; ++r) rows.push_back(mid + r);
  for (int r = geometry.rows - chunk; r < geometry.rows; ++r) rows.push_back(r);
  return rows;
}

std::vector<Bitflip> Characterizer::probe(const PatternSpec& spec, const SearchConfig& cfg) const {
  DirectReplay rig(geometry_, timing_, model_, remap_, cfg.temperature_c);
  const Ns end = rig.replay(gen_direct(spec, timing_));
  return collect_bitflips(rig.ledger, profile_, model_, end);
}

bool Characterizer::flips_at(const PatternSpec& spec, const SearchConfig& cfg) const {
  return !probe(spec, cfg).empty();
}

SearchOutcome Characterizer::find_acmin(int row, Ns t_agg_on, PatternSpec::Kind pattern,
                                        const SearchConfig& cfg) const {
  cfg.validate();
  if (t_agg_on < timing_.tRAS)
    throw ContractViolation("find_acmin: t_agg_on below tRAS");

  PatternSpec spec;
  spec.kind = pattern;
  spec.aggressor.row = row;
  spec.t_agg_on = t_agg_on;
  spec.time_budget = cfg.time_budget;
  const long limit = max_activations_in_budget(spec, timing_);

  SearchOutcome best = SearchOutcome::no_bitflip();
  for (int rep = 0; rep < cfg.repeats; ++rep) {
    auto outcome = bisect_threshold(
        [&](long ac) {
          PatternSpec p = spec;
          p.activations = ac;
          return flips_at(p, cfg);
        },
        limit, cfg.accuracy);
    if (outcome.found && (!best.found || outcome.value < best.value)) best = outcome;
  }
  return best;
}

SearchOutcome Characterizer::find_taggon_min(int row, long activations, PatternSpec::Kind pattern,
                                             const SearchConfig& cfg) const {
  cfg.validate();
  if (activations < 1) throw ContractViolation("find_taggon_min: need at least one activation");

  PatternSpec spec;
  spec.kind = pattern;
  spec.aggressor.row = row;
  spec.activations = activations;
  spec.time_budget = cfg.time_budget;

  // grid: t = tRAS + step * k; the budget caps how long each probe may hold
  // the row open
  const Ns budget_cap = cfg.time_budget / activations - timing_.tRP;
  const Ns t_cap = std::min(cfg.taggon_max, budget_cap);
  if (t_cap < timing_.tRAS) return SearchOutcome::no_bitflip();
  const long k_limit = (t_cap - timing_.tRAS) / cfg.taggon_grid_step + 1;  // k in [1, k_limit]

  auto probe_at = [&](long k) {
    PatternSpec p = spec;
    p.t_agg_on = timing_.tRAS + (k - 1) * cfg.taggon_grid_step;
    return flips_at(p, cfg);
  };

  SearchOutcome best = SearchOutcome::no_bitflip();
  for (int rep = 0; rep < cfg.repeats; ++rep) {
    auto outcome = bisect_threshold(probe_at, k_limit, cfg.accuracy);
    if (outcome.found && (!best.found || outcome.value < best.value)) best = outcome;
  }
  if (!best.found) return best;
  return SearchOutcome::at(timing_.tRAS + (best.value - 1) * cfg.taggon_grid_step);
}

double Characterizer::measure_ber(const PatternSpec& spec, const SearchConfig& cfg) const {
  cfg.validate();
  PatternSpec p = spec;
  p.time_budget = cfg.time_budget;
  p.activations = max_activations_in_budget(p, timing_);
  if (p.activations == 0) return 0.0;

  double best = 0.0;
  for (int rep = 0; rep < cfg.repeats; ++rep) {
    const auto flips = probe(p, cfg);
    std::map<int, long> per_row;
    for (const auto& f : flips) ++per_row[f.row];
    double ber = 0.0;
    for (const auto& [row, count] : per_row)
      ber = std::max(ber, static_cast<double>(count) / static_cast<double>(geometry_.columns));
    best = std::max(best, ber);
  }
  return best;
}

std::vector<Bitflip> Characterizer::retention_probe(int row, Ns horizon) const {
  DisturbanceLedger ledger(geometry_.rows);  // untouched: all rows idle since t=0
  std::vector<Bitflip> out;
  collect_row_bitflips(ledger.entry(row), row, profile_, model_, horizon, out);
  return out;
}

double overlap(const std::vector<Bitflip>& a, const std::vector<Bitflip>& b) {
  if (a.empty()) throw ContractViolation("overlap: set A must be nonempty");
  std::set<std::pair<int, int>> bs;
  for (const auto& f : b) bs.insert({f.row, f.column});
  std::set<std::pair<int, int>> as;
  for (const auto& f : a) as.insert({f.row, f.column});
  long shared = 0;
  for (const auto& cell : as) shared += bs.count(cell);
  return static_cast<double>(shared) / static_cast<double>(as.size());
}

EccHistogram ecc_word_histogram(const std::vector<Bitflip>& flips, int word_bits) {
  EccHistogram hist;
  std::map<std::pair<int, int>, std::set<int>> words;  // (row, word index) -> columns
  for (const auto& f : flips) words[{f.row, f.column / word_bits}].insert(f.column);
  for (const auto& [key, cols] : words) {
    const int n = static_cast<int>(cols.size());
    if (n <= 2)
      ++hist.words_1_2;
    else if (n <= 8)
      ++hist.words_3_8;
    else
      ++hist.words_gt8;
    hist.max_flips_in_word = std::max(hist.max_flips_in_word, n);
  }
  return hist;
}

}  // namespace rowsim
