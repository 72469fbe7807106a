#include "rowsim/mitigation.hpp"

#include <algorithm>
#include <cmath>

#include "rowsim/errors.hpp"
#include "rowsim/rng.hpp"

namespace rowsim {

GrapheneTracker::GrapheneTracker(long threshold, int table_entries, int blast_radius,
                                 Ns reset_period)
    : threshold_(threshold),
      capacity_(table_entries),
      blast_radius_(blast_radius),
      reset_period_(reset_period) {
  if (threshold_ <= 0) throw ConfigError("graphene_T: must be positive");
  if (capacity_ <= 0) throw ConfigError("graphene table size: must be positive");
  entries_.reserve(capacity_);
}

GrapheneTracker GrapheneTracker::with_default_sizing(long threshold, int blast_radius,
                                                     const TimingParams& timing) {
  const long window_max_acts = timing.tREFW / timing.tRC;
  const long k = (window_max_acts + threshold - 1) / threshold;
  return GrapheneTracker(threshold, static_cast<int>(k), blast_radius, timing.tREFW);
}

std::vector<int> GrapheneTracker::targets_for(int row) const {
  std::vector<int> targets;
  for (int d = 1; d <= blast_radius_; ++d) {
    targets.push_back(row - d);
    targets.push_back(row + d);
  }
  return targets;
}

std::vector<int> GrapheneTracker::reset_window(Ns time) {
  // Sweep rows a quarter of the way to the threshold before wiping the
  // table; otherwise an aggressor could bank almost-T activations on each
  // side of the boundary without ever firing.
  std::vector<int> targets;
  for (const Entry& e : entries_) {
    if (e.count - spillover_ >= (threshold_ + 3) / 4) {
      auto t = targets_for(e.row);
      targets.insert(targets.end(), t.begin(), t.end());
    }
  }
  entries_.clear();
  index_.clear();
  buckets_.clear();
  spillover_ = 0;
  window_start_ = time - (time % reset_period_);
  return targets;
}

std::vector<int> GrapheneTracker::observe(int row, Ns time) {
  std::vector<int> targets;
  if (time - window_start_ >= reset_period_) targets = reset_window(time);

  auto fire = [&](long count) {
    if (count % threshold_ == 0) {
      auto t = targets_for(row);
      targets.insert(targets.end(), t.begin(), t.end());
    }
  };

  auto it = index_.find(row);
  if (it != index_.end()) {
    Entry& e = entries_[it->second];
    ++e.count;
    buckets_[e.count].push_back(it->second);
    fire(e.count);
    return targets;
  }

  int slot = -1;
  if (static_cast<int>(entries_.size()) < capacity_) {
    entries_.push_back({});
    slot = static_cast<int>(entries_.size()) - 1;
  } else {
    // Evict an entry sitting at the spillover floor (lazy bucket lookup); if
    // none exists the activation is absorbed into the spillover counter.
    auto bucket = buckets_.find(spillover_);
    if (bucket != buckets_.end()) {
      auto& slots = bucket->second;
      while (!slots.empty()) {
        const int candidate = slots.back();
        slots.pop_back();
        if (entries_[candidate].count == spillover_) {
          slot = candidate;
          break;
        }
      }
      if (slots.empty()) buckets_.erase(spillover_);
    }
    if (slot < 0) {
      ++spillover_;
      return targets;
    }
    index_.erase(entries_[slot].row);
  }

  entries_[slot] = {row, spillover_ + 1};
  index_[row] = slot;
  buckets_[spillover_ + 1].push_back(slot);
  fire(spillover_ + 1);
  return targets;
}

long GrapheneTracker::estimated_count(int row) const {
  auto it = index_.find(row);
  return it == index_.end() ? spillover_ : entries_[it->second].count;
}

ParaTracker::ParaTracker(double probability, std::uint64_t seed) : p_(probability), rng_(seed) {
  if (p_ < 0.0 || p_ > 1.0) throw ConfigError("para_p: must be in [0, 1]");
}

std::vector<int> ParaTracker::observe(int row) {
  if (p_ <= 0.0) return {};
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (unit(rng_) >= p_) return {};
  const int side = (rng_() & 1) ? 1 : -1;
  return {row + side};
}

void TrrSampler::observe(int row) {
  if (static_cast<int>(tracked_.size()) >= capacity_) return;
  if (std::find(tracked_.begin(), tracked_.end(), row) != tracked_.end()) return;
  tracked_.push_back(row);
}

std::vector<int> TrrSampler::on_ref() {
  std::vector<int> targets;
  for (int row : tracked_) {
    targets.push_back(row - 1);
    targets.push_back(row + 1);
  }
  tracked_.clear();
  return targets;
}

RpAdaptation derive_rp_config(const MechanismModel& source_curve, Ns t_mro, long t_rh,
                              double worst_case_temperature, Ns tras) {
  if (t_mro < tras) throw ContractViolation("derive_rp_config: t_mro below tRAS");
  const auto base = acmin_closed_form(source_curve, tras, worst_case_temperature);
  const auto capped = acmin_closed_form(source_curve, t_mro, worst_case_temperature);
  const double keep = static_cast<double>(capped) / static_cast<double>(base);
  RpAdaptation adaptation;
  adaptation.t_mro = t_mro;
  adaptation.reduction = 1.0 - keep;
  adaptation.adapted_threshold = std::lround(keep * static_cast<double>(t_rh));
  return adaptation;
}

long graphene_threshold_for(long adapted_threshold) { return adapted_threshold / 3; }

const std::vector<Table2Row>& table2_rows() {
  static const std::vector<Table2Row> rows = {
      {36, 1000, 333, 0.034}, {66, 809, 269, 0.042},  {96, 724, 241, 0.047},
      {186, 619, 206, 0.054}, {336, 555, 185, 0.061}, {636, 419, 139, 0.079},
  };
  return rows;
}

std::optional<Table2Row> table2_row_for(Ns t_mro) {
  for (const auto& row : table2_rows())
    if (row.t_mro == t_mro) return row;
  return std::nullopt;
}

const char* to_string(MitigationKind k) {
  switch (k) {
    case MitigationKind::None: return "none";
    case MitigationKind::Trr: return "trr";
    case MitigationKind::Graphene: return "graphene";
    case MitigationKind::Para: return "para";
    case MitigationKind::GrapheneRp: return "graphene_rp";
    case MitigationKind::ParaRp: return "para_rp";
  }
  return "?";
}

void MitigationConfig::validate(const TimingParams& timing) const {
  if (t_mro_ns < timing.tRAS)
    throw ConfigError("t_mro_ns: must be >= tRAS (" + std::to_string(timing.tRAS) + ")");
  if (graphene_T <= 0) throw ConfigError("graphene_T: must be positive");
  if (para_p < 0.0 || para_p > 1.0) throw ConfigError("para_p: must be in [0, 1]");
  if (trr_capacity <= 0) throw ConfigError("trr_capacity: must be positive");
  if (blast_radius < 1) throw ConfigError("blast_radius: must be >= 1");
}

}  // namespace rowsim
