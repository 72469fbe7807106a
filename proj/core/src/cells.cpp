#include "rowsim/cells.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "rowsim/errors.hpp"
#include "rowsim/rng.hpp"

namespace rowsim {

const char* to_string(Mechanism m) {
  switch (m) {
    case Mechanism::Hammer: return "hammer";
    case Mechanism::Press: return "press";
    case Mechanism::Retention: return "retention";
  }
  return "?";
}

const char* to_string(FlipDirection d) {
  return d == FlipDirection::ZeroToOne ? "0to1" : "1to0";
}

void CellParams::validate() const {
  if (press_cells <= 0) throw ConfigError("cells.press_cells: must be positive");
  if (hammer_cells <= 0) throw ConfigError("cells.hammer_cells: must be positive");
  if (retention_cells < 0) throw ConfigError("cells.retention_cells: must be nonnegative");
  if (multiplier_sigma < 0.0) throw ConfigError("cells.multiplier_sigma: must be nonnegative");
  if (overlap_hammer < 0.0 || overlap_hammer > 1.0)
    throw ConfigError("cells.overlap_hammer: must be in [0, 1]");
  if (overlap_retention < 0.0 || overlap_retention > 1.0)
    throw ConfigError("cells.overlap_retention: must be in [0, 1]");
  if (press_cluster_min < 1 || press_cluster_max < press_cluster_min || press_cluster_max > 64)
    throw ConfigError("cells.press_cluster: need 1 <= min <= max <= 64");
  if (anti_row_fraction < 0.0 || anti_row_fraction > 1.0)
    throw ConfigError("cells.anti_row_fraction: must be in [0, 1]");
}

CellProfile::CellProfile(const CellParams& params, int columns, std::uint64_t seed)
    : params_(params), columns_(columns), seed_(seed) {
  params_.validate();
}

const RowCells& CellProfile::row_cells(int row) const {
  auto it = cache_.find(row);
  if (it != cache_.end()) return it->second;
  return cache_.emplace(row, sample_row(row)).first->second;
}

namespace {

// Lognormal spread above 1.0; the per-mechanism minimum is later pinned to
// exactly 1.0 so the threshold equals the row's first-flip dose.
double raw_multiplier(std::mt19937_64& rng, double sigma) {
  std::normal_distribution<double> normal(0.0, 1.0);
  return std::exp(sigma * std::abs(normal(rng)));
}

void normalize_min_to_one(std::vector<RowCells::Cell>& cells) {
  if (cells.empty()) return;
  double lo = cells.front().multiplier;
  for (const auto& c : cells) lo = std::min(lo, c.multiplier);
  for (auto& c : cells) c.multiplier /= lo;
}

}  // namespace

RowCells CellProfile::sample_row(int row) const {
  auto rng = substream(seed_, "cells", static_cast<std::uint64_t>(row));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  RowCells rc;
  rc.anti_cells = params_.anti_row_fraction > 0.0 && unit(rng) < params_.anti_row_fraction;

  std::unordered_set<int> used;
  auto draw_free_column = [&](int limit) {
    std::uniform_int_distribution<int> dist(0, limit - 1);
    int c = dist(rng);
    while (used.count(c)) c = (c + 1) % limit;
    used.insert(c);
    return c;
  };

  // Press population: one same-word cluster plus scattered singles. The
  // cluster is what lets a saturated dose pile many flips into one 64-bit
  // word.
  const int cluster_len = std::min(
      params_.press_cells,
      static_cast<int>(params_.press_cluster_min +
                       rng() % (params_.press_cluster_max - params_.press_cluster_min + 1)));
  const int words = columns_ / 64;
  const int word = static_cast<int>(rng() % words);
  const int offset = static_cast<int>(rng() % (64 - cluster_len + 1));
  for (int k = 0; k < cluster_len; ++k) {
    const int col = word * 64 + offset + k;
    used.insert(col);
    rc.press.push_back({col, raw_multiplier(rng, params_.multiplier_sigma)});
  }
  for (int k = cluster_len; k < params_.press_cells; ++k)
    rc.press.push_back({draw_free_column(columns_), raw_multiplier(rng, params_.multiplier_sigma)});

  for (int k = 0; k < params_.hammer_cells; ++k)
    rc.hammer.push_back(
        {draw_free_column(columns_), raw_multiplier(rng, params_.multiplier_sigma)});

  for (int k = 0; k < params_.retention_cells; ++k) {
    const int col = draw_free_column(columns_);
    const double budget =
        std::max(params_.retention.min_budget_ns,
                 params_.retention.median_budget_ns *
                     std::exp(params_.retention.sigma *
                              std::normal_distribution<double>(0.0, 1.0)(rng)));
    rc.retention.push_back({col, budget});
  }

  // Cross-population members, drawn at half the configured bound.
  for (const auto& cell : rc.press) {
    if (unit(rng) < params_.overlap_hammer * 0.5)
      rc.hammer.push_back({cell.column, raw_multiplier(rng, params_.multiplier_sigma)});
    if (unit(rng) < params_.overlap_retention * 0.5)
      rc.retention.push_back({cell.column, params_.retention.median_budget_ns});
  }

  normalize_min_to_one(rc.press);
  normalize_min_to_one(rc.hammer);
  return rc;
}

void collect_row_bitflips(const DisturbanceLedger::Entry& entry, int row,
                          const CellProfile& profile, const MechanismModel& model, Ns now,
                          std::vector<Bitflip>& out) {
  const RowCells& rc = profile.row_cells(row);
  std::unordered_set<int> flipped;

  for (const auto& cell : rc.press) {
    if (entry.press >= model.theta_press * cell.multiplier && flipped.insert(cell.column).second)
      out.push_back({row, cell.column, profile.press_direction(rc), Mechanism::Press});
  }
  for (const auto& cell : rc.hammer) {
    if (entry.hammer >= model.theta_hammer * cell.multiplier && flipped.insert(cell.column).second)
      out.push_back({row, cell.column, profile.hammer_direction(rc), Mechanism::Hammer});
  }
  for (const auto& cell : rc.retention) {
    if (static_cast<double>(now - entry.last_refresh) > cell.budget_ns &&
        flipped.insert(cell.column).second)
      out.push_back({row, cell.column, profile.retention_direction(rc), Mechanism::Retention});
  }
}

std::vector<Bitflip> collect_bitflips(const DisturbanceLedger& ledger, const CellProfile& profile,
                                      const MechanismModel& model, Ns now,
                                      const std::vector<int>& extra_rows) {
  std::vector<Bitflip> out;
  std::unordered_set<int> seen;
  for (int row : ledger.touched_rows()) {
    seen.insert(row);
    collect_row_bitflips(ledger.entry(row), row, profile, model, now, out);
  }
  for (int row : extra_rows) {
    if (row < 0 || row >= ledger.rows() || seen.count(row)) continue;
    collect_row_bitflips(ledger.entry(row), row, profile, model, now, out);
  }
  return out;
}

}  // namespace rowsim
