#include "rowsim/dram.hpp"

#include "rowsim/errors.hpp"

namespace rowsim {

const char* to_string(CommandKind k) {
  switch (k) {
    case CommandKind::ACT: return "ACT";
    case CommandKind::PRE: return "PRE";
    case CommandKind::RD: return "RD";
    case CommandKind::WR: return "WR";
    case CommandKind::REF: return "REF";
  }
  return "?";
}

const char* to_string(Constraint c) {
  switch (c) {
    case Constraint::None: return "none";
    case Constraint::Geometry: return "geometry";
    case Constraint::IssueOrder: return "issue-order";
    case Constraint::TRas: return "tRAS";
    case Constraint::TRp: return "tRP";
    case Constraint::TRc: return "tRC";
    case Constraint::TRcd: return "tRCD";
    case Constraint::TRfc: return "tRFC";
    case Constraint::BankAlreadyOpen: return "bank-already-open";
    case Constraint::RowNotOpen: return "row-not-open";
    case Constraint::RowMismatch: return "row-mismatch";
    case Constraint::RefWithOpenBank: return "ref-with-open-bank";
  }
  return "?";
}

std::pair<int, int> rows_refreshed_by(long ref_slot, const Geometry& geometry,
                                      const TimingParams& timing) {
  const long slots = timing.refresh_slots();
  const long slot = ((ref_slot % slots) + slots) % slots;
  const long per_slot = (geometry.rows + slots - 1) / slots;  // ceil
  const long first = slot * per_slot;
  if (first >= geometry.rows) return {0, 0};
  const long count = std::min<long>(per_slot, geometry.rows - first);
  return {static_cast<int>(first), static_cast<int>(count)};
}

DramDevice::DramDevice(const Geometry& geometry, const TimingParams& timing)
    : geometry_(geometry), timing_(timing) {
  geometry_.validate();
  timing_.validate();
  banks_.resize(geometry_.total_banks());
  last_issue_.assign(geometry_.channels, -1);
  ref_slots_.assign(geometry_.channels * geometry_.ranks, 0);
}

bool DramDevice::rank_all_precharged(int channel, int rank) const {
  const int base = (channel * geometry_.ranks + rank) * geometry_.banks_per_rank();
  for (int b = 0; b < geometry_.banks_per_rank(); ++b)
    if (banks_[base + b].is_open()) return false;
  return true;
}

Legality DramDevice::validate_command(const Command& cmd) const {
  const DramAddress& a = cmd.address;
  if (a.channel < 0 || a.channel >= geometry_.channels) return {Constraint::Geometry};
  if (a.rank < 0 || a.rank >= geometry_.ranks) return {Constraint::Geometry};
  if (cmd.kind != CommandKind::REF) {
    if (geometry_violation(geometry_, a) != nullptr &&
        // row/column granularity: ACT/PRE carry no meaningful column
        !((cmd.kind == CommandKind::ACT || cmd.kind == CommandKind::PRE) &&
          geometry_violation(geometry_, DramAddress{a.channel, a.rank, a.bankgroup, a.bank, a.row,
                                                    0}) == nullptr))
      return {Constraint::Geometry};
  }
  if (cmd.issue_time < last_issue_[a.channel]) return {Constraint::IssueOrder};

  const Ns t = cmd.issue_time;
  switch (cmd.kind) {
    case CommandKind::ACT: {
      const BankState& bank = banks_[a.bank_id(geometry_)];
      if (bank.is_open()) return {Constraint::BankAlreadyOpen};
      if (t < bank.busy_until) return {Constraint::TRfc};
      if (bank.last_precharge_at >= 0 && t < bank.last_precharge_at + timing_.tRP)
        return {Constraint::TRp};
      if (bank.last_act_at >= 0 && t < bank.last_act_at + timing_.tRC) return {Constraint::TRc};
      break;
    }
    case CommandKind::PRE: {
      const BankState& bank = banks_[a.bank_id(geometry_)];
      if (!bank.is_open()) return {Constraint::RowNotOpen};
      if (t < bank.opened_at + timing_.tRAS) return {Constraint::TRas};
      break;
    }
    case CommandKind::RD:
    case CommandKind::WR: {
      const BankState& bank = banks_[a.bank_id(geometry_)];
      if (!bank.is_open()) return {Constraint::RowNotOpen};
      if (*bank.open_row != a.row) return {Constraint::RowMismatch};
      if (t < bank.opened_at + timing_.tRCD) return {Constraint::TRcd};
      break;
    }
    case CommandKind::REF: {
      const int base = (a.channel * geometry_.ranks + a.rank) * geometry_.banks_per_rank();
      for (int b = 0; b < geometry_.banks_per_rank(); ++b) {
        const BankState& bank = banks_[base + b];
        if (bank.is_open()) return {Constraint::RefWithOpenBank};
        if (t < bank.busy_until) return {Constraint::TRfc};
        if (bank.last_precharge_at >= 0 && t < bank.last_precharge_at + timing_.tRP)
          return {Constraint::TRp};
      }
      break;
    }
  }
  return {Constraint::None};
}

std::vector<Event> DramDevice::apply_command(const Command& cmd) {
  const Legality verdict = validate_command(cmd);
  if (!verdict.legal())
    throw HardFault(std::string("applied illegal ") + to_string(cmd.kind) + " at t=" +
                    std::to_string(cmd.issue_time) + ": violates " + to_string(verdict.violated));

  std::vector<Event> events;
  const DramAddress& a = cmd.address;
  last_issue_[a.channel] = cmd.issue_time;

  switch (cmd.kind) {
    case CommandKind::ACT: {
      BankState& bank = banks_[a.bank_id(geometry_)];
      bank.open_row = a.row;
      bank.opened_at = cmd.issue_time;
      bank.last_act_at = cmd.issue_time;
      Event e{Event::Kind::RowOpened};
      e.opened = {a, cmd.issue_time};
      events.push_back(e);
      break;
    }
    case CommandKind::PRE: {
      BankState& bank = banks_[a.bank_id(geometry_)];
      Event e{Event::Kind::RowClosed};
      DramAddress row_addr = a;
      row_addr.row = *bank.open_row;
      row_addr.column = 0;
      e.closed = {row_addr, cmd.issue_time, bank.t_agg_on(cmd.issue_time)};
      events.push_back(e);
      bank.open_row.reset();
      bank.last_precharge_at = cmd.issue_time;
      break;
    }
    case CommandKind::RD:
    case CommandKind::WR:
      break;  // column accesses do not change row state
    case CommandKind::REF: {
      const int rank_index = a.channel * geometry_.ranks + a.rank;
      const long slot = ref_slots_[rank_index]++;
      auto [first, count] = rows_refreshed_by(slot, geometry_, timing_);
      const int base = rank_index * geometry_.banks_per_rank();
      for (int b = 0; b < geometry_.banks_per_rank(); ++b)
        banks_[base + b].busy_until = cmd.issue_time + timing_.tRFC;
      Event e{Event::Kind::RefreshPerformed};
      e.refresh = {a.channel, a.rank, cmd.issue_time, slot, first, count};
      events.push_back(e);
      break;
    }
  }
  return events;
}

}  // namespace rowsim
