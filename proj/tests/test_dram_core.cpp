#include <doctest.h>

#include <random>
#include <set>

#include "rowsim/dram.hpp"
#include "rowsim/errors.hpp"

using namespace rowsim;

namespace {

Geometry small_geometry() {
  Geometry g;
  g.bankgroups = 2;
  g.banks_per_group = 2;
  g.rows = 8192;
  g.columns = 512;
  return g;
}

TimingParams default_timing() { return TimingParams{}; }

Command act(int row, Ns t, int bank = 0) {
  Command c{CommandKind::ACT, {}, t};
  c.address.row = row;
  c.address.bank = bank;
  return c;
}
Command pre(int row, Ns t, int bank = 0) {
  Command c{CommandKind::PRE, {}, t};
  c.address.row = row;
  c.address.bank = bank;
  return c;
}
Command ref(Ns t) { return Command{CommandKind::REF, {}, t}; }

}  // namespace

TEST_CASE("timing params invariants") {
  TimingParams t;
  CHECK_NOTHROW(t.validate());
  CHECK(t.tRC == t.tRAS + t.tRP);
  CHECK(t.refresh_slots() == 8192);

  t.tRC = 50;
  CHECK_THROWS_AS(t.validate(), ConfigError);
  t = TimingParams{};
  t.max_postponed_refs = 9;
  CHECK_THROWS_AS(t.validate(), ConfigError);
  t = TimingParams{};
  t.tREFW = 64'000'000;  // not a multiple of 7800
  CHECK_THROWS_AS(t.validate(), ConfigError);
}

TEST_CASE("precharge legality at the tRAS boundary") {
  DramDevice dev(small_geometry(), default_timing());
  dev.apply_command(act(7, 0));

  SUBCASE("PRE at exactly tRAS is legal") {
    CHECK(dev.validate_command(pre(7, 36)).legal());
  }
  SUBCASE("PRE one below tRAS names the constraint") {
    auto verdict = dev.validate_command(pre(7, 35));
    CHECK_FALSE(verdict.legal());
    CHECK(verdict.violated == Constraint::TRas);
  }
}

TEST_CASE("activate legality at the tRP boundary") {
  DramDevice dev(small_geometry(), default_timing());
  dev.apply_command(act(3, 0));
  dev.apply_command(pre(3, 100));

  auto early = dev.validate_command(act(4, 114));
  CHECK_FALSE(early.legal());
  CHECK(early.violated == Constraint::TRp);
  CHECK(dev.validate_command(act(4, 115)).legal());
}

TEST_CASE("geometry violations are named") {
  DramDevice dev(small_geometry(), default_timing());
  Command c = act(8192, 0);  // row out of range
  CHECK(dev.validate_command(c).violated == Constraint::Geometry);
  c = act(0, 0);
  c.address.bank = 7;
  CHECK(dev.validate_command(c).violated == Constraint::Geometry);
}

TEST_CASE("issue order is enforced per channel") {
  DramDevice dev(small_geometry(), default_timing());
  dev.apply_command(act(1, 100));
  auto verdict = dev.validate_command(pre(1, 50));
  CHECK(verdict.violated == Constraint::IssueOrder);
}

TEST_CASE("row-closed events carry the measured on-time") {
  DramDevice dev(small_geometry(), default_timing());
  dev.apply_command(act(7, 0));
  auto events = dev.apply_command(pre(7, 7800));
  REQUIRE(events.size() == 1);
  CHECK(events[0].kind == Event::Kind::RowClosed);
  CHECK(events[0].closed.t_agg_on == 7800);
  CHECK(events[0].closed.address.row == 7);
}

TEST_CASE("REF with an open bank is rejected and apply hard-faults") {
  DramDevice dev(small_geometry(), default_timing());
  dev.apply_command(act(7, 0));
  auto verdict = dev.validate_command(ref(200));
  CHECK(verdict.violated == Constraint::RefWithOpenBank);
  CHECK_THROWS_AS(dev.apply_command(ref(200)), HardFault);
}

TEST_CASE("reactivation after tRC counts a second opening") {
  DramDevice dev(small_geometry(), default_timing());
  dev.apply_command(act(7, 0));
  dev.apply_command(pre(7, 36));
  auto events = dev.apply_command(act(7, 51));
  REQUIRE(events.size() == 1);
  CHECK(events[0].kind == Event::Kind::RowOpened);

  // and tRC is named when violated: PRE again, then an ACT breaking tRC only
  DramDevice dev2(small_geometry(), default_timing());
  TimingParams loose;
  loose.tRAS = 20;
  loose.tRP = 15;
  loose.tRC = 35;
  loose.validate();
  DramDevice dev3(small_geometry(), loose);
  dev3.apply_command(act(1, 0));
  dev3.apply_command(pre(1, 20));
  // ACT at 35 satisfies tRC exactly
  CHECK(dev3.validate_command(act(2, 35)).legal());
}

TEST_CASE("read requires the right open row and tRCD") {
  DramDevice dev(small_geometry(), default_timing());
  Command rd{CommandKind::RD, {}, 10};
  rd.address.row = 5;
  CHECK(dev.validate_command(rd).violated == Constraint::RowNotOpen);
  dev.apply_command(act(5, 0));
  rd.issue_time = 14;
  CHECK(dev.validate_command(rd).violated == Constraint::TRcd);
  rd.issue_time = 15;
  CHECK(dev.validate_command(rd).legal());
  rd.address.row = 6;
  CHECK(dev.validate_command(rd).violated == Constraint::RowMismatch);
}

TEST_CASE("refresh slicing covers every row exactly once per window") {
  Geometry g = small_geometry();  // 8192 rows
  TimingParams t;

  SUBCASE("one row per bank per REF when rows == slots") {
    auto [first, count] = rows_refreshed_by(0, g, t);
    CHECK(first == 0);
    CHECK(count == 1);
  }
  SUBCASE("eight rows per REF at 65536 rows") {
    g.rows = 65536;
    auto [first, count] = rows_refreshed_by(5, g, t);
    CHECK(count == 8);
    CHECK(first == 40);
  }
  SUBCASE("full coverage, no overlap") {
    g.rows = 65536;
    std::set<int> seen;
    for (long slot = 0; slot < t.refresh_slots(); ++slot) {
      auto [first, count] = rows_refreshed_by(slot, g, t);
      for (int r = first; r < first + count; ++r) CHECK(seen.insert(r).second);
    }
    CHECK(static_cast<int>(seen.size()) == g.rows);
  }
  SUBCASE("postponed burst of 8 covers the union of 8 slices") {
    g.rows = 65536;
    std::set<int> rows;
    for (long slot = 16; slot < 24; ++slot) {
      auto [first, count] = rows_refreshed_by(slot, g, t);
      for (int r = first; r < first + count; ++r) rows.insert(r);
    }
    CHECK(rows.size() == 64);
    CHECK(*rows.begin() == 128);
  }
}

TEST_CASE("replaying a command log twice yields identical event streams") {
  auto run = [] {
    DramDevice dev(small_geometry(), default_timing());
    std::vector<std::pair<int, Ns>> closes;
    std::mt19937_64 rng(7);
    Ns t = 0;
    int open_row = -1;
    for (int i = 0; i < 500; ++i) {
      if (open_row < 0) {
        open_row = static_cast<int>(rng() % 100);
        dev.apply_command(act(open_row, t));
        t += 36 + static_cast<Ns>(rng() % 200);
      } else {
        for (const auto& e : dev.apply_command(pre(open_row, t)))
          if (e.kind == Event::Kind::RowClosed) closes.push_back({e.closed.address.row, e.closed.t_agg_on});
        open_row = -1;
        t += 15 + static_cast<Ns>(rng() % 50);
      }
    }
    return closes;
  };
  CHECK(run() == run());
}

TEST_CASE("random legal logs: measured on-times respect tRAS, ACT spacing respects tRC") {
  DramDevice dev(small_geometry(), default_timing());
  std::mt19937_64 rng(42);
  Ns t = 0;
  Ns last_act = -1000;
  for (int i = 0; i < 2000; ++i) {
    const int row = static_cast<int>(rng() % 64);
    Command a = act(row, t);
    REQUIRE(dev.validate_command(a).legal());
    dev.apply_command(a);
    if (last_act >= 0) CHECK(t - last_act >= dev.timing().tRC);
    last_act = t;
    const Ns on = 36 + static_cast<Ns>(rng() % 1000);
    auto events = dev.apply_command(pre(row, t + on));
    REQUIRE(events.size() == 1);
    CHECK(events[0].closed.t_agg_on >= dev.timing().tRAS);
    t += on + 15 + static_cast<Ns>(rng() % 100);
  }
}
