#include <doctest.h>

#include <random>

#include "rowsim/controller.hpp"
#include "rowsim/patterns.hpp"

using namespace rowsim;

namespace {
TimingParams timing() { return TimingParams{}; }
Geometry geometry() { return Geometry{}; }

PatternSpec single(int row, Ns t_on, long acts) {
  PatternSpec s;
  s.kind = PatternSpec::Kind::SingleSided;
  s.aggressor.row = row;
  s.t_agg_on = t_on;
  s.activations = acts;
  return s;
}
}  // namespace

TEST_CASE("single-sided log at minimal on-time: exact command times") {
  const auto log = gen_direct(single(100, 36, 3), timing());
  REQUIRE(log.size() == 6);
  CHECK(log[0].kind == CommandKind::ACT);
  CHECK(log[0].issue_time == 0);
  CHECK(log[1].kind == CommandKind::PRE);
  CHECK(log[1].issue_time == 36);
  CHECK(log[2].issue_time == 51);
  CHECK(log[3].issue_time == 87);
  CHECK(log[4].issue_time == 102);
  CHECK(log[5].issue_time == 138);
  for (const auto& c : log) CHECK(c.address.row == 100);
}

TEST_CASE("double-sided alternates the two aggressor rows") {
  PatternSpec s = single(100, 7800, 4);
  s.kind = PatternSpec::Kind::DoubleSided;
  const auto log = gen_direct(s, timing());
  REQUIRE(log.size() == 8);
  CHECK(log[0].address.row == 100);
  CHECK(log[2].address.row == 102);
  CHECK(log[4].address.row == 100);
  CHECK(log[6].address.row == 102);
}

TEST_CASE("onoff timing splits delta between on and off") {
  PatternSpec s;
  s.kind = PatternSpec::Kind::OnOff;
  s.aggressor.row = 10;
  s.delta_ta2a = 240;
  s.on_fraction = 0.25;
  s.activations = 3;
  CHECK(s.onoff_t_on(36) == 96);
  CHECK(s.onoff_t_off(15) == 195);

  const auto log = gen_direct(s, timing());
  REQUIRE(log.size() == 6);
  // tA2A = tAggON + tAggOFF exactly
  CHECK(log[2].issue_time - log[0].issue_time == 96 + 195);
  CHECK(log[1].issue_time - log[0].issue_time == 96);
}

TEST_CASE("onoff fraction grid is enforced") {
  PatternSpec s;
  s.kind = PatternSpec::Kind::OnOff;
  s.delta_ta2a = 240;
  s.on_fraction = 0.3;
  CHECK_THROWS_AS(s.validate(timing()), ConfigError);
}

TEST_CASE("generated logs always validate") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 50; ++i) {
    PatternSpec s;
    const int kind = static_cast<int>(rng() % 3);
    s.kind = kind == 0   ? PatternSpec::Kind::SingleSided
             : kind == 1 ? PatternSpec::Kind::DoubleSided
                         : PatternSpec::Kind::OnOff;
    s.aggressor.row = 50 + static_cast<int>(rng() % 1000);
    s.t_agg_on = 36 + static_cast<Ns>(rng() % 100000);
    s.delta_ta2a = 4 * static_cast<Ns>(rng() % 2000);
    const double grid[] = {0.0, 0.25, 0.5, 0.75, 1.0};
    s.on_fraction = grid[rng() % 5];
    s.activations = 1 + static_cast<long>(rng() % 100);
    if (direct_duration(s, timing(), s.activations) > s.time_budget) continue;

    DramDevice dev(geometry(), timing());
    for (const auto& cmd : gen_direct(s, timing())) {
      REQUIRE(dev.validate_command(cmd).legal());
      dev.apply_command(cmd);
    }
  }
}

TEST_CASE("minimal on-time equals the plain hammering generator byte for byte") {
  // the conventional pattern: open, close as soon as legal, repeat
  CommandLog expected;
  Ns t = 0;
  for (int i = 0; i < 10; ++i) {
    Command a{CommandKind::ACT, {}, t};
    a.address.row = 77;
    Command p{CommandKind::PRE, {}, t + 36};
    p.address.row = 77;
    expected.push_back(a);
    expected.push_back(p);
    t += 51;
  }
  const auto log = gen_direct(single(77, 36, 10), timing());
  REQUIRE(log.size() == expected.size());
  for (size_t i = 0; i < log.size(); ++i) {
    CHECK(log[i].kind == expected[i].kind);
    CHECK(log[i].issue_time == expected[i].issue_time);
    CHECK(log[i].address.row == expected[i].address.row);
  }
}

TEST_CASE("budget overflow raises an infeasibility error") {
  PatternSpec s = single(10, 30'000'000, 3);  // 3 x 30ms over a 60ms budget
  CHECK_THROWS_AS(gen_direct(s, timing()), InfeasiblePattern);
  CHECK(max_activations_in_budget(s, timing()) == 1);  // 60ms / 30.000015ms
}

TEST_CASE("bypass trace structure") {
  PatternSpec s;
  s.kind = PatternSpec::Kind::TrrBypass;
  s.aggressor.row = 4095;
  s.num_aggr_acts = 2;
  s.num_reads = 4;
  s.num_dummy = 16;
  s.iterations = 3;
  const AddressMap map = AddressMap::default_layout(geometry());
  const auto gen = gen_trr_bypass(s, map, timing(), geometry());

  CHECK(gen.victim_row == 4096);
  CHECK(gen.aggressor_rows == std::vector<int>{4095, 4097});
  REQUIRE(gen.dummy_rows.size() == 16);
  for (int d : gen.dummy_rows) CHECK(d - gen.victim_row >= 100);
  CHECK(gen.warnings.empty());

  // per iteration: 64 dummy accesses + 2 rounds x 2 aggressors x 4 reads
  CHECK(gen.requests.size() == 3 * (64 + 2 * 2 * 4));

  // iteration 1 content stays within its refresh window
  long in_window1 = 0;
  for (const auto& r : gen.requests)
    if (r.arrival_time >= 7800 && r.arrival_time < 15600) ++in_window1;
  CHECK(in_window1 == 64 + 16);

  // dummy phase comes first in each window, aggressors at the end
  const auto& first = gen.requests.front();
  bool first_is_dummy = false;
  for (int d : gen.dummy_rows) first_is_dummy = first_is_dummy || first.address.row == d;
  CHECK(first_is_dummy);

  // 64 column-distinct aggressor reads per window pair: columns 0..3 blocks
  for (const auto& r : gen.requests)
    if (r.address.row == 4095) CHECK(r.address.column % 64 == 0);
}

TEST_CASE("single-block bypass degenerates to plain double-sided hammering") {
  PatternSpec s;
  s.kind = PatternSpec::Kind::TrrBypass;
  s.aggressor.row = 1000;
  s.num_aggr_acts = 3;
  s.num_reads = 1;
  s.iterations = 1;
  const auto gen = gen_trr_bypass(s, AddressMap::default_layout(geometry()), timing(), geometry());
  int aggr_reads = 0;
  for (const auto& r : gen.requests)
    if (r.address.row == 1000 || r.address.row == 1002) {
      CHECK(r.address.column == 0);  // one cache block only
      ++aggr_reads;
    }
  CHECK(aggr_reads == 6);
}

TEST_CASE("over-long bypass iteration records a warning") {
  PatternSpec s;
  s.kind = PatternSpec::Kind::TrrBypass;
  s.aggressor.row = 1000;
  s.num_aggr_acts = 3;
  s.num_reads = 64;  // 6 x ~990ns + dummies exceeds one tREFI window
  s.iterations = 1;
  const auto gen = gen_trr_bypass(s, AddressMap::default_layout(geometry()), timing(), geometry());
  CHECK_FALSE(gen.warnings.empty());
}

TEST_CASE("interleaved flush variant spaces the reads wider") {
  PatternSpec s;
  s.kind = PatternSpec::Kind::TrrBypass;
  s.aggressor.row = 1000;
  s.num_aggr_acts = 1;
  s.num_reads = 8;
  s.iterations = 1;
  const AddressMap map = AddressMap::default_layout(geometry());
  const auto batched = gen_trr_bypass(s, map, timing(), geometry());
  s.variant = PatternSpec::FlushVariant::Interleaved;
  const auto interleaved = gen_trr_bypass(s, map, timing(), geometry());

  auto read_span = [](const GeneratedTrace& g, int row) {
    Ns lo = 1LL << 60, hi = 0;
    for (const auto& r : g.requests)
      if (r.address.row == row) {
        lo = std::min(lo, r.arrival_time);
        hi = std::max(hi, r.arrival_time);
      }
    return hi - lo;
  };
  CHECK(read_span(interleaved, 1000) == 2 * read_span(batched, 1000));
}
