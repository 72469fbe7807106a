#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "rowsim/cells.hpp"
#include "rowsim/dose.hpp"
#include "rowsim/errors.hpp"
#include "rowsim/ledger.hpp"

using namespace rowsim;
using doctest::Approx;

// Independent piecewise log-log interpolator, kept deliberately separate from
// DoseCurve::evaluate. The frozen constants below were computed with it.
namespace {
double oracle_interp(const std::vector<std::pair<double, double>>& anchors, double slope_after,
                     double t) {
  if (t <= anchors.front().first) return anchors.front().second;
  if (t >= anchors.back().first) {
    const auto& [ta, da] = anchors.back();
    return da * std::pow(t / ta, slope_after);
  }
  for (size_t i = 1; i < anchors.size(); ++i) {
    if (t <= anchors[i].first) {
      const auto& [t0, d0] = anchors[i - 1];
      const auto& [t1, d1] = anchors[i];
      const double w = (std::log(t) - std::log(t0)) / (std::log(t1) - std::log(t0));
      return std::exp(std::log(d0) * (1 - w) + std::log(d1) * w);
    }
  }
  return anchors.back().second;
}

const std::vector<std::pair<double, double>> kPressAnchors = {
    {36, 0.02}, {186, 1.17 / 21}, {7800, 1.0}, {70200, 190.0 / 21}};
}  // namespace

TEST_CASE("press dose anchors and extrapolation") {
  const MechanismModel m = default_model();

  CHECK(m.press_dose(7800, 50.0) == Approx(1.0));
  CHECK(m.press_dose(70200, 50.0) == Approx(190.0 / 21.0));  // 9.0476
  // tail slope +1 extrapolation: 9.0476 * (30e6 / 70200) = 3866.5
  CHECK(m.press_dose(30'000'000, 50.0) == Approx(3866.503866).epsilon(1e-6));
  // below the first anchor: constant
  CHECK(m.press_dose(36, 50.0) == Approx(0.02));

  // mid-segment interpolation matches the independent oracle
  for (Ns t : {50, 100, 360, 1000, 20000, 50000, 200000})
    CHECK(m.press_dose(t, 50.0) ==
          Approx(oracle_interp(kPressAnchors, 1.0, static_cast<double>(t))).epsilon(1e-12));
}

TEST_CASE("dose is monotone nondecreasing in on-time") {
  const MechanismModel m = default_model();
  double prev = 0.0;
  for (Ns t = 36; t < 50'000'000; t = t * 5 / 4 + 1) {
    const double d = m.press_dose(t, 50.0);
    CHECK(d >= prev);
    prev = d;
  }
  CHECK(m.hammer_dose(36, 50.0) == Approx(1.0));
  CHECK(m.hammer_dose(30'000'000, 50.0) == Approx(1.0));  // flat curve
}

TEST_CASE("temperature scaling of the press curve") {
  const MechanismModel m = default_model();
  CHECK(m.press_dose(7800, 80.0) == Approx(1.0 / 0.55));
  CHECK(m.press_dose(7800, 50.0) == Approx(1.0));
  // clamped outside the listed range, interpolated inside
  CHECK(m.press_dose(7800, 20.0) == Approx(1.0));
  CHECK(m.press_dose(7800, 90.0) == Approx(1.0 / 0.55));
  const double mid = m.press_dose(7800, 65.0);
  CHECK(mid > 1.0);
  CHECK(mid < 1.0 / 0.55);
  // hammer is temperature-flat
  CHECK(m.hammer_dose(7800, 80.0) == Approx(1.0));
}

TEST_CASE("dose evaluation rejects nonpositive on-time") {
  const MechanismModel m = default_model();
  CHECK_THROWS_AS(m.press.evaluate(0, 50.0), ContractViolation);
}

TEST_CASE("closed-form activation counts at the calibration anchors") {
  const MechanismModel m = default_model();
  CHECK(acmin_closed_form(m, 36, 50.0) == 1000);
  CHECK(acmin_closed_form(m, 7800, 50.0) == 48);    // ceil(1000/21)
  CHECK(acmin_closed_form(m, 70200, 50.0) == 6);    // ceil(1000/190)
  CHECK(acmin_closed_form(m, 30'000'000, 50.0) == 1);
  CHECK_THROWS_AS(acmin_closed_form(m, 35, 50.0), ContractViolation);
}

TEST_CASE("closed form is nonincreasing in on-time and temperature") {
  const MechanismModel m = default_model();
  std::int64_t prev = acmin_closed_form(m, 36, 50.0);
  for (Ns t = 40; t <= 30'000'000; t = t * 3 / 2) {
    const auto ac = acmin_closed_form(m, t, 50.0);
    CHECK(ac <= prev);
    prev = ac;
  }
  for (Ns t : {36, 7800, 70200, 1'000'000})
    CHECK(acmin_closed_form(m, t, 80.0) <= acmin_closed_form(m, t, 50.0));
}

TEST_CASE("double-sided needs no more total activations than single-sided") {
  const MechanismModel m = default_model();
  for (Ns t : {36, 186, 7800, 70200, 1'000'000})
    CHECK(acmin_closed_form(m, t, 50.0, Pattern::DoubleSided) <=
          acmin_closed_form(m, t, 50.0, Pattern::SingleSided));
}

TEST_CASE("log-log slope of the closed form over [7.8us, 30ms]") {
  // integer rounding washes out at chip-scale thresholds
  const MechanismModel m = scaled_model(75.6);
  std::vector<double> xs, ys;
  const double lo = std::log(7800.0), hi = std::log(30e6);
  for (int i = 0; i < 12; ++i) {
    const double lt = lo + (hi - lo) * i / 11.0;
    const Ns t = static_cast<Ns>(std::exp(lt));
    xs.push_back(std::log(static_cast<double>(t)));
    ys.push_back(std::log(static_cast<double>(acmin_closed_form(m, t, 50.0))));
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int n = static_cast<int>(xs.size());
  for (int i = 0; i < n; ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  CHECK(slope == Approx(-1.0).epsilon(0.01));
}

TEST_CASE("record_activation doses victims on both sides with distance coupling") {
  const MechanismModel m = default_model();
  DisturbanceLedger ledger(1000);

  SUBCASE("single activation at tRAS") {
    ledger.record_activation(m, 500, 36, 50.0, 0);
    CHECK(ledger.entry(501).hammer == Approx(1.0));
    CHECK(ledger.entry(499).hammer == Approx(1.0));
    CHECK(ledger.entry(501).press == Approx(0.02));
    CHECK(ledger.entry(499).press == Approx(0.02));
    CHECK(ledger.entry(502).hammer == Approx(0.05));
    CHECK(ledger.entry(503).hammer == Approx(0.01));
    CHECK(ledger.entry(504).hammer == Approx(0.0));
    CHECK(ledger.entry(500).hammer == Approx(0.0));  // the aggressor itself
  }
  SUBCASE("a thousand activations reach the hammer threshold exactly") {
    for (int i = 0; i < 1000; ++i) ledger.record_activation(m, 500, 36, 50.0, i * 51);
    CHECK(ledger.entry(501).hammer == Approx(1000.0));
    CHECK(ledger.entry(501).hammer >= m.theta_hammer);
  }
  SUBCASE("double-sided pair doses the shared victim twice per pair") {
    ledger.record_activation(m, 499, 7800, 50.0, 0);
    ledger.record_activation(m, 501, 7800, 50.0, 7815);
    CHECK(ledger.entry(500).press == Approx(2.0));
    CHECK(ledger.entry(500).hammer == Approx(2.0));
  }
  SUBCASE("edge rows clamp") {
    ledger.record_activation(m, 0, 36, 50.0, 0);
    CHECK(ledger.entry(1).hammer == Approx(1.0));  // no negative-row write
  }
  SUBCASE("on-time below tRAS violates the contract") {
    CHECK_THROWS_AS(ledger.record_activation(m, 10, 35, 50.0, 0), ContractViolation);
  }
}

TEST_CASE("refresh_row zeroes a row without touching neighbors") {
  const MechanismModel m = default_model();
  DisturbanceLedger ledger(100);
  for (int i = 0; i < 40; ++i) ledger.record_activation(m, 50, 36, 50.0, i);
  const double before = ledger.entry(49).hammer;
  CHECK(before > 0.0);

  ledger.refresh_row(51, 1000);
  CHECK(ledger.entry(51).hammer == 0.0);
  CHECK(ledger.entry(51).press == 0.0);
  CHECK(ledger.entry(51).last_refresh == 1000);
  CHECK(ledger.entry(49).hammer == Approx(before));  // isolation

  ledger.refresh_row(51, 1000);  // idempotent
  CHECK(ledger.entry(51).hammer == 0.0);
}

TEST_CASE("ledger dose equals an event-log replay oracle") {
  const MechanismModel m = default_model();
  DisturbanceLedger ledger(4096);
  std::mt19937_64 rng(11);
  struct Record {
    int row;
    Ns on;
  };
  std::vector<Record> log;
  for (int i = 0; i < 5000; ++i) {
    const int row = 100 + static_cast<int>(rng() % 200);
    const Ns on = 36 + static_cast<Ns>(rng() % 100000);
    log.push_back({row, on});
    ledger.record_activation(m, row, on, 50.0, i);
  }
  // replay independently for one victim
  const int victim = 180;
  double hammer = 0.0, press = 0.0;
  for (const auto& r : log) {
    const int d = std::abs(r.row - victim);
    if (d < 1 || d > 3) continue;
    const double coupling = m.distance_coupling[d - 1];
    hammer += coupling * m.hammer_dose(r.on, 50.0);
    press += coupling * m.press_dose(r.on, 50.0);
  }
  CHECK(ledger.entry(victim).hammer == Approx(hammer).epsilon(1e-9));
  CHECK(ledger.entry(victim).press == Approx(press).epsilon(1e-9));
}

TEST_CASE("cell profile sampling is deterministic and normalized") {
  CellParams params;
  CellProfile a(params, 8192, 1234);
  CellProfile b(params, 8192, 1234);
  const RowCells& ra = a.row_cells(42);
  const RowCells& rb = b.row_cells(42);
  REQUIRE(ra.press.size() == rb.press.size());
  for (size_t i = 0; i < ra.press.size(); ++i) {
    CHECK(ra.press[i].column == rb.press[i].column);
    CHECK(ra.press[i].multiplier == rb.press[i].multiplier);
  }
  // weakest cell of each mechanism sits exactly at 1.0
  double press_min = 1e30, hammer_min = 1e30;
  for (const auto& c : ra.press) press_min = std::min(press_min, c.multiplier);
  for (const auto& c : ra.hammer) hammer_min = std::min(hammer_min, c.multiplier);
  CHECK(press_min == Approx(1.0));
  CHECK(hammer_min == Approx(1.0));

  CellProfile c(params, 8192, 99);
  CHECK(c.row_cells(42).press[0].column != ra.press[0].column);  // seed matters (w.h.p.)
}

TEST_CASE("collect_bitflips matches a brute-force per-cell threshold scan") {
  const MechanismModel m = default_model();
  CellParams params;
  CellProfile profile(params, 8192, 7);
  DisturbanceLedger ledger(512);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 3000; ++i)
    ledger.record_activation(m, 100 + static_cast<int>(rng() % 64),
                             36 + static_cast<Ns>(rng() % 30000), 50.0, i);

  const auto flips = collect_bitflips(ledger, profile, m, 0);

  // oracle: scan every touched row's cells directly
  std::set<std::pair<int, int>> expected;
  for (int row : ledger.touched_rows()) {
    const auto& e = ledger.entry(row);
    const RowCells& rc = profile.row_cells(row);
    for (const auto& cell : rc.press)
      if (e.press >= m.theta_press * cell.multiplier) expected.insert({row, cell.column});
    for (const auto& cell : rc.hammer)
      if (e.hammer >= m.theta_hammer * cell.multiplier) expected.insert({row, cell.column});
  }
  std::set<std::pair<int, int>> got;
  for (const auto& f : flips) got.insert({f.row, f.column});
  CHECK(got == expected);
  CHECK_FALSE(got.empty());
}

TEST_CASE("empty ledger yields no flips") {
  const MechanismModel m = default_model();
  CellParams params;
  CellProfile profile(params, 8192, 7);
  DisturbanceLedger ledger(512);
  CHECK(collect_bitflips(ledger, profile, m, 0).empty());
}

TEST_CASE("press flips go 1->0 and hammer flips 0->1 in true-cell rows") {
  const MechanismModel m = default_model();
  CellParams params;
  CellProfile profile(params, 8192, 21);
  DisturbanceLedger ledger(64);
  // saturate both mechanisms on row 31's victims
  for (int i = 0; i < 200000; ++i) ledger.record_activation(m, 30, 7800, 50.0, i);
  const auto flips = collect_bitflips(ledger, profile, m, 0);
  REQUIRE_FALSE(flips.empty());
  bool saw_press = false, saw_hammer = false;
  for (const auto& f : flips) {
    if (f.mechanism == Mechanism::Press) {
      CHECK(f.direction == FlipDirection::OneToZero);
      saw_press = true;
    }
    if (f.mechanism == Mechanism::Hammer) {
      CHECK(f.direction == FlipDirection::ZeroToOne);
      saw_hammer = true;
    }
  }
  CHECK(saw_press);
  CHECK(saw_hammer);
}

TEST_CASE("partial press dose flips exactly the cells within the multiplier") {
  const MechanismModel m = default_model();
  CellParams params;
  CellProfile profile(params, 8192, 5);
  DisturbanceLedger ledger(64);
  // dose the victim to 1.5x the press threshold, keep hammer below
  const int aggressor = 10;
  const double target = 1.5 * m.theta_press;
  const double per_act = m.press_dose(70200, 50.0);
  const long acts = static_cast<long>(target / per_act) + 1;
  for (long i = 0; i < acts; ++i) ledger.record_activation(m, aggressor, 70200, 50.0, i);
  REQUIRE(ledger.entry(11).hammer < m.theta_hammer);

  const auto flips = collect_bitflips(ledger, profile, m, 0);
  const RowCells& rc = profile.row_cells(11);
  const double dose = ledger.entry(11).press;
  std::set<int> expected;
  for (const auto& cell : rc.press)
    if (dose >= m.theta_press * cell.multiplier) expected.insert(cell.column);
  std::set<int> got;
  for (const auto& f : flips)
    if (f.row == 11) got.insert(f.column);
  CHECK(got == expected);
  CHECK(got.size() >= 1);
  CHECK(got.size() < rc.press.size());  // 1.5x does not flip the whole population
}

TEST_CASE("retention cells flip only after their budget") {
  const MechanismModel m = default_model();
  CellParams params;
  CellProfile profile(params, 8192, 33);
  DisturbanceLedger ledger(64);
  std::vector<int> rows = {7};
  CHECK(collect_bitflips(ledger, profile, m, 64'000'000, rows).empty());
  const auto flips = collect_bitflips(ledger, profile, m, 4'000'000'000LL, rows);
  CHECK_FALSE(flips.empty());
  for (const auto& f : flips) CHECK(f.mechanism == Mechanism::Retention);
}
