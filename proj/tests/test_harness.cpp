#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "gbo/config.hpp"
#include "gbo/harness.hpp"
#include "support.hpp"

using namespace gbo;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path scratch_dir() {
  const auto dir = std::filesystem::temp_directory_path() / "gbo_unit_tests";
  std::filesystem::create_directories(dir);
  return dir;
}

// Small soliton configuration that runs in well under a second.
RunConfig small_soliton() {
  RunConfig c;
  c.n = 128;
  c.alpha = 6.0;
  c.m = 2;
  c.initial.kind = InitialKind::Soliton;
  c.initial.c = 1.0;
  c.initial.x0 = 0.0;
  c.tau = 0.05;
  c.t_final = 0.5;
  c.scheme = Scheme::IRK_MC;
  c.stages = 2;
  return c;
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("reals and fractions") {
  CHECK(parse_real("0.25") == 0.25);
  CHECK(parse_real(" 1/6400 ") == 1.0 / 6400.0);
  CHECK(parse_real("-2e-3") == -2e-3);
  CHECK_THROWS_AS(parse_real("abc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_real("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_real("1.5x"), std::invalid_argument);
  const auto list = parse_real_list("1/200, 1/400 0.00125");
  REQUIRE(list.size() == 3);
  CHECK(list[1] == 1.0 / 400.0);
}

TEST_CASE("key-value parsing") {
  std::istringstream in(
      "# comment line\n"
      "N = 256   # trailing comment\n"
      "\n"
      "scheme=irk4-ec\n"
      "snapshot_times = 0.5, 1\n"
      "N = 512\n");
  const Config cfg = Config::parse(in);
  CHECK(cfg.get_int("N", 0) == 512);
  CHECK(cfg.get_string("scheme", "") == "irk4-ec");
  CHECK(cfg.get_real_list("snapshot_times") == std::vector<double>{0.5, 1.0});
  CHECK(cfg.get_real("alpha", 25.0) == 25.0);
  CHECK_FALSE(cfg.has("alpha"));

  std::istringstream bad("N 256\n");
  CHECK_THROWS_AS(Config::parse(bad), std::invalid_argument);
  std::istringstream bad_int("N = 25.5\n");
  CHECK_THROWS_AS(Config::parse(bad_int).get_int("N", 0), std::invalid_argument);
}

TEST_CASE("run configuration") {
  std::istringstream in(
      "N = 64\nalpha = 3\nm = 2\nscheme = irk2-ec\ntau = 1/40\nT = 1\n"
      "initial = sech2\namplitude = -1\nC0 = 2\n");
  RunConfig rc = RunConfig::from_config(Config::parse(in));
  CHECK(rc.n == 64);
  CHECK(rc.scheme == Scheme::IRK_EC_SAV);
  CHECK(rc.stages == 1);
  CHECK(rc.step_count() == 40);
  CHECK(rc.initial.kind == InitialKind::Sech2);
  CHECK(rc.initial.amplitude == -1.0);
  CHECK(rc.c0 == 2.0);
  CHECK_FALSE(rc.has_exact_solution());

  SUBCASE("step size must divide T") {
    rc.tau = 0.3;
    CHECK_THROWS_AS(rc.validate(), std::invalid_argument);
  }
  SUBCASE("unknown keys are rejected") {
    std::istringstream typo("N = 64\ntua = 0.1\n");
    CHECK_THROWS_AS(RunConfig::from_config(Config::parse(typo)), std::invalid_argument);
  }
  SUBCASE("conflicting stage count") {
    std::istringstream clash("scheme = irk4-mc\nstages = 1\n");
    CHECK_THROWS_AS(RunConfig::from_config(Config::parse(clash)), std::invalid_argument);
  }
}

}  // TEST_SUITE

TEST_SUITE("harness") {

TEST_CASE("scheme labels") {
  CHECK(scheme_label(Scheme::IRK_MC, 2) == "IRK4-MC");
  CHECK(scheme_label(Scheme::IRK_EC_SAV, 1) == "IRK2-EC");
  CHECK(scheme_label(Scheme::LEAPFROG, 2) == "Leap-Frog");
  CHECK(format_tau(1.0 / 400.0) == "1/400");
  CHECK(format_tau(0.3) == "0.3");
}

TEST_CASE("error tracker keeps running maxima") {
  ErrorTracker tr({1.0, 2.0, 3.0});
  tr.record(0.0, 0.0, {1.0, 2.0, 3.0});
  tr.record(0.1, 0.5, {1.0 + 1e-3, 2.0 - 2e-3, 3.0});
  tr.record(0.2, 0.7, {1.0, 2.0, 3.0 + 1e-4});
  const auto& r = tr.records();
  REQUIRE(r.size() == 3);
  CHECK(r[2].I_err == doctest::Approx(1e-3));
  CHECK(r[2].M_err == doctest::Approx(2e-3));
  CHECK(r[2].E_err == doctest::Approx(1e-4));
  for (std::size_t i = 1; i < r.size(); ++i) {
    CHECK(r[i].I_err >= r[i - 1].I_err);
    CHECK(r[i].M_err >= r[i - 1].M_err);
    CHECK(r[i].E_err >= r[i - 1].E_err);
  }
  CHECK(tr.last().linf_err == 0.7);
  CHECK_THROWS_AS(ErrorTracker().last(), std::logic_error);
}

TEST_CASE("trace CSV") {
  SUBCASE("empty trace is header only") {
    std::ostringstream out;
    write_trace_csv(out, {});
    CHECK(out.str() == "t,linf_err,I_err,M_err,E_err\n");
  }
  SUBCASE("one record in column order") {
    std::ostringstream out;
    write_trace_csv(out, {{0.05, 0.0, 1e-15, 2e-13, 3e-13}});
    std::istringstream in(out.str());
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    CHECK(row == "5.0000000000000003e-02,0.0000000000000000e+00,1.0000000000000001e-15,"
                 "2.0000000000000001e-13,2.9999999999999998e-13");
  }
  SUBCASE("round trip") {
    std::vector<TraceRecord> recs;
    for (int i = 0; i < 7; ++i) {
      recs.push_back({0.1 * i, std::sqrt(2.0) * i, 1.0 / (3.0 + i), std::exp(-i), std::numeric_limits<double>::quiet_NaN()});
    }
    std::ostringstream out;
    write_trace_csv(out, recs);
    std::istringstream in(out.str());
    const auto back = read_trace_csv(in);
    std::ostringstream again;
    write_trace_csv(again, back);
    CHECK(again.str() == out.str());
    REQUIRE(back.size() == recs.size());
    CHECK(back[3].linf_err == recs[3].linf_err);
    CHECK(std::isnan(back[3].E_err));
  }
}

TEST_CASE("snapshot and reference CSV") {
  const SpectralGrid g(32, 2.0);
  const auto u = test::random_field(g, 77);
  const auto dir = scratch_dir();
  const std::string snap = (dir / "snap.csv").string();
  write_snapshot_csv(snap, g, u);
  CHECK(slurp(snap).rfind("x,u\n", 0) == 0);
  CHECK(test::sup_diff(read_snapshot_csv(snap, g), u) == 0.0);
  CHECK_THROWS(read_snapshot_csv(snap, SpectralGrid(32, 3.0)));
  CHECK(snapshot_path("out/run", 0.5) == "out/run_t0.5.csv");

  ReferenceSolution ref;
  ref.snapshots = {{0.0, u}, {0.25, test::random_field(g, 78)}};
  const std::string refp = (dir / "ref.csv").string();
  write_reference_csv(refp, g, ref);
  const auto back = read_reference_csv(refp, g);
  REQUIRE(back.snapshots.size() == 2);
  REQUIRE(back.at(0.25) != nullptr);
  CHECK(test::sup_diff(*back.at(0.25), ref.snapshots[1].u) == 0.0);
  CHECK(back.at(0.3) == nullptr);
}

TEST_CASE("rate table") {
  RateTable t;
  t.taus = {0.1, 0.05, 0.025};
  t.labels = {"A", "B"};
  t.errors = {{7.05, 3.60, std::nullopt}, {1.0, 1.0 / 16.0, 1.0 / 256.0}};
  CHECK(RateTable::ratio(7.05, 3.60) == doctest::Approx(1.96).epsilon(1e-3));
  CHECK(*t.rate(0, 1) == doctest::Approx(1.9583).epsilon(1e-4));
  CHECK_FALSE(t.rate(0, 2).has_value());
  CHECK_FALSE(t.rate(1, 0).has_value());
  CHECK(*t.rate(1, 2) == doctest::Approx(16.0));

  std::ostringstream out;
  write_rate_table_csv(out, t);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "tau,A_error,A_rate,B_error,B_rate");
  std::getline(in, line);
  CHECK(line.rfind("1/10,7.050000e+00,NA,1.000000e+00,NA", 0) == 0);
  std::getline(in, line);
  std::getline(in, line);
  CHECK(line.rfind("1/40,NA,NA,3.906250e-03,16.0000", 0) == 0);
}

TEST_CASE("zero initial data") {
  for (Scheme s : {Scheme::CN_MC, Scheme::CN_EC, Scheme::IRK_MC, Scheme::IRK_EC_SAV, Scheme::LEAPFROG}) {
    CAPTURE(to_string(s));
    RunConfig c = small_soliton();
    c.initial.kind = InitialKind::Zero;
    c.scheme = s;
    c.t_final = 0.2;
    const RunResult r = run_simulation(c);
    CHECK(test::sup_norm(r.final_u) == 0.0);
    for (const auto& rec : r.trace.records()) {
      CHECK(rec.I_err == 0.0);
      CHECK(rec.M_err == 0.0);
      CHECK(rec.E_err == 0.0);
    }
  }
}

TEST_CASE("soliton run against the exact solution") {
  RunConfig c = small_soliton();
  const RunResult r = run_simulation(c);
  REQUIRE(r.trace.records().size() == 11);
  CHECK(r.trace.last().t == doctest::Approx(0.5));
  CHECK(r.trace.last().linf_err < 1e-4);
  CHECK(r.trace.last().M_err < 1e-11 * 8.0 * 3.14159);
  CHECK_FALSE(r.diverged);
}

TEST_CASE("references and self-comparison") {
  RunConfig c = small_soliton();
  c.initial.kind = InitialKind::Sech2;
  c.initial.amplitude = -1.0;
  const SpectralGrid g(c.n, c.alpha);
  const ReferenceSolution ref = reference_solution(c, c.tau, {0.25});
  REQUIRE(ref.at(0.0) != nullptr);
  REQUIRE(ref.at(0.25) != nullptr);
  CHECK(test::sup_diff(*ref.at(0.0), make_initial(c, g)) == 0.0);
  const RunResult r = run_simulation(c, &ref);
  CHECK(r.trace.last().linf_err == 0.0);
  CHECK(r.trace.records()[5].linf_err == 0.0);
  CHECK(std::isnan(r.trace.records()[1].linf_err));
}

TEST_CASE("output files are deterministic") {
  const auto dir = scratch_dir();
  RunConfig c = small_soliton();
  c.scheme = Scheme::IRK_EC_SAV;
  c.snapshot_times = {0.25};
  c.trace_path = (dir / "trace_a.csv").string();
  c.snapshot_prefix = (dir / "snap_a").string();
  run_simulation(c);
  c.trace_path = (dir / "trace_b.csv").string();
  c.snapshot_prefix = (dir / "snap_b").string();
  run_simulation(c);
  const std::string a = slurp((dir / "trace_a.csv").string());
  CHECK(a.size() > 100);
  CHECK(a == slurp((dir / "trace_b.csv").string()));
  CHECK(slurp(snapshot_path((dir / "snap_a").string(), 0.25)) ==
        slurp(snapshot_path((dir / "snap_b").string(), 0.25)));
}

TEST_CASE("divergence is reported, not thrown") {
  RunConfig c = small_soliton();
  c.scheme = Scheme::LEAPFROG;
  c.divergence_threshold = 1.0;  // the soliton peak is 4
  const RunResult r = run_simulation(c);
  CHECK(r.diverged);
  CHECK(r.diverged_step == 1);
}

TEST_CASE("sweep") {
  RunConfig c = small_soliton();
  c.t_final = 0.4;
  const std::vector<double> taus{0.1, 0.05, 0.025};
  const std::vector<SweepEntry> schemes{{Scheme::IRK_MC, 1}, {Scheme::LEAPFROG, 2}};

  SUBCASE("serial and parallel agree") {
    SweepOptions serial;
    serial.parallel = false;
    const RateTable a = convergence_sweep(c, taus, schemes, serial);
    const RateTable b = convergence_sweep(c, taus, schemes, {});
    CHECK(a.labels == std::vector<std::string>{"IRK2-MC", "Leap-Frog"});
    CHECK(a.errors == b.errors);
    CHECK(*a.rate(0, 2) == doctest::Approx(4.0).epsilon(0.1));
  }
  SUBCASE("failed runs become NA") {
    RunConfig d = c;
    d.divergence_threshold = 1.0;
    const RateTable t = convergence_sweep(d, taus, schemes);
    for (const auto& row : t.errors) {
      for (const auto& e : row) CHECK_FALSE(e.has_value());
    }
  }
  SUBCASE("step sizes must halve") {
    CHECK_THROWS_AS(convergence_sweep(c, {0.1, 0.04}), std::invalid_argument);
    CHECK_THROWS_AS(convergence_sweep(c, {0.1}), std::invalid_argument);
  }
}

}  // TEST_SUITE
