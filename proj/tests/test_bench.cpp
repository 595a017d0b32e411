#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "bench.hpp"
#include "errors.hpp"
#include "series.hpp"

using riso::Error;
using riso::EstimatorSpec;
using riso::ExperimentConfig;
using riso::NoiseLaw;
using riso::RiskRow;
using riso::RiskTable;
using riso::SignalSpec;

namespace {

ExperimentConfig tiny_config() {
  ExperimentConfig cfg;
  cfg.id = "tiny";
  cfg.signal.family = SignalSpec::Family::Staircase;
  cfg.signal.k = 2;
  cfg.signal.delta = 2.0;
  cfg.sigma = 1.0;
  cfg.n_grid = {24, 48};
  EstimatorSpec iso;
  iso.method = EstimatorSpec::Method::Isotonic;
  EstimatorSpec red;
  red.method = EstimatorSpec::Method::Reduced;
  red.k_true = true;
  cfg.estimators = {iso, red};
  cfg.p_list = {2.0, 1.0};
  cfg.replications = 6;
  cfg.seed = 17;
  return cfg;
}

// Everything except the wall-clock column, which legitimately varies
// between runs.
bool same_except_runtime(const RiskTable& a, const RiskTable& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const RiskRow& x = a[i];
    const RiskRow& y = b[i];
    if (x.experiment != y.experiment || x.n != y.n || x.true_k != y.true_k ||
        x.signal != y.signal || x.noise != y.noise ||
        x.estimator != y.estimator || x.p != y.p ||
        x.replications != y.replications || x.mean_loss != y.mean_loss ||
        x.std_error != y.std_error || x.mean_k_hat != y.mean_k_hat) {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("power losses") {
  std::vector<double> a = {0.0, 3.0};
  std::vector<double> b = {1.0, 1.0};
  CHECK(riso::lp_loss(a, b, 1.0) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(riso::lp_loss(a, b, 2.0) == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(riso::lp_loss(a, b, 3.0) == doctest::Approx(9.0).epsilon(1e-12));
  CHECK(riso::lp_loss(a, a, 2.0) == 0.0);
  CHECK_THROWS_AS(riso::lp_loss(a, {1.0}, 2.0), Error);
  CHECK_THROWS_AS(riso::lp_loss(a, b, 0.0), Error);
}

TEST_CASE("experiment rows come out in grid-major order") {
  RiskTable t = riso::run_experiment(tiny_config(), 1);
  // 2 grid sizes x 2 estimators x 2 exponents.
  REQUIRE(t.size() == 8);
  std::vector<std::size_t> want_n = {24, 24, 24, 24, 48, 48, 48, 48};
  std::vector<std::string> want_est = {"iso", "iso", "reduced(k=true)",
                                       "reduced(k=true)", "iso", "iso",
                                       "reduced(k=true)", "reduced(k=true)"};
  for (std::size_t i = 0; i < t.size(); ++i) {
    CHECK(t[i].n == want_n[i]);
    CHECK(t[i].estimator == want_est[i]);
    CHECK(t[i].experiment == "tiny");
    CHECK(t[i].true_k == 2);
    CHECK(t[i].signal == "staircase");
    CHECK(t[i].noise == "gaussian");
    CHECK(t[i].replications == 6);
    CHECK(t[i].mean_loss >= 0.0);
    CHECK(t[i].std_error >= 0.0);
    CHECK(t[i].mean_runtime >= 0.0);
  }
  CHECK(t[0].p == 2.0);
  CHECK(t[1].p == 1.0);
  // Reduced at the true budget reports it.
  CHECK(t[2].mean_k_hat <= 2.0);
  CHECK(t[2].mean_k_hat >= 1.0);
}

TEST_CASE("replications are deterministic across runs and thread counts") {
  ExperimentConfig cfg = tiny_config();
  RiskTable serial = riso::run_experiment(cfg, 1);
  RiskTable again = riso::run_experiment(cfg, 1);
  RiskTable wide = riso::run_experiment(cfg, 4);
  CHECK(same_except_runtime(serial, again));
  CHECK(same_except_runtime(serial, wide));
}

TEST_CASE("seed changes the outcome") {
  ExperimentConfig cfg = tiny_config();
  RiskTable a = riso::run_experiment(cfg, 1);
  cfg.seed = 18;
  RiskTable b = riso::run_experiment(cfg, 1);
  CHECK_FALSE(same_except_runtime(a, b));
}

TEST_CASE("one-piece risk on a flat signal approaches the noise variance") {
  ExperimentConfig cfg;
  cfg.id = "flat";
  cfg.signal.family = SignalSpec::Family::Staircase;
  cfg.signal.k = 1;
  cfg.signal.delta = 0.0;
  cfg.sigma = 1.0;
  cfg.n_grid = {64};
  EstimatorSpec red;
  red.method = EstimatorSpec::Method::Reduced;
  red.k = 1;
  cfg.estimators = {red};
  cfg.p_list = {2.0};
  cfg.replications = 400;
  cfg.seed = 5;
  RiskTable t = riso::run_experiment(cfg, 2);
  REQUIRE(t.size() == 1);
  // The squared-error loss of the grand mean is sigma^2 in expectation.
  CHECK(std::abs(t[0].mean_loss - 1.0) <= 3.0 * t[0].std_error);
  CHECK(t[0].mean_k_hat == 1.0);
}

TEST_CASE("lower-bound signals can fix or randomise the tail exponent") {
  ExperimentConfig cfg;
  cfg.id = "tail";
  cfg.signal.family = SignalSpec::Family::LowerBound;
  cfg.signal.alpha = 1.0;
  cfg.signal.ell = 1;
  cfg.sigma = 1.0;
  cfg.n_grid = {32};
  EstimatorSpec iso;
  iso.method = EstimatorSpec::Method::Isotonic;
  cfg.estimators = {iso};
  cfg.p_list = {2.0};
  cfg.replications = 4;
  cfg.seed = 2;
  RiskTable fixed = riso::run_experiment(cfg, 1);
  REQUIRE(fixed.size() == 1);
  CHECK(fixed[0].signal == "lower_bound");
  CHECK(fixed[0].true_k == 2);

  cfg.signal.ell.reset();  // random per replication
  RiskTable mixed = riso::run_experiment(cfg, 1);
  REQUIRE(mixed.size() == 1);
}

TEST_CASE("all estimator kinds run end to end") {
  ExperimentConfig cfg;
  cfg.id = "everything";
  cfg.signal.family = SignalSpec::Family::Staircase;
  cfg.signal.k = 2;
  cfg.signal.delta = 3.0;
  cfg.sigma = 0.5;
  cfg.n_grid = {20};
  EstimatorSpec iso, anti, red, aut, mod, seg, segauto, uni;
  iso.method = EstimatorSpec::Method::Isotonic;
  anti.method = EstimatorSpec::Method::Antitonic;
  red.method = EstimatorSpec::Method::Reduced;
  red.k = 2;
  aut.method = EstimatorSpec::Method::Auto;
  mod.method = EstimatorSpec::Method::AutoModified;
  seg.method = EstimatorSpec::Method::Segment;
  seg.k_true = true;
  segauto.method = EstimatorSpec::Method::SegmentAuto;
  segauto.k_max = 8;
  uni.method = EstimatorSpec::Method::Unimodal;
  uni.k = 3;
  uni.label = "bump";
  cfg.estimators = {iso, anti, red, aut, mod, seg, segauto, uni};
  cfg.p_list = {2.0};
  cfg.replications = 3;
  cfg.seed = 11;
  RiskTable t = riso::run_experiment(cfg, 2);
  REQUIRE(t.size() == 8);
  CHECK(t[0].estimator == "iso");
  CHECK(t[1].estimator == "antitonic");
  CHECK(t[2].estimator == "reduced(k=2)");
  CHECK(t[3].estimator == "auto");
  CHECK(t[4].estimator == "auto-modified");
  CHECK(t[5].estimator == "segment(k=true)");
  CHECK(t[6].estimator == "segment-auto");
  CHECK(t[7].estimator == "bump");
  // The adaptive rows report the average selected budget.
  CHECK(t[3].mean_k_hat >= 1.0);
}

TEST_CASE("config validation") {
  ExperimentConfig cfg = tiny_config();
  cfg.replications = 1;
  CHECK_THROWS_AS(riso::run_experiment(cfg, 1), Error);
  cfg = tiny_config();
  cfg.estimators.clear();
  CHECK_THROWS_AS(riso::run_experiment(cfg, 1), Error);
  cfg = tiny_config();
  cfg.p_list.clear();
  CHECK_THROWS_AS(riso::run_experiment(cfg, 1), Error);
  cfg = tiny_config();
  cfg.n_grid.clear();
  CHECK_THROWS_AS(riso::run_experiment(cfg, 1), Error);
}

TEST_CASE("csv output round-trips exactly") {
  RiskTable t;
  RiskRow r;
  r.experiment = "weird, \"quoted\"";
  r.n = 100;
  r.true_k = 3;
  r.signal = "staircase";
  r.noise = "gen_gaussian(0.7)";
  r.estimator = "line\nbreak";
  r.p = 1.5;
  r.replications = 7;
  r.mean_loss = 1.0 / 3.0;
  r.std_error = 0.1;
  r.mean_k_hat = 2.7182818284590452;
  r.mean_runtime = 1e-5;
  t.push_back(r);
  RiskRow s = r;
  s.experiment = "plain";
  s.estimator = "iso";
  s.mean_loss = 12345.6789;
  t.push_back(s);

  std::string csv = riso::format_table(t);
  CHECK(csv.rfind("experiment,n,true_k,signal,noise,estimator,p,replications,"
                  "mean_loss,std_error,mean_k_hat,mean_runtime\n",
                  0) == 0);

  RiskTable back = riso::parse_table(csv);
  REQUIRE(back.size() == 2);
  CHECK(back[0].experiment == r.experiment);
  CHECK(back[0].estimator == r.estimator);
  CHECK(back[0].noise == r.noise);
  CHECK(back[0].n == 100);
  CHECK(back[0].true_k == 3);
  CHECK(back[0].p == 1.5);
  CHECK(back[0].replications == 7);
  CHECK(back[0].mean_loss == r.mean_loss);
  CHECK(back[0].std_error == r.std_error);
  CHECK(back[0].mean_k_hat == r.mean_k_hat);
  CHECK(back[0].mean_runtime == r.mean_runtime);
  CHECK(back[1].mean_loss == s.mean_loss);
}

TEST_CASE("csv writes to disk") {
  auto path = std::filesystem::temp_directory_path() / "riso_bench_test.csv";
  RiskTable t = riso::run_experiment(tiny_config(), 1);
  riso::write_table(t, path.string());
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  RiskTable back = riso::parse_table(text);
  CHECK(same_except_runtime(t, back));
  CHECK(back[0].mean_runtime == t[0].mean_runtime);
  std::filesystem::remove(path);

  CHECK_THROWS_AS(
      riso::write_table(t, "/nonexistent-dir/riso_bench_test.csv"), Error);
}

TEST_CASE("table parser rejects malformed input") {
  CHECK_THROWS_AS(riso::parse_table("not,a,header\n1,2,3\n"), Error);
  std::string good = riso::format_table({});
  CHECK(riso::parse_table(good).empty());
  std::string bad_number =
      good + "e,1,1,s,gaussian,iso,2,xyz,0,0,1,0\n";
  CHECK_THROWS_AS(riso::parse_table(bad_number), Error);
  std::string short_row = good + "e,1,1,s,gaussian,iso,2\n";
  CHECK_THROWS_AS(riso::parse_table(short_row), Error);
}

TEST_CASE("json config describes experiments") {
  std::string text = R"({
    "experiments": [
      {
        "id": "demo",
        "signal": {"family": "staircase", "k": 3, "delta": 1.5},
        "noise": {"law": "gen_gaussian", "gamma": 1.0},
        "sigma": 2.0,
        "n": [64, 128],
        "estimators": [
          {"method": "iso"},
          {"method": "reduced", "k": "true"},
          {"method": "reduced", "k": 5, "label": "cap5"},
          {"method": "auto", "c_tau": 3.0},
          {"method": "auto-modified", "tau": 1.25},
          {"method": "segment-auto", "k_max": 16},
          {"method": "unimodal", "k": 4, "sigma": 0.5}
        ],
        "p": [2, 1],
        "replications": 12,
        "seed": 99
      },
      {
        "id": "tail",
        "signal": {"family": "lower_bound", "alpha": 0.5, "ell": "random"},
        "noise": {"law": "uniform"},
        "sigma": 1.0,
        "n": [32],
        "estimators": [{"method": "antitonic"}, {"method": "segment", "k": 2}],
        "p": [2],
        "replications": 2,
        "seed": 1
      }
    ]
  })";
  auto cfgs = riso::parse_config(text);
  REQUIRE(cfgs.size() == 2);
  CHECK(cfgs[0].id == "demo");
  CHECK(cfgs[0].signal.family == SignalSpec::Family::Staircase);
  CHECK(cfgs[0].signal.k == 3);
  CHECK(cfgs[0].signal.delta == 1.5);
  CHECK(cfgs[0].noise.law == NoiseLaw::GenGaussian);
  CHECK(cfgs[0].noise.gamma == 1.0);
  CHECK(cfgs[0].sigma == 2.0);
  CHECK(cfgs[0].n_grid == std::vector<std::size_t>{64, 128});
  REQUIRE(cfgs[0].estimators.size() == 7);
  CHECK(cfgs[0].estimators[1].k_true);
  CHECK(cfgs[0].estimators[2].k == 5);
  CHECK(cfgs[0].estimators[2].label == "cap5");
  CHECK(cfgs[0].estimators[3].c_tau == 3.0);
  CHECK(cfgs[0].estimators[4].tau == 1.25);
  CHECK(cfgs[0].estimators[5].k_max == 16);
  CHECK(cfgs[0].estimators[6].sigma == 0.5);
  CHECK(cfgs[0].p_list == std::vector<double>{2.0, 1.0});
  CHECK(cfgs[0].replications == 12);
  CHECK(cfgs[0].seed == 99);
  CHECK(cfgs[1].signal.family == SignalSpec::Family::LowerBound);
  CHECK_FALSE(cfgs[1].signal.ell.has_value());
  CHECK(cfgs[1].noise.law == NoiseLaw::Uniform);
}

TEST_CASE("json config errors carry the field path") {
  auto fails_with = [](const std::string& text, const std::string& needle) {
    try {
      riso::parse_config(text);
      return false;
    } catch (const Error& e) {
      return std::string(e.what()).find(needle) != std::string::npos;
    }
  };

  CHECK(fails_with("{}", "experiments"));
  CHECK(fails_with("{\"experiments\": []}", "experiments"));
  CHECK(fails_with("not json", "invalid JSON"));

  std::string base = R"({"experiments":[{"id":"x","signal":SIG,
    "noise":{"law":"gaussian"},"sigma":1,"n":[16],
    "estimators":[EST],"p":[2],"replications":4,"seed":1}]})";
  auto with = [&](const std::string& sig, const std::string& est) {
    std::string t = base;
    t.replace(t.find("SIG"), 3, sig);
    t.replace(t.find("EST"), 3, est);
    return t;
  };

  std::string ok_sig = R"({"family":"staircase","k":2,"delta":1})";
  std::string ok_est = R"({"method":"iso"})";

  CHECK(fails_with(with(R"({"family":"staircase","delta":1})", ok_est),
                   "experiments[0].signal.k"));
  CHECK(fails_with(with(R"({"family":"nope"})", ok_est), "signal.family"));
  CHECK(fails_with(with(ok_sig, R"({"method":"bogus"})"),
                   "estimators[0].method"));
  CHECK(fails_with(with(ok_sig, R"({"method":"reduced"})"),
                   "estimators[0].k"));
  CHECK(fails_with(with(ok_sig, R"({"method":"auto","tau":-1})"), "tau"));
  CHECK(fails_with(with(R"({"family":"staircase","k":40,"delta":1})", ok_est),
                   "signal.k"));

  std::string gamma_bad = with(ok_sig, ok_est);
  gamma_bad.replace(gamma_bad.find(R"({"law":"gaussian"})"),
                    std::string(R"({"law":"gaussian"})").size(),
                    R"({"law":"gen_gaussian","gamma":2.5})");
  CHECK(fails_with(gamma_bad, "gamma"));

  std::string reps_bad = with(ok_sig, ok_est);
  reps_bad.replace(reps_bad.find("\"replications\":4"),
                   std::string("\"replications\":4").size(),
                   "\"replications\":1");
  CHECK(fails_with(reps_bad, "replications"));
}

TEST_CASE("config file loading reports missing files") {
  CHECK_THROWS_AS(riso::load_config("/nonexistent-dir/missing.json"), Error);
}
