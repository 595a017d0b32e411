#include "bench.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "errors.hpp"
#include "kahan.hpp"
#include "model_select.hpp"
#include "pava.hpp"
#include "reduced.hpp"
#include "segment.hpp"
#include "unimodal.hpp"

namespace riso {

double lp_loss(const std::vector<double>& a, const std::vector<double>& b, double p) {
  if (a.size() != b.size()) {
    raise(ErrorKind::Dimension, "loss arguments differ in length");
  }
  if (!(p > 0.0)) {
    raise(ErrorKind::Argument, "loss exponent must be positive");
  }
  KahanSum acc;
  if (p == 2.0) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      double d = a[i] - b[i];
      acc.add(d * d);
    }
  } else if (p == 1.0) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      acc.add(std::abs(a[i] - b[i]));
    }
  } else {
    for (std::size_t i = 0; i < a.size(); ++i) {
      acc.add(std::pow(std::abs(a[i] - b[i]), p));
    }
  }
  return acc.value();
}

namespace {

std::string signal_name(const SignalSpec& s) {
  return s.family == SignalSpec::Family::Staircase ? "staircase" : "lower_bound";
}

std::string noise_name(const NoiseSpec& s) {
  switch (s.law) {
    case NoiseLaw::Gaussian:
      return "gaussian";
    case NoiseLaw::Uniform:
      return "uniform";
    case NoiseLaw::GenGaussian: {
      std::ostringstream os;
      os << "gen_gaussian(gamma=" << s.gamma << ")";
      return os.str();
    }
  }
  return "?";
}

std::size_t signal_true_k(const SignalSpec& s) {
  return s.family == SignalSpec::Family::Staircase ? s.k : 2;
}

std::string estimator_label(const EstimatorSpec& e) {
  if (!e.label.empty()) return e.label;
  auto with_k = [&](const char* base) {
    std::ostringstream os;
    os << base << "(k=";
    if (e.k_true) {
      os << "true";
    } else {
      os << *e.k;
    }
    os << ")";
    return os.str();
  };
  switch (e.method) {
    case EstimatorSpec::Method::Isotonic: return "iso";
    case EstimatorSpec::Method::Antitonic: return "antitonic";
    case EstimatorSpec::Method::Reduced: return with_k("reduced");
    case EstimatorSpec::Method::Auto: return "auto";
    case EstimatorSpec::Method::AutoModified: return "auto-modified";
    case EstimatorSpec::Method::Segment: return with_k("segment");
    case EstimatorSpec::Method::SegmentAuto: return "segment-auto";
    case EstimatorSpec::Method::Unimodal: return with_k("unimodal");
  }
  return "?";
}

struct RepOutcome {
  std::vector<double> losses;  // one per p
  double k_stat = 0.0;
  double runtime = 0.0;
};

std::size_t estimator_k(const EstimatorSpec& e, const ExperimentConfig& cfg) {
  if (e.k_true) return signal_true_k(cfg.signal);
  return e.k ? *e.k : 1;
}

RepOutcome apply_estimator(const EstimatorSpec& e, const ExperimentConfig& cfg,
                           const Series& x, const std::vector<double>& truth,
                           std::uint64_t sub_seed) {
  const std::size_t n = x.size();
  auto start = std::chrono::steady_clock::now();
  std::vector<double> fitted;
  double k_stat = 0.0;
  switch (e.method) {
    case EstimatorSpec::Method::Isotonic: {
      FitResult f = isotonic_fit(x);
      k_stat = static_cast<double>(f.k_used);
      fitted = f.fit.dense();
      break;
    }
    case EstimatorSpec::Method::Antitonic: {
      FitResult f = antitonic_fit(x);
      k_stat = static_cast<double>(f.k_used);
      fitted = f.fit.dense();
      break;
    }
    case EstimatorSpec::Method::Reduced: {
      FitResult f = fit_k(x, std::min(estimator_k(e, cfg), n));
      k_stat = static_cast<double>(f.k_used);
      fitted = f.fit.dense();
      break;
    }
    case EstimatorSpec::Method::Auto:
    case EstimatorSpec::Method::AutoModified: {
      PenaltySpec spec;
      spec.family = e.method == EstimatorSpec::Method::Auto ? PenaltyFamily::Plain
                                                           : PenaltyFamily::Modified;
      spec.tau = e.tau;
      spec.c_tau = e.c_tau;
      if (e.sigma) {
        spec.sigma = *e.sigma;
      } else if (!e.tau) {
        spec.sigma = cfg.sigma;  // simulation truth unless overridden
      }
      SelectResult sel = select_k(fit_all_k(x), x, spec);
      k_stat = static_cast<double>(sel.k_hat);
      fitted = sel.result.fit.dense();
      break;
    }
    case EstimatorSpec::Method::Segment: {
      FitResult f = segment_fit(x, std::min(estimator_k(e, cfg), n));
      k_stat = static_cast<double>(f.k_used);
      fitted = f.fit.dense();
      break;
    }
    case EstimatorSpec::Method::SegmentAuto: {
      double tau = e.tau ? *e.tau : e.c_tau * cfg.sigma * cfg.sigma;
      std::size_t cap = e.k_max ? *e.k_max : std::min<std::size_t>(n, 64);
      SelectResult sel = segment_select_k(x, tau, std::min(cap, n));
      k_stat = static_cast<double>(sel.k_hat);
      fitted = sel.result.fit.dense();
      break;
    }
    case EstimatorSpec::Method::Unimodal: {
      double sigma = e.sigma ? *e.sigma : cfg.sigma;
      FitResult f = unimodal_aggregate(x, std::min(estimator_k(e, cfg), n), sigma, sub_seed);
      k_stat = static_cast<double>(f.k_used);
      fitted = f.fit.dense();
      break;
    }
  }
  auto stop = std::chrono::steady_clock::now();

  RepOutcome out;
  out.losses.reserve(cfg.p_list.size());
  for (double p : cfg.p_list) {
    out.losses.push_back(lp_loss(fitted, truth, p));
  }
  out.k_stat = k_stat;
  out.runtime = std::chrono::duration<double>(stop - start).count();
  return out;
}

void run_replication(const ExperimentConfig& cfg, std::size_t n_idx, std::size_t rep,
                     std::vector<RepOutcome>& sink) {
  const std::size_t n = cfg.n_grid[n_idx];
  RngStream rng(derive_key(cfg.seed, {n_idx, rep}));
  std::vector<double> truth;
  if (cfg.signal.family == SignalSpec::Family::Staircase) {
    truth = staircase_signal(n, cfg.signal.k, cfg.signal.delta);
  } else {
    std::size_t max_ell = static_cast<std::size_t>(
        std::ceil(std::log2(static_cast<double>(n))));
    std::size_t ell = cfg.signal.ell ? *cfg.signal.ell
                                     : rng.uniform_index(1, max_ell);
    truth = lower_bound_signal(n, ell, cfg.signal.alpha, cfg.sigma);
  }
  std::vector<double> data = sample_noise(cfg.noise, n, cfg.sigma, rng);
  for (std::size_t i = 0; i < n; ++i) data[i] += truth[i];
  Series x(std::move(data));
  std::uint64_t sub_seed = derive_key(cfg.seed, {n_idx, rep, 0xa66ULL});
  for (std::size_t ei = 0; ei < cfg.estimators.size(); ++ei) {
    sink[ei] = apply_estimator(cfg.estimators[ei], cfg, x, truth, sub_seed);
  }
}

}  // namespace

RiskTable run_experiment(const ExperimentConfig& cfg, int threads) {
  if (cfg.replications < 2) {
    raise(ErrorKind::Config, "replications must be at least 2");
  }
  if (cfg.n_grid.empty() || cfg.estimators.empty() || cfg.p_list.empty()) {
    raise(ErrorKind::Config, "n grid, estimators and p list must be nonempty");
  }
  RiskTable table;
  const std::size_t R = cfg.replications;
  for (std::size_t ni = 0; ni < cfg.n_grid.size(); ++ni) {
    // results[rep][estimator]
    std::vector<std::vector<RepOutcome>> results(
        R, std::vector<RepOutcome>(cfg.estimators.size()));
    auto worker = [&](std::size_t lo, std::size_t hi) {
      for (std::size_t rep = lo; rep < hi; ++rep) {
        run_replication(cfg, ni, rep, results[rep]);
      }
    };
    int nthreads = threads > 1 ? threads : 1;
    if (nthreads == 1 || R < 2 * static_cast<std::size_t>(nthreads)) {
      worker(0, R);
    } else {
      std::vector<std::thread> pool;
      std::size_t chunk = (R + nthreads - 1) / nthreads;
      for (int t = 0; t < nthreads; ++t) {
        std::size_t lo = static_cast<std::size_t>(t) * chunk;
        std::size_t hi = std::min(R, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back(worker, lo, hi);
      }
      for (auto& th : pool) th.join();
    }

    for (std::size_t ei = 0; ei < cfg.estimators.size(); ++ei) {
      for (std::size_t pi = 0; pi < cfg.p_list.size(); ++pi) {
        KahanSum sum;
        for (std::size_t rep = 0; rep < R; ++rep) {
          sum.add(results[rep][ei].losses[pi]);
        }
        double mean = sum.value() / static_cast<double>(R);
        KahanSum var;
        for (std::size_t rep = 0; rep < R; ++rep) {
          double d = results[rep][ei].losses[pi] - mean;
          var.add(d * d);
        }
        double se = std::sqrt(var.value() / static_cast<double>(R - 1)) /
                    std::sqrt(static_cast<double>(R));
        KahanSum ks, rt;
        for (std::size_t rep = 0; rep < R; ++rep) {
          ks.add(results[rep][ei].k_stat);
          rt.add(results[rep][ei].runtime);
        }
        RiskRow row;
        row.experiment = cfg.id;
        row.n = cfg.n_grid[ni];
        row.true_k = signal_true_k(cfg.signal);
        row.signal = signal_name(cfg.signal);
        row.noise = noise_name(cfg.noise);
        row.estimator = estimator_label(cfg.estimators[ei]);
        row.p = cfg.p_list[pi];
        row.replications = R;
        row.mean_loss = mean;
        row.std_error = se;
        row.mean_k_hat = ks.value() / static_cast<double>(R);
        row.mean_runtime = rt.value() / static_cast<double>(R);
        table.push_back(std::move(row));
      }
    }
  }
  return table;
}

RiskTable run_config(const std::vector<ExperimentConfig>& configs, int threads) {
  RiskTable all;
  for (const ExperimentConfig& cfg : configs) {
    RiskTable part = run_experiment(cfg, threads);
    all.insert(all.end(), std::make_move_iterator(part.begin()),
               std::make_move_iterator(part.end()));
  }
  return all;
}

// ---------------------------------------------------------------------------
// CSV

namespace {

const char* const kHeader =
    "experiment,n,true_k,signal,noise,estimator,p,replications,"
    "mean_loss,std_error,mean_k_hat,mean_runtime";

std::string csv_escape(const std::string& field) {
  bool needs = field.find_first_of(",\"\r\n") != std::string::npos;
  if (!needs) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string format_table(const RiskTable& table) {
  std::string out = kHeader;
  out += '\n';
  for (const RiskRow& r : table) {
    out += csv_escape(r.experiment);
    out += ',';
    out += std::to_string(r.n);
    out += ',';
    out += std::to_string(r.true_k);
    out += ',';
    out += csv_escape(r.signal);
    out += ',';
    out += csv_escape(r.noise);
    out += ',';
    out += csv_escape(r.estimator);
    out += ',';
    out += format_double(r.p);
    out += ',';
    out += std::to_string(r.replications);
    out += ',';
    out += format_double(r.mean_loss);
    out += ',';
    out += format_double(r.std_error);
    out += ',';
    out += format_double(r.mean_k_hat);
    out += ',';
    out += format_double(r.mean_runtime);
    out += '\n';
  }
  return out;
}

void write_table(const RiskTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    raise(ErrorKind::Io, "cannot open '" + path + "' for writing");
  }
  out << format_table(table);
  if (!out.good()) {
    raise(ErrorKind::Io, "write to '" + path + "' failed");
  }
}

namespace {

// Split one CSV text into records of fields, honouring quoted fields.
std::vector<std::vector<std::string>> csv_records(const std::string& text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !cur.empty()) {
        fields.push_back(std::move(cur));
        cur.clear();
        records.push_back(std::move(fields));
        fields.clear();
        any = false;
      }
    } else {
      cur += c;
      any = true;
    }
  }
  if (any || !cur.empty()) {
    fields.push_back(std::move(cur));
    records.push_back(std::move(fields));
  }
  return records;
}

double parse_number(const std::string& s, const char* what) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    raise(ErrorKind::Io, std::string("malformed numeric field '") + s + "' for " + what);
  }
  return v;
}

}  // namespace

RiskTable parse_table(const std::string& csv) {
  auto records = csv_records(csv);
  if (records.empty()) {
    raise(ErrorKind::Io, "empty risk table");
  }
  std::string header;
  for (std::size_t i = 0; i < records[0].size(); ++i) {
    if (i) header += ',';
    header += records[0][i];
  }
  if (header != kHeader) {
    raise(ErrorKind::Io, "unexpected risk table header: " + header);
  }
  RiskTable table;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& f = records[r];
    if (f.size() != 12) {
      raise(ErrorKind::Io, "row " + std::to_string(r) + " has " +
                               std::to_string(f.size()) + " fields, expected 12");
    }
    RiskRow row;
    row.experiment = f[0];
    row.n = static_cast<std::size_t>(parse_number(f[1], "n"));
    row.true_k = static_cast<std::size_t>(parse_number(f[2], "true_k"));
    row.signal = f[3];
    row.noise = f[4];
    row.estimator = f[5];
    row.p = parse_number(f[6], "p");
    row.replications = static_cast<std::size_t>(parse_number(f[7], "replications"));
    row.mean_loss = parse_number(f[8], "mean_loss");
    row.std_error = parse_number(f[9], "std_error");
    row.mean_k_hat = parse_number(f[10], "mean_k_hat");
    row.mean_runtime = parse_number(f[11], "mean_runtime");
    table.push_back(std::move(row));
  }
  return table;
}

// ---------------------------------------------------------------------------
// JSON config

namespace {

using nlohmann::json;

[[noreturn]] void config_fail(const std::string& path, const std::string& message) {
  raise(ErrorKind::Config, path + ": " + message);
}

const json& need(const json& obj, const std::string& path, const char* key) {
  if (!obj.contains(key)) {
    config_fail(path + "." + key, "missing required field");
  }
  return obj.at(key);
}

double need_positive(const json& v, const std::string& path) {
  if (!v.is_number()) config_fail(path, "expected a number");
  double d = v.get<double>();
  if (!(d > 0.0) || !std::isfinite(d)) config_fail(path, "must be positive and finite");
  return d;
}

std::size_t need_count(const json& v, const std::string& path) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() > 0)) {
    config_fail(path, "expected a positive integer");
  }
  long long d = v.get<long long>();
  if (d < 1) config_fail(path, "expected a positive integer");
  return static_cast<std::size_t>(d);
}

SignalSpec parse_signal(const json& v, const std::string& path) {
  if (!v.is_object()) config_fail(path, "expected an object");
  SignalSpec out;
  std::string family = need(v, path, "family").get<std::string>();
  if (family == "staircase") {
    out.family = SignalSpec::Family::Staircase;
    out.k = need_count(need(v, path, "k"), path + ".k");
    const json& d = need(v, path, "delta");
    if (!d.is_number()) config_fail(path + ".delta", "expected a number");
    out.delta = d.get<double>();
  } else if (family == "lower_bound") {
    out.family = SignalSpec::Family::LowerBound;
    if (v.contains("alpha")) {
      out.alpha = need_positive(v.at("alpha"), path + ".alpha");
    }
    if (v.contains("ell")) {
      const json& e = v.at("ell");
      if (e.is_string() && e.get<std::string>() == "random") {
        out.ell.reset();
      } else {
        out.ell = need_count(e, path + ".ell");
      }
    }
  } else {
    config_fail(path + ".family", "unknown signal family '" + family + "'");
  }
  return out;
}

NoiseSpec parse_noise(const json& v, const std::string& path) {
  if (!v.is_object()) config_fail(path, "expected an object");
  NoiseSpec out;
  std::string law = need(v, path, "law").get<std::string>();
  if (law == "gaussian") {
    out.law = NoiseLaw::Gaussian;
  } else if (law == "uniform") {
    out.law = NoiseLaw::Uniform;
  } else if (law == "gen_gaussian") {
    out.law = NoiseLaw::GenGaussian;
    out.gamma = need_positive(need(v, path, "gamma"), path + ".gamma");
    if (out.gamma > 2.0) config_fail(path + ".gamma", "must lie in (0, 2]");
  } else {
    config_fail(path + ".law", "unknown noise law '" + law + "'");
  }
  return out;
}

EstimatorSpec parse_estimator(const json& v, const std::string& path) {
  if (!v.is_object()) config_fail(path, "expected an object");
  EstimatorSpec out;
  std::string method = need(v, path, "method").get<std::string>();
  bool wants_k = false;
  if (method == "iso") {
    out.method = EstimatorSpec::Method::Isotonic;
  } else if (method == "antitonic") {
    out.method = EstimatorSpec::Method::Antitonic;
  } else if (method == "reduced") {
    out.method = EstimatorSpec::Method::Reduced;
    wants_k = true;
  } else if (method == "auto") {
    out.method = EstimatorSpec::Method::Auto;
  } else if (method == "auto-modified") {
    out.method = EstimatorSpec::Method::AutoModified;
  } else if (method == "segment") {
    out.method = EstimatorSpec::Method::Segment;
    wants_k = true;
  } else if (method == "segment-auto") {
    out.method = EstimatorSpec::Method::SegmentAuto;
  } else if (method == "unimodal") {
    out.method = EstimatorSpec::Method::Unimodal;
    wants_k = true;
  } else {
    config_fail(path + ".method", "unknown estimator '" + method + "'");
  }
  if (wants_k) {
    const json& kv = need(v, path, "k");
    if (kv.is_string() && kv.get<std::string>() == "true") {
      out.k_true = true;
    } else {
      out.k = need_count(kv, path + ".k");
    }
  }
  if (v.contains("tau")) out.tau = need_positive(v.at("tau"), path + ".tau");
  if (v.contains("sigma")) out.sigma = need_positive(v.at("sigma"), path + ".sigma");
  if (v.contains("c_tau")) out.c_tau = need_positive(v.at("c_tau"), path + ".c_tau");
  if (v.contains("k_max")) out.k_max = need_count(v.at("k_max"), path + ".k_max");
  if (v.contains("label")) out.label = v.at("label").get<std::string>();
  return out;
}

}  // namespace

std::vector<ExperimentConfig> parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    raise(ErrorKind::Config, std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object() || !root.contains("experiments")) {
    config_fail("experiments", "missing required field");
  }
  const json& exps = root.at("experiments");
  if (!exps.is_array() || exps.empty()) {
    config_fail("experiments", "expected a nonempty array");
  }
  std::vector<ExperimentConfig> out;
  for (std::size_t i = 0; i < exps.size(); ++i) {
    std::string path = "experiments[" + std::to_string(i) + "]";
    const json& e = exps[i];
    if (!e.is_object()) config_fail(path, "expected an object");
    ExperimentConfig cfg;
    cfg.id = need(e, path, "id").get<std::string>();
    cfg.signal = parse_signal(need(e, path, "signal"), path + ".signal");
    cfg.noise = parse_noise(need(e, path, "noise"), path + ".noise");
    cfg.sigma = need_positive(need(e, path, "sigma"), path + ".sigma");
    const json& grid = need(e, path, "n");
    if (!grid.is_array() || grid.empty()) config_fail(path + ".n", "expected a nonempty array");
    for (std::size_t g = 0; g < grid.size(); ++g) {
      cfg.n_grid.push_back(need_count(grid[g], path + ".n[" + std::to_string(g) + "]"));
    }
    const json& ests = need(e, path, "estimators");
    if (!ests.is_array() || ests.empty()) {
      config_fail(path + ".estimators", "expected a nonempty array");
    }
    for (std::size_t g = 0; g < ests.size(); ++g) {
      cfg.estimators.push_back(
          parse_estimator(ests[g], path + ".estimators[" + std::to_string(g) + "]"));
    }
    const json& ps = need(e, path, "p");
    if (!ps.is_array() || ps.empty()) config_fail(path + ".p", "expected a nonempty array");
    for (std::size_t g = 0; g < ps.size(); ++g) {
      cfg.p_list.push_back(need_positive(ps[g], path + ".p[" + std::to_string(g) + "]"));
    }
    cfg.replications = need_count(need(e, path, "replications"), path + ".replications");
    if (cfg.replications < 2) {
      config_fail(path + ".replications", "must be at least 2");
    }
    const json& seed = need(e, path, "seed");
    if (!seed.is_number_integer() && !seed.is_number_unsigned()) {
      config_fail(path + ".seed", "expected an integer");
    }
    cfg.seed = seed.get<std::uint64_t>();
    for (std::size_t n : cfg.n_grid) {
      if (cfg.signal.family == SignalSpec::Family::Staircase && cfg.signal.k > n) {
        config_fail(path + ".signal.k", "exceeds a grid length");
      }
      if (cfg.signal.family == SignalSpec::Family::LowerBound && n < 4) {
        config_fail(path + ".n", "lower_bound signals need n >= 4");
      }
    }
    out.push_back(std::move(cfg));
  }
  return out;
}

std::vector<ExperimentConfig> load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    raise(ErrorKind::Io, "cannot open config '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace riso
