// Command-line front end for the riso shared library.
//
//   riso fit   --input data.txt --method reduced --k 3
//   riso bench --config experiments.json --out table.csv --threads 4
//
// fit prints one JSON object describing the fitted step function.  Exit
// codes: 0 success, 2 usage/config/parse problems, 3 I/O failures.

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "riso.h"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

class CliError : public std::runtime_error {
 public:
  CliError(int code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  int code() const noexcept { return code_; }

 private:
  int code_;
};

void check(riso_status status, int io_exit = kExitUsage) {
  if (status == RISO_OK) return;
  std::string detail = riso_last_error();
  if (detail.empty()) detail = riso_status_message(status);
  throw CliError(status == RISO_ERROR_IO ? io_exit : kExitUsage, detail);
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& field, std::size_t line_no) {
  double v = 0.0;
  auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
    throw CliError(kExitUsage, "line " + std::to_string(line_no) +
                                   ": cannot parse '" + field + "' as a number");
  }
  return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<double> read_input(const std::string& path, const std::string& column) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw CliError(kExitUsage, "cannot open input file '" + path + "'");
  }
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  if (column.empty()) {
    while (std::getline(in, line)) {
      ++line_no;
      std::string t = trim(line);
      if (t.empty()) continue;
      values.push_back(parse_double(t, line_no));
    }
    return values;
  }
  if (!std::getline(in, line)) {
    throw CliError(kExitUsage, "input file '" + path + "' has no header row");
  }
  ++line_no;
  std::vector<std::string> header = split_csv_line(trim(line));
  std::size_t col = header.size();
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (trim(header[i]) == column) {
      col = i;
      break;
    }
  }
  if (col == header.size()) {
    throw CliError(kExitUsage, "column '" + column + "' not found in header");
  }
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty()) continue;
    std::vector<std::string> fields = split_csv_line(t);
    if (col >= fields.size()) {
      throw CliError(kExitUsage,
                     "line " + std::to_string(line_no) + ": missing column '" + column + "'");
    }
    values.push_back(parse_double(trim(fields[col]), line_no));
  }
  return values;
}

struct FitOptions {
  std::string input;
  std::string column;
  std::string method;
  std::size_t k = 0;
  bool has_k = false;
  double tau = 0.0;
  bool has_tau = false;
  std::string sigma = "auto";
  bool has_sigma = false;
  double c_tau = 6.0;
  std::uint64_t seed = 1;
  bool has_seed = false;
};

int run_fit(const FitOptions& opt) {
  bool adaptive = opt.method == "auto" || opt.method == "auto-modified";
  bool wants_k =
      opt.method == "reduced" || opt.method == "segment" || opt.method == "unimodal";
  if (wants_k && !opt.has_k) {
    throw CliError(kExitUsage, "--method " + opt.method + " requires --k");
  }
  if (!wants_k && opt.has_k) {
    throw CliError(kExitUsage, "--k is only valid with reduced, segment or unimodal");
  }
  if (opt.has_tau && !adaptive) {
    throw CliError(kExitUsage, "--tau is only valid with auto or auto-modified");
  }
  if (opt.has_seed && opt.method != "unimodal") {
    throw CliError(kExitUsage, "--seed is only valid with unimodal");
  }
  if (opt.has_sigma && !(adaptive || opt.method == "unimodal")) {
    throw CliError(kExitUsage, "--sigma is only valid with auto, auto-modified or unimodal");
  }

  double sigma_flag = 0.0;  // 0 = derive from the data
  if (opt.sigma != "auto") {
    auto res = std::from_chars(opt.sigma.data(), opt.sigma.data() + opt.sigma.size(),
                               sigma_flag);
    if (res.ec != std::errc{} || res.ptr != opt.sigma.data() + opt.sigma.size() ||
        !(sigma_flag > 0.0)) {
      throw CliError(kExitUsage, "--sigma must be positive or 'auto'");
    }
  }

  std::vector<double> values = read_input(opt.input, opt.column);
  if (values.empty()) {
    throw CliError(kExitUsage, "input file contains no values");
  }

  riso_series* series = nullptr;
  check(riso_series_create(values.data(), values.size(), &series));

  riso_fit* fit = nullptr;
  riso_status status = RISO_OK;
  double sigma_used_flag = 0.0;
  bool have_sigma_used = false;
  if (opt.method == "iso") {
    status = riso_fit_isotonic(series, &fit);
  } else if (opt.method == "reduced") {
    status = riso_fit_reduced(series, opt.k, &fit);
  } else if (opt.method == "segment") {
    status = riso_fit_segment(series, opt.k, &fit);
  } else if (opt.method == "auto" || opt.method == "auto-modified") {
    int family = opt.method == "auto" ? 0 : 1;
    status = riso_fit_auto(series, family, opt.has_tau ? opt.tau : 0.0, sigma_flag,
                           opt.c_tau, &fit);
  } else if (opt.method == "unimodal") {
    double sigma = sigma_flag;
    if (sigma == 0.0) {
      riso_status s = riso_estimate_sigma(series, &sigma);
      if (s != RISO_OK) {
        riso_series_free(series);
        check(s);
      }
    }
    sigma_used_flag = sigma;
    have_sigma_used = true;
    status = riso_fit_unimodal(series, opt.k, sigma, opt.seed, &fit);
  } else {
    riso_series_free(series);
    throw CliError(kExitUsage, "unknown method '" + opt.method + "'");
  }
  if (status != RISO_OK) {
    riso_series_free(series);
    check(status);
  }

  std::size_t pieces = riso_fit_num_pieces(fit);
  std::vector<std::size_t> knots(pieces);
  std::vector<double> levels(pieces);
  check(riso_fit_knots(fit, knots.data()));
  check(riso_fit_levels(fit, levels.data()));

  nlohmann::json out;
  out["n"] = values.size();
  out["method"] = opt.method;
  out["k_used"] = pieces;
  if (adaptive) {
    std::size_t k_hat = 0;
    check(riso_fit_k_hat(fit, &k_hat));
    out["k_hat"] = k_hat;
  }
  out["knots"] = knots;
  out["levels"] = levels;
  out["sse"] = riso_fit_sse(fit);
  double penalty = 0.0;
  if (riso_fit_penalty(fit, &penalty) == RISO_OK) {
    out["penalty"] = penalty;
  } else {
    out["penalty"] = nullptr;
  }
  double sigma_used = 0.0;
  if (riso_fit_sigma_used(fit, &sigma_used) == RISO_OK) {
    out["sigma_used"] = sigma_used;
  } else if (have_sigma_used) {
    out["sigma_used"] = sigma_used_flag;
  } else {
    out["sigma_used"] = nullptr;
  }

  std::cout << out.dump() << "\n";
  riso_fit_free(fit);
  riso_series_free(series);
  return 0;
}

int run_bench(const std::string& config, const std::string& out_path, int threads) {
  riso_status status = riso_bench_run(config.c_str(), out_path.c_str(), threads);
  if (status != RISO_OK) {
    std::string detail = riso_last_error();
    if (detail.empty()) detail = riso_status_message(status);
    throw CliError(status == RISO_ERROR_IO ? kExitIo : kExitUsage, detail);
  }
  std::cerr << "risk table written to " << out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact step-function fits with few pieces"};
  app.require_subcommand(1);

  FitOptions fopt;
  CLI::App* fit = app.add_subcommand("fit", "Fit one series and print JSON");
  fit->add_option("--input", fopt.input, "Input file (one number per line, or CSV)")
      ->required();
  fit->add_option("--column", fopt.column, "CSV column to read");
  fit->add_option("--method", fopt.method, "One of iso|reduced|auto|auto-modified|segment|unimodal")
      ->required()
      ->check(CLI::IsMember({"iso", "reduced", "auto", "auto-modified", "segment", "unimodal"}));
  auto* kopt = fit->add_option("--k", fopt.k, "Piece budget");
  auto* topt = fit->add_option("--tau", fopt.tau, "Penalty scale");
  auto* sopt = fit->add_option("--sigma", fopt.sigma, "Noise scale, a number or 'auto'");
  fit->add_option("--c-tau", fopt.c_tau, "Multiplier in tau = c_tau * sigma^2");
  auto* seedopt = fit->add_option("--seed", fopt.seed, "Random seed for unimodal");

  std::string bconfig, bout;
  int bthreads = 1;
  CLI::App* bench = app.add_subcommand("bench", "Run Monte Carlo risk experiments");
  bench->add_option("--config", bconfig, "JSON experiment description")->required();
  bench->add_option("--out", bout, "Output CSV path")->required();
  bench->add_option("--threads", bthreads, "Worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (fit->parsed()) {
      fopt.has_k = kopt->count() > 0;
      fopt.has_tau = topt->count() > 0;
      fopt.has_sigma = sopt->count() > 0;
      fopt.has_seed = seedopt->count() > 0;
      return run_fit(fopt);
    }
    return run_bench(bconfig, bout, bthreads);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
