#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "schurlab/combinatorics.hpp"
#include "schurlab/errors.hpp"
#include "schurlab/normsearch.hpp"
#include "schurlab/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace schurlab;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitTolerance = 3;

struct Options {
  int n = 0;
  std::string k_list;
  double q = 0.5;
  double p = 2.0;
  std::string p_grid;
  int dim = 0;
  int trials = 0;
  int restarts = 16;
  int iters = 200;
  std::uint64_t seed = 0;
  double tol = 0.0;
  std::string out;
  std::string config;
  std::string kind = "upper";
  std::string variant = "first";
  int points = 0;
  long samples = 1000000;
  std::string results;
};

void emit_error(const std::string& code, const std::string& message) {
  std::cerr << json{{"error", code}, {"message", message}}.dump() << "\n";
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size()) throw Error(ErrorCode::InvalidConfig, "bad list entry '" + item + "'");
    out.push_back(v);
  }
  return out;
}

void write_output(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw Error(ErrorCode::MissingInput, "cannot open output '" + o.out + "'");
  f << text;
}

json read_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::MissingInput, "cannot read '" + path + "'");
  try {
    return json::parse(f);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, path + ": " + e.what());
  }
}

int run_verify(const std::string& suite, const Options& o) {
  std::vector<CheckReport> reports;
  auto tol_or = [&](double d) { return o.tol > 0.0 ? o.tol : d; };
  if (suite == "reductions") {
    const int lo = o.n ? o.n : 2, hi = o.n ? o.n : 5;
    reports = verify_reductions(lo, hi, o.trials ? o.trials : 200, o.seed, tol_or(1e-8));
  } else if (suite == "divdiff") {
    reports = verify_divdiff(o.trials ? o.trials : 200, o.samples, o.seed, tol_or(1e-9));
  } else if (suite == "decomposition") {
    for (int n : o.n ? std::vector<int>{o.n} : std::vector<int>{2, 3}) {
      auto r = verify_decomposition(n, o.trials ? o.trials : 200, o.seed, tol_or(1e-7));
      reports.insert(reports.end(), r.begin(), r.end());
    }
  } else if (suite == "partition") {
    reports = verify_partition(o.trials ? o.trials : 1000, o.seed, tol_or(1e-12));
  } else if (suite == "fourier") {
    reports = verify_fourier(o.n ? o.n : 2, o.points, o.seed, tol_or(1e-3));
  } else if (suite == "remark") {
    reports.push_back(verify_remark(o.trials ? o.trials : 100, o.seed, tol_or(1e-9)));
  } else {
    throw Error(ErrorCode::InvalidConfig, "unknown verify suite '" + suite + "'");
  }
  json arr = json::array();
  bool ok = true;
  for (const auto& r : reports) {
    arr.push_back(report_to_json(r));
    ok = ok && r.passed;
  }
  write_output(o, json{{"suite", suite}, {"passed", ok}, {"reports", arr}}.dump(2) + "\n");
  return ok ? 0 : kExitTolerance;
}

ExperimentSpec experiment_from_options(const Options& o, const CLI::App& app) {
  ExperimentSpec spec;
  if (!o.config.empty()) {
    spec = experiment_from_json(read_json_file(o.config));
  } else {
    spec.kind = o.kind;
    spec.n = o.n ? o.n : 1;
    spec.N = o.dim ? o.dim : 16;
    if (spec.kind == "lattice") spec.symbol_params = {{"variant", o.variant == "second" ? 2 : 1}, {"q", o.q}};
  }
  // Explicit flags override the config file.
  if (app.count("--seed") || o.config.empty()) spec.seed = o.seed;
  if (app.count("--restarts") || o.config.empty()) spec.restarts = o.restarts;
  if (app.count("--iters") || o.config.empty()) spec.iters = o.iters;
  if (app.count("--p-grid")) spec.p_grid = parse_list(o.p_grid);
  if (app.count("--dim")) spec.N = o.dim;
  if (app.count("--n")) spec.n = o.n;
  if (spec.N < 1 || spec.n < 1 || spec.restarts < 1 || spec.iters < 0 || spec.p_grid.empty()) {
    throw Error(ErrorCode::InvalidConfig, "experiment: need N, n, restarts >= 1 and a nonempty p grid");
  }
  return spec;
}

int run_estimate(const Options& o, const CLI::App& app) {
  ExperimentSpec spec = experiment_from_options(o, app);
  const double p = app.count("--p") || spec.p_grid.empty() ? o.p : spec.p_grid.front();
  NormSearchOptions opts;
  opts.restarts = spec.restarts;
  opts.iters = spec.iters;
  opts.seed = spec.seed;
  const NormEstimate e = estimate_norm(experiment_symbol(spec), SchattenParams::equal(spec.n, p), opts);
  json j = estimate_to_json(e);
  j["experiment"] = experiment_to_json(spec);
  write_output(o, j.dump(2) + "\n");
  return 0;
}

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

int run_sweep(const std::string& what, const Options& o, const CLI::App& app) {
  if (what == "exponent") {
    const ExperimentSpec spec = experiment_from_options(o, app);
    write_output(o, sweep_to_csv(sweep_and_fit(spec)));
    return 0;
  }
  if (what == "lowerbound") {
    const int n = o.n ? o.n : 2;
    const Construction c = o.variant == "second" ? Construction::Second : Construction::First;
    if (o.variant != "first" && o.variant != "second") throw Error(ErrorCode::InvalidConfig, "--variant must be first or second");
    const std::vector<double> ks = o.k_list.empty() ? std::vector<double>{10, 20, 30} : parse_list(o.k_list);
    const int dim = o.dim ? o.dim : 8;
    std::vector<long> F(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) F[static_cast<std::size_t>(i)] = i;
    std::string csv = "construction,n,q,dim,seed,k,l,residual\r\n";
    for (double kd : ks) {
      const int k = static_cast<int>(kd);
      for (int factor : {2, 4, 8}) {
        const int l = factor * k;
        const double r = convergence_check(c, n, o.q, k, l, F, o.seed);
        csv += o.variant + "," + std::to_string(n) + "," + fmt(o.q) + "," + std::to_string(dim) + "," +
               std::to_string(o.seed) + "," + std::to_string(k) + "," + std::to_string(l) + "," + fmt(r) + "\r\n";
      }
    }
    write_output(o, csv);
    return 0;
  }
  if (what == "bound-curve") {
    const int n = o.n ? o.n : 2;
    const std::vector<double> grid =
        o.p_grid.empty() ? std::vector<double>{1.01, 1.1, 1.5, 2, 4, 8, 16, 32, 64} : parse_list(o.p_grid);
    std::vector<double> big_p, big_v;
    std::vector<double> bounds;
    for (double p : grid) {
      bounds.push_back(theoretical_bound(SchattenParams::equal(n, p)));
      if (p >= 2.0) {
        big_p.push_back(p);
        big_v.push_back(bounds.back());
      }
    }
    const ExponentFit fit = fit_exponent(big_p, big_v);
    std::string csv = "n,p,bound,normalized,large_p_exponent,large_p_residual\r\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double p = grid[i];
      const double norm = bounds[i] / (conjugate_exponent(p) * std::pow(p, n));
      csv += std::to_string(n) + "," + fmt(p) + "," + fmt(bounds[i]) + "," + fmt(norm) + "," + fmt(fit.exponent) + "," +
             fmt(fit.residual) + "\r\n";
    }
    write_output(o, csv);
    return 0;
  }
  throw Error(ErrorCode::InvalidConfig, "unknown sweep '" + what + "'");
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(f, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

std::size_t column(const std::vector<std::string>& header, const std::string& name) {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw Error(ErrorCode::InvalidConfig, "csv lacks column '" + name + "'");
  return static_cast<std::size_t>(it - header.begin());
}

void write_dat(const fs::path& path, const std::vector<std::vector<std::string>>& rows, std::size_t x, std::size_t y) {
  std::ofstream f(path);
  f << "# " << rows[0][x] << " " << rows[0][y] << "\n";
  for (std::size_t r = 1; r < rows.size(); ++r) f << rows[r][x] << " " << rows[r][y] << "\n";
}

int run_report(const Options& o) {
  const fs::path dir(o.results);
  if (!fs::is_directory(dir)) throw Error(ErrorCode::MissingInput, "no results directory '" + o.results + "'");
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    const auto ext = e.path().extension();
    if (e.is_regular_file() && (ext == ".csv" || ext == ".json")) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  const fs::path out_dir = o.out.empty() ? dir : fs::path(o.out);
  fs::create_directories(out_dir);
  std::ostringstream summary;
  int blocks = 0;
  for (const auto& path : files) {
    const std::string stem = path.stem().string();
    if (path.extension() == ".csv") {
      const auto rows = read_csv(path);
      if (rows.size() < 2) continue;
      const auto& h = rows[0];
      summary << "[" << path.filename().string() << "]\n";
      if (h[0] == "p" && std::find(h.begin(), h.end(), "estimate") != h.end()) {
        const auto& last = rows.back();
        summary << "  norm sweep over " << rows.size() - 1 << " exponents\n"
                << "  large-p exponent " << last[column(h, "large_p_exponent")] << " (rms "
                << last[column(h, "large_p_residual")] << ")\n"
                << "  small-p exponent " << last[column(h, "small_p_exponent")] << " (rms "
                << last[column(h, "small_p_residual")] << ")\n";
        write_dat(out_dir / (stem + ".dat"), rows, 0, column(h, "estimate"));
      } else if (std::find(h.begin(), h.end(), "residual") != h.end() && h[0] == "construction") {
        const std::size_t rc = column(h, "residual");
        double best = INFINITY;
        for (std::size_t r = 1; r < rows.size(); ++r) best = std::min(best, std::stod(rows[r][rc]));
        summary << "  convergence sweep, " << rows[1][0] << " construction, " << rows.size() - 1
                << " (k,l) pairs, smallest residual " << fmt(best) << "\n";
        write_dat(out_dir / (stem + ".dat"), rows, column(h, "l"), rc);
      } else if (std::find(h.begin(), h.end(), "bound") != h.end()) {
        summary << "  bound curve, large-p exponent " << rows.back()[column(h, "large_p_exponent")] << "\n";
        write_dat(out_dir / (stem + ".dat"), rows, column(h, "p"), column(h, "bound"));
      } else {
        summary << "  unrecognised csv layout\n";
      }
      ++blocks;
    } else {
      const json j = read_json_file(path.string());
      summary << "[" << path.filename().string() << "]\n";
      if (j.contains("reports")) {
        int passed = 0;
        for (const auto& r : j["reports"]) passed += r.value("passed", false) ? 1 : 0;
        summary << "  verify " << j.value("suite", "?") << ": " << passed << "/" << j["reports"].size() << " checks passed\n";
        for (const auto& r : j["reports"]) {
          summary << "    " << (r.value("passed", false) ? "ok   " : "FAIL ") << r.value("name", "?") << " value "
                  << fmt(r.value("value", 0.0)) << " tol " << fmt(r.value("tolerance", 0.0)) << "\n";
        }
      } else if (j.value("kind", "") == "lower_bound") {
        summary << "  norm lower bound " << fmt(j.value("value", 0.0)) << " at p " << fmt(j.value("p", 0.0)) << " from "
                << j.value("restarts", 0) << " restarts\n";
      } else {
        summary << "  unrecognised json\n";
      }
      ++blocks;
    }
  }
  if (blocks == 0) throw Error(ErrorCode::MissingInput, "no result files in '" + o.results + "'");
  std::cout << summary.str();
  std::ofstream(out_dir / "summary.txt") << summary.str();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Divided-difference and Schur multiplier toolkit"};
  app.require_subcommand(1);
  Options o;
  auto add_common = [&](CLI::App* c) {
    c->add_option("--n", o.n, "multilinearity order");
    c->add_option("--k", o.k_list, "comma-separated k values");
    c->add_option("--q", o.q, "lattice ratio in (0,1)");
    c->add_option("--p", o.p, "Schatten exponent of the output");
    c->add_option("--p-grid", o.p_grid, "comma-separated exponents");
    c->add_option("--dim", o.dim, "matrix dimension N");
    c->add_option("--trials", o.trials, "random trials");
    c->add_option("--restarts", o.restarts, "ascent restarts");
    c->add_option("--iters", o.iters, "sweeps per restart");
    c->add_option("--seed", o.seed, "root seed");
    c->add_option("--tol", o.tol, "tolerance override");
    c->add_option("--out", o.out, "output file (directory for report)");
    c->add_option("--config", o.config, "JSON experiment spec");
    c->add_option("--kind", o.kind, "symbol kind: upper|lower|diagonal|mult|abs_power|lattice");
    c->add_option("--variant", o.variant, "construction: first|second");
    c->add_option("--points", o.points, "Fourier grid points per axis");
    c->add_option("--samples", o.samples, "simplex oracle samples");
  };
  std::string target;
  CLI::App* verify = app.add_subcommand("verify", "identity and oracle suites");
  verify->add_option("suite", target, "reductions|divdiff|decomposition|partition|fourier|remark")->required();
  add_common(verify);
  CLI::App* estimate = app.add_subcommand("estimate", "norm lower bound for one symbol");
  add_common(estimate);
  CLI::App* sweep = app.add_subcommand("sweep", "parameter sweeps written as CSV");
  sweep->add_option("what", target, "exponent|lowerbound|bound-curve")->required();
  add_common(sweep);
  CLI::App* report = app.add_subcommand("report", "summarise a results directory");
  report->add_option("results", o.results, "results directory")->required();
  report->add_option("--out", o.out, "directory for data files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    emit_error("InvalidConfig", e.what());
    return kExitValidation;
  }
  try {
    if (*verify) return run_verify(target, o);
    if (*estimate) return run_estimate(o, *estimate);
    if (*sweep) return run_sweep(target, o, *sweep);
    return run_report(o);
  } catch (const Error& e) {
    emit_error(error_code_name(e.code()), e.what());
    return kExitValidation;
  } catch (const std::exception& e) {
    emit_error("InvalidConfig", e.what());
    return kExitValidation;
  }
}
