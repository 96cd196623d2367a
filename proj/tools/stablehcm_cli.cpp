// Command-line surface: density/galpha/theta-table evaluation and the
// verification suites, with CSV or JSON output.
//
// Exit codes: 0 success, 1 verification failure, 2 usage error, 3 numerical
// failure.

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "stablehcm/stablehcm.hpp"

namespace sh = stablehcm;
using nlohmann::json;

namespace {

struct OutputSpec {
  std::string format = "csv";  // csv | json
  std::string path;            // empty = stdout
  int precision = 17;

  void validate() const {
    if (format != "csv" && format != "json")
      throw CLI::ValidationError("--format must be csv or json");
    if (precision < 6 || precision > 17)
      throw CLI::ValidationError("--precision must be in [6, 17]");
  }
};

std::string fmt(double v, int precision) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", precision, v);
  return buf;
}

double round_sig(double v, int precision) {
  if (!std::isfinite(v) || precision >= 17) return v;
  return std::strtod(fmt(v, precision).c_str(), nullptr);
}

void emit(const std::string& text, const OutputSpec& out) {
  if (out.path.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out.path);
    if (!f) throw std::runtime_error("cannot open output file: " + out.path);
    f << text;
  }
}

std::vector<double> parse_points(const std::vector<double>& xs, const std::string& grid) {
  if (!grid.empty()) {
    double lo, hi;
    int n;
    if (std::sscanf(grid.c_str(), "%lf:%lf:%d", &lo, &hi, &n) != 3)
      throw CLI::ValidationError("--grid expects min:max:count");
    return sh::log_grid(lo, hi, n);
  }
  if (xs.empty()) throw CLI::ValidationError("provide --x values or --grid");
  return xs;
}

double env_rel_tol() {
  if (const char* s = std::getenv("STABLE_HCM_TOL")) {
    double v = std::strtod(s, nullptr);
    if (v > 0 && v < 1) return v;
    std::cerr << "warning: ignoring invalid STABLE_HCM_TOL\n";
  }
  return 1e-10;
}

// deterministic parallel map: results land by index, output stays in input order
template <class F>
void parallel_for(std::size_t n, int jobs, F&& body) {
  if (jobs <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
  };
  std::vector<std::thread> pool;
  int k = std::min<int>(jobs, std::thread::hardware_concurrency() > 0
                                  ? static_cast<int>(std::thread::hardware_concurrency())
                                  : 4);
  for (int i = 0; i < k; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

int cmd_density(double alpha, double rho, const std::vector<double>& xs, const std::string& grid,
                const std::string& method_s, const OutputSpec& out, int jobs) {
  sh::StableParams p{alpha, rho};
  p.validate();
  sh::DensityMethod method = sh::DensityMethod::auto_select;
  if (method_s == "series") method = sh::DensityMethod::series;
  else if (method_s == "integral") method = sh::DensityMethod::integral;
  else if (method_s == "levy") method = sh::DensityMethod::closed_form_levy;
  else if (method_s != "auto") throw CLI::ValidationError("--method must be auto|series|integral|levy");
  auto points = parse_points(xs, grid);
  sh::QuadConfig cfg;
  cfg.rel_tol = env_rel_tol();
  std::vector<double> values(points.size());
  std::vector<std::string> errors(points.size());
  parallel_for(points.size(), jobs, [&](std::size_t i) {
    try {
      values[i] = sh::density(p, points[i], method, cfg);
    } catch (const sh::NumericError& e) {
      errors[i] = e.what();
    }
  });
  for (std::size_t i = 0; i < points.size(); ++i)
    if (!errors[i].empty()) {
      std::cerr << "numerical failure at x = " << points[i] << ": " << errors[i] << "\n";
      return 3;
    }
  if (out.format == "csv") {
    std::ostringstream os;
    os << "x,g\n";
    for (std::size_t i = 0; i < points.size(); ++i)
      os << fmt(points[i], out.precision) << "," << fmt(values[i], out.precision) << "\n";
    emit(os.str(), out);
  } else {
    json rows = json::array();
    for (std::size_t i = 0; i < points.size(); ++i)
      rows.push_back({{"x", round_sig(points[i], out.precision)},
                      {"g", round_sig(values[i], out.precision)}});
    emit(json{{"alpha", alpha}, {"rho", rho}, {"rows", rows}}.dump(2) + "\n", out);
  }
  return 0;
}

int cmd_galpha(double alpha, double r, std::optional<double> t, const std::string& cut,
               const std::string& method_s, const OutputSpec& out) {
  sh::galpha::Method method = sh::galpha::Method::auto_select;
  if (method_s == "series") method = sh::galpha::Method::series;
  else if (method_s == "integral") method = sh::galpha::Method::integral;
  else if (method_s == "asymptotic") method = sh::galpha::Method::asymptotic;
  else if (method_s != "auto") throw CLI::ValidationError("--method must be auto|series|integral|asymptotic");

  double rel_tol = env_rel_tol();
  sh::galpha::EvalOutcome o;
  if (!cut.empty()) {
    sh::galpha::Side side;
    if (cut == "upper") side = sh::galpha::Side::upper;
    else if (cut == "lower") side = sh::galpha::Side::lower;
    else throw CLI::ValidationError("--cut must be upper or lower");
    o = sh::galpha::boundary_ex(alpha, {r, side}, method, rel_tol);
  } else {
    if (!t) throw CLI::ValidationError("provide --t (|t| < 1), or --cut for the boundary");
    if (!(*t > -1.0 && *t < 1.0))
      throw CLI::ValidationError("--t must be in (-1,1); the cut is reached with --cut upper|lower");
    o = sh::galpha::eval_ex(alpha, {r, *t}, method, rel_tol);
  }
  const sh::LogComplex& lc = o.value;
  bool representable = lc.log_mod <= 700.0;
  double re = 0, im = 0;
  if (representable) {
    auto z = lc.to_complex();
    re = z.real();
    im = z.imag();
  }
  const char* used = o.method_used == sh::galpha::Method::series ? "series"
                     : o.method_used == sh::galpha::Method::integral ? "integral"
                     : o.method_used == sh::galpha::Method::asymptotic ? "asymptotic"
                                                                       : "auto";
  if (out.format == "csv") {
    std::ostringstream os;
    os << "re,im,log_mod,phase_over_pi,method_used\n";
    os << (representable ? fmt(re, out.precision) : "") << ","
       << (representable ? fmt(im, out.precision) : "") << "," << fmt(lc.log_mod, out.precision)
       << "," << fmt(lc.phase_over_pi, out.precision) << "," << used << "\n";
    emit(os.str(), out);
  } else {
    json row{{"log_mod", round_sig(lc.log_mod, out.precision)},
             {"phase_over_pi", round_sig(lc.phase_over_pi, out.precision)},
             {"method_used", used}};
    row["re"] = representable ? json(round_sig(re, out.precision)) : json(nullptr);
    row["im"] = representable ? json(round_sig(im, out.precision)) : json(nullptr);
    emit(row.dump(2) + "\n", out);
  }
  return 0;
}

int cmd_theta_table(double alpha, double t_min, double t_max, int n, const OutputSpec& out) {
  auto table = sh::thorin::build_theta(alpha, t_min, t_max, n);
  double a = sh::thorin::calibrate_a(alpha, table);
  std::ostringstream os;
  sh::thorin::write_csv(table, os, out.precision);
  json sidecar = sh::thorin::sidecar_json(table, a);
  if (out.path.empty()) {
    std::cout << os.str();
    std::cerr << sidecar.dump(2) << "\n";  // sidecar to stderr when streaming
  } else {
    emit(os.str(), out);
    std::string side = out.path;
    auto dot = side.rfind('.');
    side = (dot == std::string::npos ? side : side.substr(0, dot)) + ".json";
    std::ofstream f(side);
    if (!f) throw std::runtime_error("cannot open sidecar file: " + side);
    f << sidecar.dump(2) << "\n";
  }
  return 0;
}

int cmd_verify(std::vector<std::string> suites, const std::vector<double>& alphas, unsigned seed,
               const OutputSpec& out) {
  sh::verify::Options opt;
  opt.seed = seed;
  opt.rel_tol = env_rel_tol();
  const auto& known = sh::verify::suite_names();
  for (const auto& s : suites)
    if (std::find(known.begin(), known.end(), s) == known.end())
      throw CLI::ValidationError("unknown suite: " + s);
  if (suites.empty()) suites = {"all"};
  sh::verify::Runner runner(opt);
  std::vector<sh::verify::Check> checks;
  try {
    for (const auto& s : suites) {
      auto part = runner.run(s, alphas);
      checks.insert(checks.end(), part.begin(), part.end());
    }
  } catch (const sh::NumericError& e) {
    std::cerr << "evaluator failure: " << e.what() << "\n";
    return 3;
  }
  json rep = sh::verify::report_json(checks, opt);
  emit(rep.dump(2) + "\n", out);
  int failed = rep["failed"].get<int>();
  for (const auto& c : checks)
    if (!c.pass)
      std::cerr << "FAIL [" << c.suite << "] " << c.name << " (measured " << c.measured
                << ", expected " << c.expected << ")\n";
  return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"one-sided stable densities, the slit-plane function G_alpha, its Stieltjes "
               "representation, and numerical HCM certification"};
  app.require_subcommand(1);

  OutputSpec out;
  auto add_output = [&](CLI::App* cmd) {
    cmd->add_option("--format", out.format, "csv or json");
    cmd->add_option("-o,--output", out.path, "output file (default stdout)");
    cmd->add_option("--precision", out.precision, "significant digits, 6..17")
        ->check(CLI::Range(6, 17));
  };

  // density
  double alpha = 0, rho = 1.0;
  std::vector<double> xs;
  std::string grid, method = "auto", cut;
  int jobs = 1;
  auto* cd = app.add_subcommand("density", "evaluate g_{alpha,rho} on (0,inf)");
  cd->add_option("--alpha", alpha, "stability index in (0,1)")->required()->check(CLI::Range(1e-12, 1.0 - 1e-12));
  cd->add_option("--rho", rho, "positivity parameter in (0,1]")->check(CLI::Range(1e-12, 1.0));
  cd->add_option("--x", xs, "evaluation points")->delimiter(',');
  cd->add_option("--grid", grid, "geometric grid min:max:count");
  cd->add_option("--method", method, "auto|series|integral|levy");
  cd->add_option("--jobs", jobs, "parallel evaluation threads (output order unchanged)");
  add_output(cd);

  // galpha
  double r = 0;
  std::optional<double> t;
  auto* cg = app.add_subcommand("galpha", "evaluate G_alpha on the slit plane or its boundary values");
  cg->add_option("--alpha", alpha, "index in (0,1)")->required()->check(CLI::Range(1e-12, 1.0 - 1e-12));
  cg->add_option("--r", r, "modulus > 0")->required()->check(CLI::PositiveNumber);
  cg->add_option("--t", t, "phase/pi in (-1,1)");
  cg->add_option("--cut", cut, "boundary value: upper or lower");
  cg->add_option("--method", method, "auto|series|integral|asymptotic");
  add_output(cg);

  // theta-table
  double t_min = 1e-4, t_max = 1e4;
  int n = 2000;
  auto* ct = app.add_subcommand("theta-table", "sample the boundary angle function theta(t)");
  ct->add_option("--alpha", alpha, "index in (0,1)")->required()->check(CLI::Range(1e-12, 1.0 - 1e-12));
  ct->add_option("--t-min", t_min, "lower grid end");
  ct->add_option("--t-max", t_max, "upper grid end");
  ct->add_option("--n", n, "node count (>= 16)");
  add_output(ct);

  // verify
  std::vector<std::string> suites;
  std::vector<double> valphas;
  unsigned seed = 0;
  auto* cv = app.add_subcommand("verify", "run verification suites, emit a JSON report");
  cv->add_option("--suite", suites, "exact-half|asymptotics|small-z|cut-laws|representation|"
                                    "theta-monotone|hcm|subordination|semigroup|all")
      ->delimiter(',');
  cv->add_option("--alpha", valphas, "override the suite's alpha list")->delimiter(',');
  cv->add_option("--seed", seed, "seed for the randomized representation checks");
  add_output(cv);

  CLI11_PARSE(app, argc, argv);

  try {
    out.validate();
    if (cd->parsed()) return cmd_density(alpha, rho, xs, grid, method, out, jobs);
    if (cg->parsed()) return cmd_galpha(alpha, r, t, cut, method, out);
    if (ct->parsed()) return cmd_theta_table(alpha, t_min, t_max, n, out);
    if (cv->parsed()) return cmd_verify(suites, valphas, seed, out);
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const sh::DomainError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const sh::NumericError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
