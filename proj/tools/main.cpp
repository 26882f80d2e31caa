#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "sbwehrl/husimi.hpp"
#include "sbwehrl/quadrature.hpp"
#include "sbwehrl/sbs_state.hpp"
#include "sbwehrl/wehrl.hpp"
#include "verify_suite.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitNoConvergence = 3;
constexpr int kExitVerifyFailed = 4;

// Round-trip-safe decimal rendering.
std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_opt(const std::optional<double>& v) { return v ? fmt17(*v) : std::string(); }

// Output stream bound to --out, or stdout when no path was given.
class OutputTarget {
 public:
  explicit OutputTarget(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_.open(path, std::ios::out | std::ios::trunc);
    ok_ = file_.is_open();
  }
  bool ok() const { return ok_; }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
  bool ok_ = true;
};

int resolve_workers(int cli_workers, bool cli_given) {
  if (cli_given) return std::max(1, cli_workers);
  if (const char* env = std::getenv("SBWEHRL_WORKERS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

struct SweepConfig {
  double eta_min = 0.0;
  double eta_max = 3.0;
  int steps = 31;
  int n1 = 0;
  int n2 = 0;
  std::string out;
  std::string format = "csv";
  int order = 24;
  int workers = 1;
};

int cmd_sweep(const SweepConfig& cfg) {
  if (!(cfg.eta_min < cfg.eta_max)) {
    std::cerr << "sweep: require eta-min < eta-max\n";
    return kExitUsage;
  }
  if (cfg.steps < 2 || cfg.steps > 100000) {
    std::cerr << "sweep: steps must lie in [2, 100000]\n";
    return kExitUsage;
  }

  sbwehrl::QuadratureSpec spec;
  spec.base_order = cfg.order;

  std::vector<double> etas(static_cast<std::size_t>(cfg.steps));
  for (int k = 0; k < cfg.steps; ++k)
    etas[static_cast<std::size_t>(k)] =
        cfg.eta_min + (cfg.eta_max - cfg.eta_min) * k / (cfg.steps - 1);

  // Rows are computed in parallel but always emitted in eta order.
  std::vector<sbwehrl::EntropyReport> rows(static_cast<std::size_t>(cfg.steps));
  std::vector<std::string> row_errors(static_cast<std::size_t>(cfg.steps));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next.fetch_add(1); i < cfg.steps; i = next.fetch_add(1)) {
      try {
        rows[static_cast<std::size_t>(i)] =
            sbwehrl::report(etas[static_cast<std::size_t>(i)], cfg.n1, cfg.n2, spec);
      } catch (const std::exception& e) {
        row_errors[static_cast<std::size_t>(i)] = e.what();
      }
    }
  };
  std::vector<std::future<void>> pool;
  for (int w = 1; w < cfg.workers; ++w) pool.push_back(std::async(std::launch::async, worker));
  worker();
  for (auto& f : pool) f.get();

  for (const auto& err : row_errors) {
    if (!err.empty()) {
      std::cerr << "sweep: " << err << "\n";
      return kExitUsage;
    }
  }

  OutputTarget out(cfg.out);
  if (!out.ok()) {
    std::cerr << "sweep: cannot open output path\n";
    return kExitIo;
  }

  bool any_flagged = false;
  if (cfg.format == "json") {
    json arr = json::array();
    for (const auto& r : rows) {
      arr.push_back(r);
      any_flagged = any_flagged || !r.flags.empty();
    }
    out.stream() << arr.dump(2) << "\n";
  } else {
    auto& os = out.stream();
    os << "eta,s_total_analytic,s_total_numeric,s1,s2,mutual_info,s1_minus_s2,err_flags\n";
    for (const auto& r : rows) {
      std::string flags;
      for (const auto& f : r.flags) flags += (flags.empty() ? "" : ";") + f;
      any_flagged = any_flagged || !r.flags.empty();
      os << fmt17(r.eta) << ',' << fmt_opt(r.s_total.analytic) << ','
         << fmt17(r.s_total.numeric) << ',' << fmt17(r.s_partial_1.numeric) << ','
         << fmt17(r.s_partial_2.numeric) << ',' << fmt17(r.mutual_info.numeric) << ','
         << fmt17(r.s_partial_1.numeric - r.s_partial_2.numeric) << ',' << flags << "\n";
    }
  }
  return any_flagged ? kExitNoConvergence : kExitOk;
}

struct HusimiConfig {
  double eta = 0.0;
  int n1 = 0;
  int n2 = 0;
  double fix_u2 = 0.0;
  double fix_v2 = 0.0;
  int grid = 101;
  std::string out;
};

int cmd_husimi(const HusimiConfig& cfg) {
  if (cfg.grid < 2) {
    std::cerr << "husimi: grid must be at least 2\n";
    return kExitUsage;
  }
  sbwehrl::HusimiDensity density =
      sbwehrl::husimi_of(sbwehrl::excited_state(sbwehrl::Coupling(cfg.eta), cfg.n1, cfg.n2));
  const sbwehrl::SliceFunction section = sbwehrl::slice(density, cfg.fix_u2, cfg.fix_v2);
  const double tau = std::tanh(cfg.eta);
  const double hw = section.half_width(tau);

  OutputTarget out(cfg.out);
  if (!out.ok()) {
    std::cerr << "husimi: cannot open output path\n";
    return kExitIo;
  }
  auto& os = out.stream();
  os << "u1,v1,value\n";
  for (int i = 0; i < cfg.grid; ++i) {
    const double u1 = -hw + 2.0 * hw * i / (cfg.grid - 1);
    for (int j = 0; j < cfg.grid; ++j) {
      const double v1 = -hw + 2.0 * hw * j / (cfg.grid - 1);
      os << fmt17(u1) << ',' << fmt17(v1) << ',' << fmt17(section(u1, v1)) << "\n";
    }
  }
  return kExitOk;
}

struct ObservablesConfig {
  double eta = 0.0;
  std::string out;
  std::string format = "csv";
};

json observable_to_json(const sbwehrl::ObservableValue& v) {
  return json{{"analytic", v.analytic}, {"numeric", v.numeric}, {"discrepancy", v.discrepancy()}};
}

int cmd_observables(const ObservablesConfig& cfg) {
  const sbwehrl::ObservableReport r = sbwehrl::observable_report(sbwehrl::Coupling(cfg.eta));

  OutputTarget out(cfg.out);
  if (!out.ok()) {
    std::cerr << "observables: cannot open output path\n";
    return kExitIo;
  }
  auto& os = out.stream();
  if (cfg.format == "json") {
    const json j{{"eta", r.eta},
                 {"occupation", observable_to_json(r.occupation)},
                 {"corr_z12", observable_to_json(r.corr_z12)},
                 {"corr_x12", observable_to_json(r.corr_x12)},
                 {"corr_p12", observable_to_json(r.corr_p12)},
                 {"uncertainty_x1p1", observable_to_json(r.uncertainty_x1p1)},
                 {"purity", observable_to_json(r.purity)}};
    os << j.dump(2) << "\n";
  } else {
    os << "quantity,analytic,numeric,discrepancy\n";
    const std::pair<const char*, const sbwehrl::ObservableValue*> entries[] = {
        {"occupation", &r.occupation},           {"corr_z12", &r.corr_z12},
        {"corr_x12", &r.corr_x12},               {"corr_p12", &r.corr_p12},
        {"uncertainty_x1p1", &r.uncertainty_x1p1}, {"purity", &r.purity}};
    for (const auto& [name, v] : entries)
      os << name << ',' << fmt17(v->analytic) << ',' << fmt17(v->numeric) << ','
         << fmt17(v->discrepancy()) << "\n";
  }
  return kExitOk;
}

struct VerifyConfig {
  sbwehrl::verify::Options opts;
  std::string out;
};

int cmd_verify(const VerifyConfig& cfg) {
  const auto checks = sbwehrl::verify::run_all(cfg.opts);

  json arr = json::array();
  bool all = true;
  for (const auto& c : checks) {
    all = all && c.passed;
    arr.push_back(json{{"check_name", c.check_name},
                       {"status", c.passed ? "pass" : "fail"},
                       {"max_discrepancy", c.max_discrepancy},
                       {"tolerance", c.tolerance}});
  }
  const json report{{"checks", arr}, {"all_passed", all}};

  OutputTarget out(cfg.out);
  if (!out.ok()) {
    std::cerr << "verify: cannot open output path\n";
    return kExitIo;
  }
  out.stream() << report.dump(2) << "\n";
  return all ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-mode Segal-Bargmann oscillators: Husimi densities, Wehrl entropies,\n"
               "and analytic-vs-numeric cross-checks"};
  app.require_subcommand(1);

  SweepConfig sweep_cfg;
  auto* sweep = app.add_subcommand("sweep", "Entropy report rows over an eta grid");
  sweep->add_option("--eta-min", sweep_cfg.eta_min, "Grid start");
  sweep->add_option("--eta-max", sweep_cfg.eta_max, "Grid end");
  sweep->add_option("--steps", sweep_cfg.steps, "Grid points (>= 2)");
  sweep->add_option("--n1", sweep_cfg.n1, "Mode-1 excitation");
  sweep->add_option("--n2", sweep_cfg.n2, "Mode-2 excitation");
  sweep->add_option("--order", sweep_cfg.order, "Gauss-Hermite base order");
  sweep->add_option("--out", sweep_cfg.out, "Output path (default stdout)");
  sweep->add_option("--format", sweep_cfg.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  int workers = 0;
  auto* workers_opt = sweep->add_option("--workers", workers, "Parallel row workers");

  HusimiConfig husimi_cfg;
  auto* husimi = app.add_subcommand("husimi", "Husimi slice grid at a fixed mode-2 point");
  husimi->add_option("--eta", husimi_cfg.eta, "Coupling parameter");
  husimi->add_option("--n1", husimi_cfg.n1, "Mode-1 excitation");
  husimi->add_option("--n2", husimi_cfg.n2, "Mode-2 excitation");
  husimi->add_option("--fix-u2", husimi_cfg.fix_u2, "Fixed u2");
  husimi->add_option("--fix-v2", husimi_cfg.fix_v2, "Fixed v2");
  husimi->add_option("--grid", husimi_cfg.grid, "Points per axis");
  husimi->add_option("--out", husimi_cfg.out, "Output path (default stdout)");

  ObservablesConfig obs_cfg;
  auto* obs = app.add_subcommand("observables", "Ground-state observables, both routes");
  obs->add_option("--eta", obs_cfg.eta, "Coupling parameter");
  obs->add_option("--out", obs_cfg.out, "Output path (default stdout)");
  obs->add_option("--format", obs_cfg.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  VerifyConfig verify_cfg;
  auto* verify = app.add_subcommand("verify", "Run the invariant suite, emit a JSON report");
  verify->add_option("--seed", verify_cfg.opts.seed, "Monte Carlo seed");
  verify->add_option("--mc-samples", verify_cfg.opts.mc_samples, "Monte Carlo samples");
  verify->add_option("--order", verify_cfg.opts.base_order, "Gauss-Hermite base order");
  verify->add_option("--tol-entropy", verify_cfg.opts.tol_entropy,
                     "Override the entropy-agreement tolerances");
  verify->add_option("--tol-algebra", verify_cfg.opts.tol_algebra,
                     "Override the operator-algebra tolerances");
  verify->add_option("--tol-observables", verify_cfg.opts.tol_observables,
                     "Override the observable-agreement tolerance");
  verify->add_option("--mc-sigma", verify_cfg.opts.mc_sigma,
                     "GH-vs-MC acceptance band in standard errors");
  verify->add_option("--out", verify_cfg.out, "Output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (sweep->parsed()) {
      sweep_cfg.workers = resolve_workers(workers, workers_opt->count() > 0);
      return cmd_sweep(sweep_cfg);
    }
    if (husimi->parsed()) return cmd_husimi(husimi_cfg);
    if (obs->parsed()) return cmd_observables(obs_cfg);
    if (verify->parsed()) return cmd_verify(verify_cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
