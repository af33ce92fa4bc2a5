#include "dpwaves/cli.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "dpwaves/bifurcation.hpp"
#include "dpwaves/branch_io.hpp"
#include "dpwaves/continuation.hpp"
#include "dpwaves/errors.hpp"
#include "dpwaves/svg_plot.hpp"
#include "dpwaves/wave_analysis.hpp"

namespace fs = std::filesystem;

namespace dpwaves::cli {

std::string fmt17(double v) { return fmt::format("{:.17g}", v); }

void configure_logging_from_env() {
  const char* env = std::getenv("DPWAVES_LOG");
  const std::string level = env ? env : "warn";
  spdlog::set_level(spdlog::level::from_str(level));
}

namespace {

struct UsageError : Error {
  using Error::Error;
};

struct TraceOptions {
  std::vector<double> periods{1.0};
  std::vector<double> as{1.0};
  std::vector<int> modes{1};
  ContinuationConfig cfg;
  std::string out = "branch.jsonl";
  int jobs = 1;
  bool dry_run = false;
  bool resume = false;
};

struct TraceJob {
  BifurcationPoint bp;
  fs::path path;
};

struct TraceOutcome {
  std::string summary;
  bool numerical_failure = false;
};

void require_parent_dir(const fs::path& p) {
  const fs::path parent = p.has_parent_path() ? p.parent_path() : fs::path(".");
  if (!fs::is_directory(parent)) throw UsageError("output directory " + parent.string() + " does not exist");
}

std::string sweep_name(const fs::path& base, double P, double a, int k) {
  const std::string ext = base.has_extension() ? base.extension().string() : ".jsonl";
  return (base.parent_path() / (base.stem().string() + fmt::format("_P{}_a{}_k{}", P, a, k) + ext)).string();
}

std::vector<TraceJob> plan_trace(const TraceOptions& o) {
  o.cfg.validate();
  std::vector<TraceJob> jobs;
  const bool sweep = o.periods.size() * o.as.size() * o.modes.size() > 1;
  for (double P : o.periods) {
    for (double a : o.as) {
      for (int k : o.modes) {
        if (!(P > 0.0)) throw UsageError("--period must be positive");
        if (!(a > 0.0)) throw UsageError("--a must be positive; continuation is only defined for a > 0");
        if (k < 1) throw UsageError("--mode-k must be positive");
        if (2 * k >= o.cfg.initial_grid / 2) throw UsageError("--grid too small to resolve mode k and 2k");
        TraceJob job;
        try {
          job.bp = bifurcation_mu(k, P, a);
        } catch (const NoBifurcation& e) {
          throw UsageError(e.what());
        }
        job.path = sweep ? fs::path(sweep_name(o.out, P, a, k)) : fs::path(o.out);
        require_parent_dir(job.path);
        if (o.resume && !fs::exists(job.path)) {
          throw UsageError("--resume given but " + job.path.string() + " does not exist");
        }
        jobs.push_back(job);
      }
    }
  }
  return jobs;
}

TraceOutcome run_trace_job(const TraceJob& job, const TraceOptions& o) {
  TraceOutcome res;
  std::ostringstream s;
  s << "branch P=" << fmt17(job.bp.period) << " a=" << fmt17(job.bp.a) << " k=" << job.bp.k << " -> "
    << job.path.string() << '\n';
  try {
    std::vector<BranchPoint> start;
    std::intmax_t keep = -1;
    if (o.resume) {
      BranchFile f = read_branch_file(job.path, true);
      if (!f.points.empty() &&
          (f.mode_k != job.bp.k || f.period != job.bp.period || f.a != job.bp.a)) {
        throw UsageError("resume file belongs to a different (P, a, k)");
      }
      start = std::move(f.points);
      keep = static_cast<std::intmax_t>(f.complete_bytes);
      s << "resumed from " << start.size() << " records" << (f.truncated_tail ? " (partial line dropped)" : "")
        << '\n';
    }
    BranchWriter writer(job.path, job.bp.k, keep);
    const Branch b = continue_branch(job.bp, o.cfg, [&](const BranchPoint& p) { writer.write(p); }, start);
    double min_trough = INFINITY;
    for (const auto& p : b.points) min_trough = std::min(min_trough, p.gap_trough);
    const BranchPoint& last = b.points.back();
    s << "termination: " << to_string(b.termination) << '\n';
    if (!b.diagnostic.empty()) s << "diagnostic: " << b.diagnostic << '\n';
    s << "points: " << b.points.size() << '\n'
      << "mu_star: " << fmt17(job.bp.mu_star) << '\n'
      << "mu_final: " << fmt17(last.state.mu()) << '\n'
      << "gap_crest: " << fmt17(last.gap_crest) << '\n'
      << "gap_trough: " << fmt17(last.gap_trough) << '\n'
      << "crest_exponent: " << fmt17(last.crest_exponent) << '\n'
      << "min_gap_trough: " << fmt17(min_trough) << '\n'
      << "n_points: " << last.state.grid().size() << '\n';
    res.numerical_failure = b.termination == Termination::NewtonFailure ||
                            b.termination == Termination::StepUnderflow ||
                            b.termination == Termination::GapIncrease;
  } catch (const UsageError&) {
    throw;
  } catch (const SchemaError& e) {
    throw UsageError(e.what());
  } catch (const Error& e) {
    s << "numerical failure: " << e.what() << '\n';
    res.numerical_failure = true;
  }
  res.summary = s.str();
  return res;
}

int cmd_trace(const TraceOptions& o, std::ostream& out) {
  const std::vector<TraceJob> jobs = plan_trace(o);
  if (o.dry_run) {
    for (const auto& j : jobs) {
      const LocalBranchModel m = local_branch_model(j.bp);
      out << "P=" << fmt17(j.bp.period) << " a=" << fmt17(j.bp.a) << " k=" << j.bp.k
          << " mu_star=" << fmt17(j.bp.mu_star) << " lambda_star=" << fmt17(j.bp.lambda_star)
          << " mu_ddot=" << fmt17(m.mu_ddot) << " validity_radius=" << fmt17(m.validity_radius)
          << " out=" << j.path.string() << '\n';
    }
    return kSuccess;
  }
  std::vector<TraceOutcome> outcomes(jobs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr usage;
  std::mutex usage_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        outcomes[i] = run_trace_job(jobs[i], o);
      } catch (...) {
        std::lock_guard lock(usage_mutex);
        if (!usage) usage = std::current_exception();
      }
    }
  };
  const int n_threads = std::max(1, std::min<int>(o.jobs, static_cast<int>(jobs.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (usage) std::rethrow_exception(usage);
  bool failed = false;
  for (const auto& r : outcomes) {
    out << r.summary;
    failed = failed || r.numerical_failure;
  }
  return failed ? kNumericalFailure : kSuccess;
}

int cmd_bif_points(double P, double a, int k_max, const std::string& out_path, std::ostream& out) {
  if (!(P > 0.0)) throw UsageError("--period must be positive");
  if (!(a > 0.0)) throw UsageError("--a must be positive");
  if (k_max < 1) throw UsageError("--k-max must be positive");
  if (!out_path.empty()) require_parent_dir(out_path);
  std::ostringstream t;
  t << "# P=" << fmt17(P) << " a=" << fmt17(a) << '\n';
  t << "# k mu_k lambda_k wavenumber dispersion_residual\n";
  int admissible = 0;
  for (int k = 1; k <= k_max; ++k) {
    if (!mode_is_admissible(k, P)) {
      t << "# k=" << k << " inadmissible: 2k pi/P = " << fmt17(2.0 * M_PI * k / P) << " <= sqrt(2)\n";
      continue;
    }
    const BifurcationPoint bp = bifurcation_mu(k, P, a);
    ++admissible;
    t << k << ' ' << fmt17(bp.mu_star) << ' ' << fmt17(bp.lambda_star) << ' ' << fmt17(bp.wavenumber) << ' '
      << fmt17(dispersion(bp.mu_star, a) - bp.wavenumber) << (bp.ill_conditioned ? " # ill-conditioned" : "")
      << '\n';
  }
  if (admissible == 0) t << "# no admissible mode: every k <= k_max has 2k pi/P <= sqrt(2)\n";
  out << t.str();
  if (!out_path.empty()) {
    std::ofstream f(out_path);
    f << t.str();
  }
  return kSuccess;
}

int cmd_verify(const std::string& path, const std::string& format, double newton_tol, std::ostream& out) {
  if (!fs::exists(path)) throw UsageError("branch file " + path + " does not exist");
  BranchFile f;
  try {
    f = read_branch_file(path);
  } catch (const SchemaError& e) {
    throw UsageError(e.what());
  }
  std::vector<WaveState> states;
  for (const auto& p : f.points) states.push_back(p.state);
  VerifyOptions opts;
  opts.gap_floor = 100.0 * newton_tol;
  const BranchVerification v = verify(states, opts);
  for (std::size_t i = 0; i < v.points.size(); ++i) {
    const auto& r = v.points[i];
    if (format == "json") {
      out << nlohmann::json{{"index", i}, {"report", r.to_json()}}.dump() << '\n';
      continue;
    }
    out << "point " << i << " mu=" << fmt17(states[i].mu()) << " gap_crest=" << fmt17(crest_gap(states[i]))
        << " overall=" << (r.overall ? "pass" : "fail");
    for (const auto& c : r.checks) out << ' ' << c.name << '=' << to_string(c.status);
    out << '\n';
  }
  if (format == "json") {
    out << nlohmann::json{{"summary", v.to_json()}}.dump() << '\n';
  } else {
    out << "branch points=" << v.points.size() << " failing=" << v.failing_points
        << " min_gap_trough=" << fmt17(v.min_trough_gap) << " overall=" << (v.overall ? "pass" : "fail") << '\n';
  }
  return v.overall ? kSuccess : kVerificationFailure;
}

struct ExportSet {
  std::vector<std::size_t> indices;
  std::vector<PlotSeries> profiles;
};

int cmd_export(const std::string& path, const std::string& format, const std::string& out_dir,
               std::vector<int> picks, std::ostream& out) {
  if (!fs::exists(path)) throw UsageError("branch file " + path + " does not exist");
  BranchFile f;
  try {
    f = read_branch_file(path);
  } catch (const SchemaError& e) {
    throw UsageError(e.what());
  }
  if (f.points.empty()) throw UsageError("branch file holds no records");
  const auto n = static_cast<int>(f.points.size());
  if (picks.empty()) picks = {0, n / 2, n - 1};
  std::vector<std::size_t> idx;
  for (int p : picks) {
    const int i = p < 0 ? n + p : p;
    if (i < 0 || i >= n) throw UsageError("--points index " + std::to_string(p) + " out of range");
    idx.push_back(static_cast<std::size_t>(i));
  }
  const fs::path dir(out_dir);
  fs::create_directories(dir);

  const BifurcationPoint bp = bifurcation_mu(f.mode_k, f.period, f.a);
  const LocalBranchModel model = local_branch_model(bp);
  std::vector<double> ms, mgap, mmu;
  const PeriodicGrid g8(f.period, std::max(64, 8 * f.mode_k + 8));
  for (int i = 0; i <= 60; ++i) {
    const double s = 1.5 * model.validity_radius * i / 60.0;
    const WaveState w = seed_state(bp, model, s, g8);
    ms.push_back(s);
    mgap.push_back(crest_gap(w));
    mmu.push_back(w.mu());
  }

  std::vector<double> gap, mu, expo;
  for (const auto& p : f.points) {
    gap.push_back(p.gap_crest);
    mu.push_back(p.state.mu());
    expo.push_back(p.crest_exponent);
  }

  std::vector<fs::path> written;
  if (format == "columns") {
    for (std::size_t i : idx) {
      const auto& st = f.points[i].state;
      const fs::path file = dir / fmt::format("profile_{}.dat", i);
      std::ofstream o(file);
      o << "# P=" << fmt17(st.grid().period()) << " a=" << fmt17(st.a()) << " mu=" << fmt17(st.mu())
        << " index=" << i << " columns: x phi\n";
      const RealField phi = st.phi();
      for (int j = 0; j < phi.size(); ++j) o << fmt17(st.grid().node(j)) << ' ' << fmt17(phi[j]) << '\n';
      written.push_back(file);
    }
    {
      const fs::path file = dir / "branch.dat";
      std::ofstream o(file);
      o << "# index s_arclength gap_crest mu gap_trough crest_exponent n_modes residual_norm\n";
      for (std::size_t i = 0; i < f.points.size(); ++i) {
        const auto& p = f.points[i];
        o << i << ' ' << fmt17(p.s_arclength) << ' ' << fmt17(p.gap_crest) << ' ' << fmt17(p.state.mu()) << ' '
          << fmt17(p.gap_trough) << ' ' << fmt17(p.crest_exponent) << ' ' << p.state.n_modes() << ' '
          << fmt17(p.state.residual_norm()) << '\n';
      }
      written.push_back(file);
    }
    {
      const fs::path file = dir / "model.dat";
      std::ofstream o(file);
      o << "# local model mu = mu_star + (s^2/2) mu_ddot, mu_star=" << fmt17(bp.mu_star)
        << " mu_ddot=" << fmt17(model.mu_ddot) << " columns: s gap_crest mu\n";
      for (std::size_t i = 0; i < ms.size(); ++i) o << fmt17(ms[i]) << ' ' << fmt17(mgap[i]) << ' ' << fmt17(mmu[i]) << '\n';
      written.push_back(file);
    }
    {
      const fs::path file = dir / "crest_exponent.dat";
      std::ofstream o(file);
      o << "# gap_crest crest_exponent\n";
      for (std::size_t i = 0; i < gap.size(); ++i) o << fmt17(gap[i]) << ' ' << fmt17(expo[i]) << '\n';
      written.push_back(file);
    }
  } else {
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
    std::vector<PlotSeries> prof;
    for (std::size_t c = 0; c < idx.size(); ++c) {
      const auto& st = f.points[idx[c]].state;
      PlotSeries s{fmt::format("#{} mu={:.6f}", idx[c], st.mu()), st.grid().nodes(), st.phi().data(),
                   palette[c % 6]};
      prof.push_back(std::move(s));
    }
    auto put = [&](const std::string& name, const std::string& svg) {
      const fs::path file = dir / name;
      std::ofstream o(file);
      o << svg;
      written.push_back(file);
    };
    put("profiles.svg", render_svg({"wave profiles", "x", "phi", false}, prof));
    put("branch.svg", render_svg({"bifurcation branch", "mu - phi(0)", "mu", true},
                                 {PlotSeries{"continued branch", gap, mu, "#1f77b4", true},
                                  PlotSeries{"local model", mgap, mmu, "#d62728", false, true}}));
    put("crest_exponent.svg",
        render_svg({"crest exponent", "mu - phi(0)", "exponent", true}, {PlotSeries{"fit", gap, expo, "#2ca02c", true}}));
  }
  for (const auto& p : written) out << p.string() << '\n';
  return kSuccess;
}

int cmd_cuspon(double half_width, int cells, const std::string& format, std::ostream& out) {
  if (!(half_width > 0.0) || cells < 2 || cells % 2) throw UsageError("--half-width > 0 and even --cells required");
  bool ok = true;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& c : cuspon_test_suite(half_width, cells)) {
    const double v = cuspon_pairing(c.samples);
    const double e = std::abs(v - c.expected);
    const bool pass = e < 1e-6;
    ok = ok && pass;
    if (format == "json") {
      rows.push_back({{"name", c.name}, {"odd", c.odd}, {"pairing", v}, {"expected", c.expected}, {"error", e}, {"pass", pass}});
    } else {
      out << fmt::format("{:<26} {:<4} pairing={} 2phi'(0)={} error={} {}\n", c.name, c.odd ? "odd" : "even",
                         fmt17(v), fmt17(c.expected), fmt17(e), pass ? "pass" : "fail");
    }
  }
  if (format == "json") out << rows.dump() << '\n';
  return ok ? kSuccess : kVerificationFailure;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  configure_logging_from_env();
  CLI::App app{"Even periodic traveling waves of the nonlocal Degasperis-Procesi equation"};
  app.require_subcommand(1);

  double bp_period = 1.0, bp_a = 1.0;
  int k_max = 5;
  std::string bp_out;
  auto* bif = app.add_subcommand("bif-points", "List bifurcation speeds mu_k on the constant branch");
  bif->add_option("--period", bp_period, "Period P")->capture_default_str();
  bif->add_option("--a", bp_a, "Integration constant a")->capture_default_str();
  bif->add_option("--k-max", k_max, "Largest mode number")->capture_default_str();
  bif->add_option("--out", bp_out, "Also write the table to this file");

  TraceOptions to;
  auto* trace = app.add_subcommand("trace", "Continue a branch toward the peaked wave");
  trace->add_option("--period", to.periods, "Period P (several values sweep)")->capture_default_str();
  trace->add_option("--a", to.as, "Integration constant a (several values sweep)")->capture_default_str();
  trace->add_option("--mode-k", to.modes, "Mode number k (several values sweep)")->capture_default_str();
  trace->add_option("--grid", to.cfg.initial_grid, "Initial collocation points")->capture_default_str();
  trace->add_option("--max-grid", to.cfg.max_grid, "Largest grid after refinement")->capture_default_str();
  trace->add_option("--stop-gap", to.cfg.stop_gap, "Stop once mu - phi(0) falls below this")->capture_default_str();
  trace->add_option("--newton-tol", to.cfg.newton_tol, "Residual sup-norm tolerance")->capture_default_str();
  trace->add_option("--seed-amplitude", to.cfg.seed_amplitude, "Local model amplitude of the first point")
      ->capture_default_str();
  trace->add_option("--max-points", to.cfg.max_points)->capture_default_str();
  trace->add_option("--initial-step", to.cfg.initial_step)->capture_default_str();
  trace->add_option("--min-step", to.cfg.min_step)->capture_default_str();
  trace->add_option("--max-step", to.cfg.max_step)->capture_default_str();
  trace->add_option("--mu-max", to.cfg.mu_max, "Stop once mu exceeds this");
  trace->add_option("--out", to.out, "Branch file (sweeps append _P.._a.._k.. to the stem)")->capture_default_str();
  trace->add_option("--jobs", to.jobs, "Parallel branches in a sweep")->capture_default_str()->check(CLI::PositiveNumber);
  trace->add_flag("--dry-run", to.dry_run, "Validate and print the bifurcation data only");
  trace->add_flag("--resume", to.resume, "Continue an interrupted branch file");

  std::string v_file, v_format = "text";
  double v_tol = 1e-10;
  auto* ver = app.add_subcommand("verify", "Check every point of a branch file");
  ver->add_option("file", v_file, "Branch file")->required();
  ver->add_option("--format", v_format)->check(CLI::IsMember({"text", "json"}))->capture_default_str();
  ver->add_option("--newton-tol", v_tol, "Sets the curvature-check floor (100x)")->capture_default_str();

  std::string e_file, e_format = "columns", e_out = ".";
  std::vector<int> e_points;
  auto* exp = app.add_subcommand("export", "Write profiles, branch diagram and crest trend");
  exp->add_option("file", e_file, "Branch file")->required();
  exp->add_option("--format", e_format, "columns or svg")->check(CLI::IsMember({"columns", "svg"}))->capture_default_str();
  exp->add_option("--out", e_out, "Output directory")->capture_default_str();
  exp->add_option("--points", e_points, "Record indices for profiles (negative counts from the end)");

  double c_width = 12.0;
  int c_cells = 4000;
  std::string c_format = "text";
  auto* cus = app.add_subcommand("cuspon-demo", "Distributional pairing against five odd and five even test functions");
  cus->add_option("--half-width", c_width)->capture_default_str();
  cus->add_option("--cells", c_cells, "Cells per half line (even)")->capture_default_str();
  cus->add_option("--format", c_format)->check(CLI::IsMember({"text", "json"}))->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  try {
    if (*bif) return cmd_bif_points(bp_period, bp_a, k_max, bp_out, out);
    if (*trace) return cmd_trace(to, out);
    if (*ver) return cmd_verify(v_file, v_format, v_tol, out);
    if (*exp) return cmd_export(e_file, e_format, e_out, e_points, out);
    if (*cus) return cmd_cuspon(c_width, c_cells, c_format, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  }
  return kUsageError;
}

}  // namespace dpwaves::cli
