// Command-line front end: problem validation, spectrum tables, asymptotic
// comparisons, eigenfunction dumps, integral-equation cross-checks, envelope
// bound audits, characteristic scans, and raw solution dumps.
//
// Exit codes: 0 success (possibly with warnings), 2 structural validation
// failure, 3 I/O or malformed problem file, 4 usage, 5 numerical failure.

#include <chrono>
#include <cmath>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sturm_delay/sturm_delay.hpp"

namespace sd = sturm_delay;
using nlohmann::json;

namespace {

constexpr const char* kToolVersion = "0.1.0";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct StructuralError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CommonOpts {
  std::string spec_path;
  int steps_per_mu = 0;     // 0: keep the problem file's value
  double root_tol = 0.0;    // 0: keep the problem file's value
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--spec", opts.spec_path, "problem file (JSON)")->required();
  cmd->add_option("--steps-per-mu", opts.steps_per_mu,
                  "override steps_per_unit_mu")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--root-tol", opts.root_tol, "override root_tol")
      ->check(CLI::PositiveNumber);
}

sd::ProblemSpec load_spec(const CommonOpts& opts, bool require_structural = true) {
  sd::ProblemSpec spec = sd::load_problem(opts.spec_path);
  if (opts.steps_per_mu > 0) spec.numerics.steps_per_unit_mu = opts.steps_per_mu;
  if (opts.root_tol > 0.0) spec.numerics.root_tol = opts.root_tol;
  if (require_structural) {
    const sd::ValidationReport rep = sd::validate_problem(spec);
    if (!rep.structural_ok()) {
      std::ostringstream ss;
      ss << "structurally invalid problem:";
      for (const auto& e : rep.structural_errors) ss << "\n  - " << e;
      throw StructuralError(ss.str());
    }
  }
  return spec;
}

json numerics_json(const sd::NumericsConfig& n) {
  return json{{"steps_per_unit_mu", n.steps_per_unit_mu},
              {"min_steps_per_segment", n.min_steps_per_segment},
              {"root_tol", n.root_tol},
              {"picard_tol", n.picard_tol},
              {"picard_max_iter", n.picard_max_iter},
              {"quad_panels_base", n.quad_panels_base},
              {"validation_samples", n.validation_samples}};
}

void save_output(const std::string& path, const std::string& content) {
  try {
    sd::write_text_file(path, content);
  } catch (const std::exception& e) {
    throw IoError(e.what());
  }
}

/// Sidecar manifest accompanying every output file.
void write_manifest(const std::string& command, const CommonOpts& opts,
                    const sd::NumericsConfig& numerics,
                    const std::vector<std::string>& outputs, double wall_seconds,
                    const std::vector<std::string>& notes) {
  json m{{"command", command},
         {"spec_path", opts.spec_path},
         {"tool_version", kToolVersion},
         {"numerics", numerics_json(numerics)},
         {"outputs", outputs},
         {"wall_clock_seconds", wall_seconds},
         {"notes", notes}};
  for (const auto& out : outputs) save_output(out + ".manifest.json", m.dump(2) + "\n");
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(clock::now() - start_).count();
  }

 private:
  using clock = std::chrono::steady_clock;
  clock::time_point start_ = clock::now();
};

std::string fmt(double v) { return sd::format_number(v); }

// ---------------------------------------------------------------------------

int run_validate(const CommonOpts& opts) {
  const sd::ProblemSpec spec = load_spec(opts, /*require_structural=*/false);
  const sd::ValidationReport rep = sd::validate_problem(spec);
  if (!rep.structural_ok()) {
    std::cout << "structural checks: FAIL\n";
    for (const auto& e : rep.structural_errors) std::cout << "  - " << e << "\n";
    return 2;
  }
  std::cout << "structural checks: PASS\n";
  auto print = [](const sd::CheckResult& c) {
    std::cout << "  [" << (c.pass ? "PASS" : "FAIL") << "] " << c.name
              << "  (worst margin " << fmt(c.margin) << " at x = " << fmt(c.where)
              << ")\n";
  };
  std::cout << "problem assumptions:\n";
  for (const auto& c : rep.assumption_checks) print(c);
  std::cout << "smoothness conditions (gate the refined asymptotics):\n";
  for (const auto& c : rep.smoothness_checks) print(c);
  if (!rep.assumptions_ok())
    std::cout << "warning: assumption violations reported above; the solver "
                 "will reject retarded arguments that leave their segment\n";
  if (!rep.conditions_ab_ok())
    std::cout << "warning: smoothness conditions failed; refined eigenvalue "
                 "and eigenfunction predictions are advisory for this problem\n";
  return 0;
}

int run_eig(const CommonOpts& opts, int nmin, int nmax, int n0,
            const std::string& out) {
  if (nmin < 1 || nmin > nmax) throw UsageError("need 1 <= nmin <= nmax");
  const sd::ProblemSpec spec = load_spec(opts);
  Stopwatch watch;

  struct Row {
    sd::FindResult res;
    std::string error;
  };
  const std::size_t count = std::size_t(nmax - nmin + 1);
  std::vector<Row> rows(count);
  sd::parallel_for(count, [&](std::size_t i) {
    try {
      rows[i].res = sd::find_eigen_near(spec, nmin + int(i));
    } catch (const std::exception& e) {
      rows[i].error = e.what();
      rows[i].res.record.N = nmin + int(i);
    }
  });

  std::ostringstream csv;
  csv << "N,mu_num,eigenvalue,mu_eq35,mu_eq47,err35,err47,N_err35,N2_err47,"
         "window_hits,advisory\n";
  std::vector<std::string> notes;
  bool failed = false;
  for (const auto& row : rows) {
    const sd::EigenRecord& r = row.res.record;
    csv << r.N << ',' << fmt(r.mu_num) << ',' << fmt(r.eigenvalue) << ','
        << fmt(r.mu_eq35) << ',' << fmt(r.mu_eq47) << ',' << fmt(r.err35) << ','
        << fmt(r.err47) << ',' << fmt(r.scaled35) << ',' << fmt(r.scaled47) << ','
        << r.window_hits << ',' << (r.advisory ? 1 : 0) << '\n';
    if (!row.error.empty()) {
      failed = true;
      notes.push_back("N=" + std::to_string(r.N) + ": " + row.error);
    } else if (row.res.status != sd::FindStatus::Ok) {
      std::string what = row.res.status == sd::FindStatus::NoRootInWindow
                             ? "no root in window"
                             : "multiple roots in window";
      if (row.res.nearest_outside)
        what += " (nearest sign change at mu = " + fmt(*row.res.nearest_outside) + ")";
      if (r.N < n0) what += " [below window-guarantee start n0]";
      notes.push_back("N=" + std::to_string(r.N) + ": " + what);
    }
  }
  save_output(out, csv.str());
  write_manifest("eig", opts, spec.numerics, {out}, watch.seconds(), notes);
  for (const auto& n : notes) std::cout << "note: " << n << "\n";
  std::cout << "wrote " << count << " rows to " << out << "\n";
  return failed ? 5 : 0;
}

int run_efun(const CommonOpts& opts, int N, int grid, const std::string& out) {
  if (N < 1) throw UsageError("need N >= 1");
  if (grid < 16) throw UsageError("need grid >= 16");
  const sd::ProblemSpec spec = load_spec(opts);
  Stopwatch watch;

  const sd::FindResult res = sd::find_eigen_near(spec, N);
  if (res.status == sd::FindStatus::NoRootInWindow)
    throw std::runtime_error("no root located in the window around N + 1/4");
  const sd::EigenfunctionSample smp =
      sd::make_eigenfunction_sample(spec, N, res.record.mu_num, grid);

  std::ostringstream csv;
  csv << "x,w_num,u_first,u_refined,abs_err_refined\n";
  for (std::size_t j = 0; j < smp.grid.size(); ++j)
    csv << fmt(smp.grid[j]) << ',' << fmt(smp.w_num[j]) << ',' << fmt(smp.u_first[j])
        << ',' << fmt(smp.u_asym[j]) << ','
        << fmt(std::abs(smp.u_asym[j] - smp.w_num[j])) << '\n';
  save_output(out, csv.str());

  std::vector<std::string> notes;
  if (res.status == sd::FindStatus::MultipleRoots)
    notes.push_back("window holds several roots; used the one nearest N + 1/4");
  if (res.record.advisory)
    notes.push_back("smoothness conditions unverified: refined column is advisory");
  write_manifest("efun", opts, spec.numerics, {out}, watch.seconds(), notes);
  std::cout << "mu_num = " << fmt(res.record.mu_num) << ", wrote " << smp.grid.size()
            << " rows to " << out << "\n";
  return 0;
}

int run_crosscheck(const CommonOpts& opts, double mu, bool force) {
  if (!(mu > 0.0)) throw UsageError("need mu > 0");
  const sd::ProblemSpec spec = load_spec(opts);
  const sd::CrossCheckReport rep = sd::cross_validate(spec, mu, force);
  if (rep.forced)
    std::cout << "advisory: mu is below the contraction threshold; the "
                 "fixed-point iteration carries no accuracy claim here\n";
  for (sd::SegmentId s : sd::kSegments) {
    const int k = sd::index_of(s);
    std::cout << sd::name_of(s) << ": iterations " << rep.iterations[k]
              << ", sup gap " << fmt(rep.per_segment[k]) << ", sweep changes:";
    for (double d : rep.traces[k]) std::cout << ' ' << fmt(d);
    std::cout << "\n";
  }
  std::cout << "discrepancy " << fmt(rep.discrepancy) << "\n";
  if (!rep.converged) throw std::runtime_error("iteration budget exhausted");
  return 0;
}

int run_bounds(const CommonOpts& opts, const std::vector<double>& mus,
               const std::string& out) {
  if (mus.empty()) throw UsageError("need at least one --mu");
  const sd::ProblemSpec spec = load_spec(opts);
  Stopwatch watch;

  std::ostringstream csv;
  csv << "mu,quantity,observed,bound,threshold_mu,applicable,pass\n";
  bool violations = false;
  for (double mu : mus) {
    const sd::BoundReport rep = sd::envelope_bound_audit(spec, mu);
    for (const auto& r : rep.rows) {
      csv << fmt(mu) << ',' << r.quantity << ',' << fmt(r.observed) << ','
          << fmt(r.bound) << ',' << fmt(r.threshold_mu) << ','
          << (r.applicable ? 1 : 0) << ',' << (r.pass ? 1 : 0) << '\n';
      std::cout << "mu=" << fmt(mu) << "  " << r.quantity << "  observed "
                << fmt(r.observed) << "  bound " << fmt(r.bound)
                << (r.applicable ? (r.pass ? "  PASS" : "  FAIL")
                                 : "  not applicable")
                << "\n";
      violations = violations || (r.applicable && !r.pass);
    }
  }
  if (!out.empty()) {
    save_output(out, csv.str());
    write_manifest("bounds", opts, spec.numerics, {out}, watch.seconds(), {});
  }
  if (violations) std::cout << "bound violations reported above\n";
  return 0;
}

int run_charscan(const CommonOpts& opts, double lo, double hi, int per_unit,
                 const std::string& out) {
  if (!(0.0 < lo && lo < hi)) throw UsageError("need 0 < mu-lo < mu-hi");
  if (per_unit < 1) throw UsageError("need per-unit >= 1");
  const sd::ProblemSpec spec = load_spec(opts);
  Stopwatch watch;

  const long count = std::max<long>(2, long(std::ceil((hi - lo) * per_unit)) + 1);
  std::vector<double> values(count);
  sd::parallel_for(std::size_t(count), [&](std::size_t i) {
    const double mu = lo + (hi - lo) * double(i) / double(count - 1);
    values[i] = sd::characteristic_H(spec, mu).H_norm;
  });
  std::ostringstream csv;
  csv << "mu,H_norm\n";
  for (long i = 0; i < count; ++i)
    csv << fmt(lo + (hi - lo) * double(i) / double(count - 1)) << ','
        << fmt(values[i]) << '\n';
  save_output(out, csv.str());
  write_manifest("charscan", opts, spec.numerics, {out}, watch.seconds(), {});
  std::cout << "wrote " << count << " rows to " << out << "\n";
  return 0;
}

int run_dump(const CommonOpts& opts, double mu, const std::string& out) {
  if (!(mu > 0.0)) throw UsageError("need mu > 0");
  const sd::ProblemSpec spec = load_spec(opts);
  Stopwatch watch;

  const sd::PiecewiseSolution sol = sd::solve_w(spec, mu);
  std::ostringstream csv;
  csv << "segment,x,w,w_prime\n";
  for (sd::SegmentId s : sd::kSegments) {
    const sd::SolutionSegment& seg = sol.on(s);
    for (std::size_t i = 0; i < seg.nodes.size(); ++i)
      csv << sd::name_of(s) << ',' << fmt(seg.nodes[i]) << ',' << fmt(seg.values[i])
          << ',' << fmt(seg.derivs[i]) << '\n';
  }
  save_output(out, csv.str());
  write_manifest("dump", opts, spec.numerics, {out}, watch.seconds(), {});
  std::cout << "wrote solution at mu = " << fmt(mu) << " to " << out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectrum and asymptotics toolkit for a retarded Sturm-Liouville "
               "problem with two interior transmission points"};
  app.set_version_flag("--version", std::string("sturmdelay ") + kToolVersion);
  app.require_subcommand(1);

  CommonOpts o_validate, o_eig, o_efun, o_cross, o_bounds, o_scan, o_dump;

  auto* c_validate =
      app.add_subcommand("validate", "check a problem file against the assumptions");
  add_common(c_validate, o_validate);

  auto* c_eig = app.add_subcommand("eig", "eigenvalue table over an index range");
  add_common(c_eig, o_eig);
  int nmin = 1, nmax = 1, n0 = 3;
  std::string eig_out;
  c_eig->add_option("--nmin", nmin, "first index")->required();
  c_eig->add_option("--nmax", nmax, "last index")->required();
  c_eig->add_option("--n0", n0, "window-guarantee start (annotation only)");
  c_eig->add_option("--out", eig_out, "output CSV")->required();

  auto* c_efun = app.add_subcommand("efun", "eigenfunction comparison dump");
  add_common(c_efun, o_efun);
  int efun_n = 1, efun_grid = 256;
  std::string efun_out;
  c_efun->add_option("--n", efun_n, "index N")->required();
  c_efun->add_option("--grid", efun_grid, "grid size (>= 16)");
  c_efun->add_option("--out", efun_out, "output CSV")->required();

  auto* c_cross =
      app.add_subcommand("crosscheck", "integral-equation cross-validation");
  add_common(c_cross, o_cross);
  double cross_mu = 10.0;
  bool cross_force = false;
  c_cross->add_option("--mu", cross_mu, "spectral parameter")->required();
  c_cross->add_flag("--force", cross_force, "run below the contraction threshold");

  auto* c_bounds = app.add_subcommand("bounds", "envelope bound audit");
  add_common(c_bounds, o_bounds);
  std::vector<double> bounds_mu;
  std::string bounds_out;
  c_bounds->add_option("--mu", bounds_mu, "mu values (repeatable)");
  c_bounds->add_option("--out", bounds_out, "optional output CSV");

  auto* c_scan = app.add_subcommand("charscan", "characteristic scan CSV");
  add_common(c_scan, o_scan);
  double scan_lo = 1.0, scan_hi = 2.0;
  int scan_per_unit = 64;
  std::string scan_out;
  c_scan->add_option("--mu-lo", scan_lo, "scan start")->required();
  c_scan->add_option("--mu-hi", scan_hi, "scan end")->required();
  c_scan->add_option("--per-unit", scan_per_unit, "samples per unit mu");
  c_scan->add_option("--out", scan_out, "output CSV")->required();

  auto* c_dump = app.add_subcommand("dump", "raw solution dump at one mu");
  add_common(c_dump, o_dump);
  double dump_mu = 1.0;
  std::string dump_out;
  c_dump->add_option("--mu", dump_mu, "spectral parameter")->required();
  c_dump->add_option("--out", dump_out, "output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 4;
  }

  try {
    if (*c_validate) return run_validate(o_validate);
    if (*c_eig) return run_eig(o_eig, nmin, nmax, n0, eig_out);
    if (*c_efun) return run_efun(o_efun, efun_n, efun_grid, efun_out);
    if (*c_cross) return run_crosscheck(o_cross, cross_mu, cross_force);
    if (*c_bounds) return run_bounds(o_bounds, bounds_mu, bounds_out);
    if (*c_scan) return run_charscan(o_scan, scan_lo, scan_hi, scan_per_unit, scan_out);
    if (*c_dump) return run_dump(o_dump, dump_mu, dump_out);
  } catch (const sd::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 4;
  } catch (const StructuralError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 5;
  }
  return 4;
}
