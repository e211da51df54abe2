#include "gaussep_cli/commands.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <ostream>
#include <thread>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "CLI11.hpp"

#include "gaussep/ensembles.hpp"
#include "gaussep/errors.hpp"
#include "gaussep_cli/io.hpp"

namespace gaussep::cli {

namespace {

GaussianState state_from_file(const StateFile& f, double hbar) {
  return make_state(f.sigma, f.mean, hbar, Partition(f.n_a, f.n_b));
}

std::pair<int, int> parse_modes(const std::string& text) {
  const auto plus = text.find('+');
  int a = 0;
  int b = 0;
  const char* end = text.data() + text.size();
  if (plus == std::string::npos ||
      std::from_chars(text.data(), text.data() + plus, a).ptr != text.data() + plus ||
      std::from_chars(text.data() + plus + 1, end, b).ptr != end) {
    throw InputError(fmt::format("--modes: expected A+B, got '{}'", text));
  }
  return {a, b};
}

double parse_double(std::string_view s, std::string_view what) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw InputError(fmt::format("{}: '{}' is not a number", what, s));
  }
  return v;
}

int parse_int(std::string_view s, std::string_view what) {
  int v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw InputError(fmt::format("{}: '{}' is not an integer", what, s));
  }
  return v;
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  return out;
}

}  // namespace

int exit_code_for(const SeparabilityVerdict& verdict) noexcept {
  switch (verdict.index()) {
    case 0: return kExitSeparable;
    case 1: return kExitEntangled;
    default: return kExitUndetermined;
  }
}

// ---------------------------------------------------------------------------
// check

int cmd_check(const CheckOptions& opts, std::ostream& out, std::ostream& err) {
  ConfigEcho echo;
  std::optional<GaussianState> state;
  StateFile file;
  try {
    file = load_state_file(opts.state);
    echo.hbar = file.hbar;
    if (opts.hbar) {
      if (!(*opts.hbar > 0.0)) throw InputError("--hbar must be positive");
      echo.hbar = *opts.hbar;
      echo.hbar_source = "flag";
    }
    if (opts.tol) {
      if (!(*opts.tol > 0.0)) throw InputError("--tol must be positive");
      echo.solver.cert_tol = *opts.tol;
      echo.solver.residual_tol = *opts.tol;
      echo.tol_source = "flag";
    }
    if (opts.max_iter) {
      if (*opts.max_iter < 1) throw InputError("--max-iter must be >= 1");
      echo.solver.max_iter = *opts.max_iter;
      echo.max_iter_source = "flag";
    }
    state = state_from_file(file, echo.hbar);
  } catch (const InputError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitInputError;
  } catch (const Error& e) {
    fmt::print(err, "error: {}: {} [{}]\n", opts.state.string(), e.what(), to_string(e.code()));
    return kExitInputError;
  }

  const auto start = std::chrono::steady_clock::now();
  CriterionReport report{Undetermined{}, {}, 0, 0.0};
  try {
    report = run_criterion(*state, echo.solver);
  } catch (const Error& e) {
    fmt::print(err, "numerical failure, verdict undetermined: {}\n", e.what());
  }
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

  const std::string text = dump(report_to_json(*state, report, ms, echo, file.label));
  if (opts.report) {
    try {
      write_text_file(*opts.report, text);
    } catch (const InputError& e) {
      fmt::print(err, "error: {}\n", e.what());
      return kExitInputError;
    }
    fmt::print(out, "{}\n", verdict_name(report.verdict));
  } else {
    out << text;
  }
  return exit_code_for(report.verdict);
}

// ---------------------------------------------------------------------------
// random

int cmd_random(const RandomOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    EnsembleSpec spec;
    spec.kind = parse_ensemble_kind(opts.kind);
    std::tie(spec.n_a, spec.n_b) = parse_modes(opts.modes);
    spec.seed = opts.seed;
    spec.count = opts.count;
    spec.spread = opts.spread;
    spec.r = opts.r;
    spec.t = opts.t;
    spec.hbar = opts.hbar;
    spec.validate();

    std::vector<GeneratedState> states;
    if (!opts.nu.empty()) {
      if (spec.kind != EnsembleKind::ThermalProduct) throw InputError("--nu applies to thermal_product only");
      const int modes = spec.n_a + spec.n_b;
      if (static_cast<int>(opts.nu.size()) != modes) {
        throw InputError(fmt::format("--nu needs {} values, got {}", modes, opts.nu.size()));
      }
      Vector nu(modes);
      for (int i = 0; i < modes; ++i) {
        nu(i) = opts.nu[static_cast<std::size_t>(i)];
        if (!(nu(i) >= 0.5 * spec.hbar)) throw InputError(fmt::format("--nu value {} is below hbar/2", nu(i)));
      }
      for (int k = 0; k < spec.count; ++k) states.push_back({thermal_covariance(nu), "thermal_product"});
    } else {
      states = generate_ensemble(spec);
    }

    std::error_code ec;
    std::filesystem::create_directories(opts.out_dir, ec);
    if (ec) throw InputError(fmt::format("{}: {}", opts.out_dir.string(), ec.message()));
    for (std::size_t k = 0; k < states.size(); ++k) {
      StateFile f;
      f.hbar = spec.hbar;
      f.n_a = spec.n_a;
      f.n_b = spec.n_b;
      f.sigma = states[k].sigma;
      f.label = states[k].label;
      const auto path = opts.out_dir / fmt::format("{}_{:04d}.json", opts.kind, k);
      write_text_file(path, dump(state_to_json(f)));
      fmt::print(out, "{}\n", path.string());
    }
    return 0;
  } catch (const InputError& e) {
    fmt::print(err, "error: {}\n", e.what());
  } catch (const Error& e) {
    fmt::print(err, "error: {}\n", e.what());
  }
  return kExitInputError;
}

// ---------------------------------------------------------------------------
// sweep

std::vector<SweepRow> sweep_rows(const SweepOptions& opts) {
  if (opts.kind != "tmsv_noisy") throw InputError("sweep supports --kind tmsv_noisy only");
  if (opts.steps < 1) throw InputError("--steps must be >= 1");
  if (!(opts.r >= 0.0)) throw InputError("--r must be >= 0");
  if (!(opts.t_min >= 0.0) || !(opts.t_max >= opts.t_min)) throw InputError("need 0 <= t-min <= t-max");
  if (!(opts.hbar > 0.0)) throw InputError("--hbar must be positive");

  const std::vector<double> ts = linspace(opts.t_min, opts.t_max, opts.steps);
  std::vector<SweepRow> rows(ts.size());
  std::vector<std::exception_ptr> failures(ts.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i = next++; i < ts.size(); i = next++) {
      try {
        const GaussianState st =
            make_state(tmsv_noisy_covariance(opts.r, ts[i], opts.hbar), Vector(), opts.hbar, Partition(1, 1));
        const CriterionReport rep = run_criterion(st);
        SweepRow& row = rows[i];
        row.t = ts[i];
        row.ppt_pass = rep.ppt.pass;
        row.nu_tilde_min = rep.ppt.nu_tilde.minCoeff();
        row.verdict = std::string(verdict_name(rep.verdict));
        row.iterations = rep.solver_iterations;
        if (const auto* s = std::get_if<Separable>(&rep.verdict)) {
          row.slack_or_residual = s->certificate.slack;
        } else if (std::holds_alternative<Entangled>(rep.verdict)) {
          row.slack_or_residual = row.nu_tilde_min - 0.5 * opts.hbar;
        } else {
          row.slack_or_residual = rep.solver_residual;
        }
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };

  unsigned n_threads = opts.threads > 0 ? static_cast<unsigned>(opts.threads) : std::thread::hardware_concurrency();
  n_threads = std::max(1u, std::min<unsigned>(n_threads, static_cast<unsigned>(ts.size())));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < n_threads; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  for (const auto& f : failures)
    if (f) std::rethrow_exception(f);
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string csv = "t,ppt_pass,nu_tilde_min,verdict,slack_or_residual,iterations\n";
  for (const SweepRow& r : rows) {
    csv += fmt::format("{},{},{},{},{},{}\n", r.t, r.ppt_pass ? 1 : 0, r.nu_tilde_min, r.verdict,
                       r.slack_or_residual, r.iterations);
  }
  return csv;
}

int cmd_sweep(const SweepOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    const std::string csv = sweep_csv(sweep_rows(opts));
    if (opts.out.empty() || opts.out == "-") {
      out << csv;
    } else {
      write_text_file(opts.out, csv);
      fmt::print(out, "{}\n", opts.out.string());
    }
    return 0;
  } catch (const InputError& e) {
    fmt::print(err, "error: {}\n", e.what());
  } catch (const Error& e) {
    fmt::print(err, "error: {}\n", e.what());
  }
  return kExitInputError;
}

// ---------------------------------------------------------------------------
// certify

int cmd_certify(const CertifyOptions& opts, std::ostream& out, std::ostream& err) {
  std::optional<GaussianState> state;
  CertificateFile cert;
  try {
    const StateFile f = load_state_file(opts.state);
    state = state_from_file(f, f.hbar);
    cert = load_certificate_file(opts.certificate);
    if (cert.p_a.rows() != 2 * f.n_a || cert.p_b.rows() != 2 * f.n_b) {
      throw InputError(fmt::format("certificate blocks are {}x{} and {}x{}, state needs {}x{} and {}x{}",
                                   cert.p_a.rows(), cert.p_a.cols(), cert.p_b.rows(), cert.p_b.cols(), 2 * f.n_a,
                                   2 * f.n_a, 2 * f.n_b, 2 * f.n_b));
    }
  } catch (const InputError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitInputError;
  } catch (const Error& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitInputError;
  }

  for (const auto& [name, p] : {std::pair{"P_A", &cert.p_a}, std::pair{"P_B", &cert.p_b}}) {
    if (!is_posdef_symplectic(*p, opts.symplectic_tol)) {
      fmt::print(out, "rejected: {} is not symmetric positive definite symplectic (residual {})\n", name,
                 symplectic_residual(*p));
      return 1;
    }
  }
  double slack = 0.0;
  try {
    slack = certificate_check(state->sigma(), cert.p_a, cert.p_b, state->hbar(), opts.symplectic_tol);
  } catch (const Error& e) {
    fmt::print(out, "rejected: {}\n", e.what());
    return 1;
  }
  const bool ok = slack >= -opts.cert_tol;
  fmt::print(out, "{} slack={}\n", ok ? "verified" : "rejected", slack);
  return ok ? 0 : 1;
}

// ---------------------------------------------------------------------------
// wigner-compare

GridSpec parse_grid(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw InputError(fmt::format("--grid: expected x0:x1:nx,p0:p1:np, got '{}'", text));
  auto axis = [&](std::string_view part, double& lo, double& hi, int& n) {
    const auto c1 = part.find(':');
    const auto c2 = c1 == std::string_view::npos ? c1 : part.find(':', c1 + 1);
    if (c2 == std::string_view::npos) throw InputError(fmt::format("--grid: bad axis '{}'", part));
    lo = parse_double(part.substr(0, c1), "--grid");
    hi = parse_double(part.substr(c1 + 1, c2 - c1 - 1), "--grid");
    n = parse_int(part.substr(c2 + 1), "--grid");
    if (n < 1) throw InputError("--grid: point counts must be >= 1");
  };
  GridSpec g;
  const std::string_view view(text);
  axis(view.substr(0, comma), g.x0, g.x1, g.nx);
  axis(view.substr(comma + 1), g.p0, g.p1, g.np);
  return g;
}

int cmd_wigner_compare(const WignerCompareOptions& opts, std::ostream& out, std::ostream& err) {
  std::optional<SymplecticMatrix> s;
  GridSpec grid;
  try {
    if (!(opts.hbar > 0.0)) throw InputError("--hbar must be positive");
    grid = parse_grid(opts.grid);
    const Matrix m = load_matrix_file(opts.s_path, "S");
    if (m.rows() != 2 || m.cols() != 2) {
      throw InputError(fmt::format("{}: S must be 2x2 (one mode), got {}x{}", opts.s_path.string(), m.rows(), m.cols()));
    }
    s.emplace(m);
  } catch (const InputError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitInputError;
  } catch (const Error& e) {
    fmt::print(err, "error: {}: {}\n", opts.s_path.string(), e.what());
    return kExitInputError;
  }

  try {
    const PureGaussian pg = pure_gaussian_from_symplectic(*s, opts.hbar);
    const QuadratureConfig quad = default_quadrature(*s, opts.hbar);
    const Wavefunction1D psi = [&](double x) { return pure_gaussian_wavefunction(pg, Vector::Constant(1, x)); };

    double worst = 0.0;
    out << "x,p,closed_form,quadrature,abs_err\n";
    for (double x : linspace(grid.x0, grid.x1, grid.nx)) {
      for (double p : linspace(grid.p0, grid.p1, grid.np)) {
        Vector z(2);
        z << x, p;
        const double closed = pure_gaussian_wigner_closed(*s, z, opts.hbar);
        const double numeric = wigner_transform_numeric_1d(psi, x, p, opts.hbar, quad);
        const double e = std::abs(closed - numeric);
        worst = std::max(worst, e);
        fmt::print(out, "{},{},{},{},{}\n", x, p, closed, numeric, e);
      }
    }
    fmt::print(err, "max_abs_err={}\n", worst);
    return worst > opts.max_error ? 1 : 0;
  } catch (const Error& e) {
    fmt::print(err, "error: {}\n", e.what());
    return 1;
  }
}

// ---------------------------------------------------------------------------
// Entry point

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gaussian-state separability checker", "gaussep"};
  app.require_subcommand(1);
  app.set_version_flag("--version", GAUSSEP_VERSION);

  CheckOptions check;
  auto* c = app.add_subcommand("check", "Decide separability of a state file");
  c->add_option("state", check.state, "State file (JSON)")->required();
  c->add_option("--hbar", check.hbar, "Override the file's hbar");
  c->add_option("--tol", check.tol, "Certificate and residual tolerance");
  c->add_option("--max-iter", check.max_iter, "Feasibility solver iteration cap");
  c->add_option("--report", check.report, "Write the report here instead of stdout");

  RandomOptions rnd;
  auto* r = app.add_subcommand("random", "Write seeded random state files");
  r->add_option("--kind", rnd.kind, "thermal_product | random_bonafide | tmsv | tmsv_noisy")->required();
  r->add_option("--modes", rnd.modes, "Mode split A+B")->capture_default_str();
  auto* seed_opt = r->add_option("--seed", rnd.seed, "Seed (GAUSSEP_SEED overrides)");
  r->add_option("--count", rnd.count, "Number of files")->capture_default_str();
  r->add_option("--spread", rnd.spread, "Squeezing scale for random symplectics")->capture_default_str();
  r->add_option("--r", rnd.r, "Squeezing")->capture_default_str();
  r->add_option("--t", rnd.t, "Added noise")->capture_default_str();
  r->add_option("--hbar", rnd.hbar)->capture_default_str();
  r->add_option("--nu", rnd.nu, "Symplectic eigenvalues (thermal_product)")->delimiter(',');
  r->add_option("--out", rnd.out_dir, "Output directory")->required();

  SweepOptions sw;
  auto* s = app.add_subcommand("sweep", "Noise sweep across the PPT boundary, CSV out");
  s->add_option("--kind", sw.kind, "Family (tmsv_noisy only)")->capture_default_str();
  s->add_option("--r", sw.r, "Squeezing")->capture_default_str();
  s->add_option("--t-min", sw.t_min)->capture_default_str();
  s->add_option("--t-max", sw.t_max)->capture_default_str();
  s->add_option("--steps", sw.steps, "Grid points in t")->capture_default_str();
  s->add_option("--hbar", sw.hbar)->capture_default_str();
  s->add_option("--threads", sw.threads, "0 means hardware concurrency")->capture_default_str();
  s->add_option("--out", sw.out, "CSV path, '-' for stdout")->required();

  CertifyOptions cf;
  auto* v = app.add_subcommand("certify", "Re-verify a separability certificate");
  v->add_option("state", cf.state, "State file (JSON)")->required();
  v->add_option("certificate", cf.certificate, "Verdict report or bare {P_A, P_B}")->required();
  v->add_option("--tol", cf.cert_tol, "Accept slack >= -tol")->capture_default_str();

  WignerCompareOptions wc;
  auto* w = app.add_subcommand("wigner-compare", "Closed-form vs quadrature Wigner function, one mode");
  w->add_option("--S", wc.s_path, "2x2 symplectic matrix file")->required();
  w->add_option("--grid", wc.grid, "x0:x1:nx,p0:p1:np")->capture_default_str();
  w->add_option("--hbar", wc.hbar)->capture_default_str();

  std::vector<const char*> argv{"gaussep"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitInputError;
  }

  if (*r) {
    if (const char* env = std::getenv("GAUSSEP_SEED")) {
      const std::string_view sv(env);
      std::uint64_t seed = 0;
      const auto res = std::from_chars(sv.data(), sv.data() + sv.size(), seed);
      if (res.ec != std::errc() || res.ptr != sv.data() + sv.size()) {
        fmt::print(err, "error: GAUSSEP_SEED='{}' is not an unsigned integer\n", sv);
        return kExitInputError;
      }
      rnd.seed = seed;
    }
    (void)seed_opt;
    return cmd_random(rnd, out, err);
  }
  if (*c) return cmd_check(check, out, err);
  if (*s) return cmd_sweep(sw, out, err);
  if (*v) return cmd_certify(cf, out, err);
  return cmd_wigner_compare(wc, out, err);
}

}  // namespace gaussep::cli
