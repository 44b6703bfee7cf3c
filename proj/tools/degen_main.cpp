// Config-driven experiment runner: every module is a subcommand emitting
// machine-readable CSV/JSON reports.
//
// Exit codes: 0 success, 2 precondition violation, 3 numerical failure,
// 4 output/IO error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "degen/geometry.hpp"
#include "degen/iterates.hpp"
#include "degen/metric.hpp"
#include "degen/recurrence.hpp"
#include "degen/report.hpp"
#include "degen/sobolev.hpp"
#include "degen/solver.hpp"
#include "degen/young.hpp"

namespace {

using namespace degen;

std::vector<double> parse_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  return out;
}

struct CommonOpts {
  std::string out_dir;
  std::filesystem::path resolve() const { return resolve_output_dir(out_dir); }
};

GridFunction fill_grid(const Grid2D& g, const std::function<double(double, double)>& fn) {
  GridFunction out(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) out.at(i, j) = fn(g.x(i), g.y(j));
  return out;
}

int run_young_check(double m, const std::string& variant, const CommonOpts& opts) {
  PhiM phi(m);
  ReportSummary rep;
  rep.params = {{"m", m}, {"variant", variant}};

  const double E = phi.log_E();
  const double below = phi.eval(LogVal::from_log(E - 1e-13)).log();
  const double above = phi.eval(LogVal::from_log(E + 1e-13)).log();
  const double continuity = std::abs(below - above) / std::max(1.0, std::abs(above));
  const auto [dl, dr] = phi.derivative(LogVal::from_log(E));
  const double extension_margin = dr.log() - dl.log();

  std::vector<double> grid;
  for (int i = 0; i <= 100; ++i) grid.push_back(-30.0 + 330.0 * i / 100.0);
  const double submult = submult_ratio(phi, grid, grid);

  rep.metrics = {{"branch_continuity_rel", continuity},
                 {"extension_margin_log", extension_margin},
                 {"submult_ratio_max", submult}};
  rep.flags = {{"continuity_ok", continuity < 1e-12},
               {"extension_ok", extension_margin > 0.0},
               {"submultiplicative", submult <= 1.0 + 1e-9}};
  if (variant == "phi_tilde") {
    PhiTildeM tilde(m);
    rep.metrics["equivalence_constant"] = tilde.equivalence_constant();
    const double dlb = tilde.derivative(LogVal::from_log(tilde.log_a() - 1e-9)).first.log();
    const double drb = tilde.derivative(LogVal::from_log(tilde.log_a() + 1e-9)).second.log();
    rep.flags["c1_at_a"] = std::abs(dlb - drb) < 1e-6;
  }
  rep.write(opts.resolve() / "young_check.json");
  std::cout << (rep.all_flags_pass() ? "ok" : "FAIL") << ": young check m=" << m << "\n";
  return rep.all_flags_pass() ? 0 : 3;
}

int run_iterates_check(double m, int jmax, const std::string& betas_csv,
                       const CommonOpts& opts) {
  CsvTable csv({"m", "j", "beta", "variant", "t_log", "ratio1", "ratio2"});
  ReportSummary rep;
  rep.params = {{"m", m}, {"jmax", jmax}, {"betas", betas_csv}};
  bool ok = true;
  double cm_emp = 0.0;
  for (double beta : parse_list(betas_csv)) {
    for (int j = 1; j <= jmax; ++j) {
      for (int variant = 0; variant < 2; ++variant) {
        const IterSpec spec(m, j, beta,
                            variant ? YoungVariant::phi_tilde : YoungVariant::phi);
        for (double lx = 0.1; lx < 30.0; lx += 1.7) {
          for (double sgn : {1.0, -1.0}) {
            const auto r = h_ratios(spec, LogVal::from_log(sgn * lx));
            csv.add_row({m, static_cast<double>(j), beta, static_cast<double>(variant),
                         sgn * lx, r.ratio1, r.ratio2});
            const double upper = (variant ? 3.0 : 2.0) +
                                 (beta == 1.0 ? 0.0 : std::abs(beta - 1.0) / std::abs(beta));
            ok = ok && r.ratio1 >= std::abs(beta) * (1.0 - 1e-9) &&
                 r.ratio2 >= 1.0 - 1e-6 && r.ratio2 <= upper + 1e-6;
            cm_emp = std::max(cm_emp, r.ratio1 / (std::abs(beta) * std::pow(j, m - 1.0)));
          }
        }
      }
    }
  }
  csv.write(opts.resolve() / "iterates_ratios.csv");
  rep.metrics = {{"empirical_C_m", cm_emp}};
  rep.flags = {{"brackets_ok", ok}};
  rep.write(opts.resolve() / "iterates_check.json");
  std::cout << (ok ? "ok" : "FAIL") << ": iterate ratio brackets, empirical C_m = "
            << cm_emp << "\n";
  return ok ? 0 : 3;
}

int cli_recurrence(double m, double K, double gamma, double theta1, int N,
                   const CommonOpts& opts) {
  const auto tr = degen::run_recurrence(m, K, gamma, theta1, N);
  const double cm = m > 2.0 ? minimal_cm(tr) : 0.0;
  CsvTable csv({"n", "beta_n", "alpha_n"});
  const double shift = theta1 + cm * (gamma + std::log(K));
  for (std::size_t i = 0; i < tr.betas.size(); ++i)
    csv.add_row({static_cast<double>(i + 1), tr.betas[i], shift + static_cast<double>(i)});
  csv.write(opts.resolve() / "recurrence_trace.csv");
  ReportSummary rep;
  rep.params = {{"m", m}, {"K", K}, {"gamma", gamma}, {"theta1", theta1}, {"N", N}};
  rep.metrics = {{"minimal_C_m", cm}};
  if (m > 2.0) rep.flags["dominated"] = cstar_verify(tr, cm + 1e-12);
  rep.write(opts.resolve() / "recurrence.json");
  std::cout << "ok: recurrence trace written, minimal C_m = " << cm << "\n";
  return 0;
}

int run_recurrence_failure(double m, double K, int N, const CommonOpts& opts) {
  const auto seq = failure_demo(m, K, N);
  CsvTable csv({"n", "log_phi_unwound"});
  for (std::size_t i = 0; i < seq.size(); ++i)
    csv.add_row({static_cast<double>(i + 1), seq[i]});
  csv.write(opts.resolve() / "recurrence_failure.csv");
  const double growth = seq.back() - seq[std::min<std::size_t>(9, seq.size() - 1)];
  std::cout << "ok: failure sequence written, log growth from n=10: " << growth << "\n";
  return 0;
}

int run_geometry_check(int k, double sigma, double m, double C_m, const CommonOpts& opts) {
  const Geometry geom(k, sigma);
  const auto grid = log_grid(geom.r_max() * 1e-5, geom.r_max() * 0.9, 400);
  const auto report = structural_check(geom.profile(), grid);
  SuperradiusSpec spec{m, C_m, geom.profile()};
  CsvTable csv({"r", "log_phi"});
  for (double r : grid) csv.add_row({r, log_superradius(spec, r)});
  csv.write(opts.resolve() / "superradius.csv");

  ReportSummary rep;
  rep.params = geom.to_json();
  rep.params["m"] = m;
  rep.params["C_m"] = C_m;
  rep.metrics = {{"doubling_constant", report.doubling_constant},
                 {"epsilon", report.epsilon},
                 {"cond5_low", report.cond5_low},
                 {"cond5_high", report.cond5_high},
                 {"r_max", geom.r_max()}};
  rep.flags = {{"structural_pass", report.pass()},
               {"signs_ok", report.signs_ok},
               {"monotone_ok", report.monotone_ok}};
  rep.write(opts.resolve() / "geometry_check.json");
  std::cout << (report.pass() ? "ok" : "FAIL") << ": structural conditions for F_{" << k
            << "," << sigma << "}\n";
  return report.pass() ? 0 : 3;
}

int run_metric_build(int k, double sigma, double X, double Y, int nx, int ny,
                     const std::string& radii_csv, bool dump_field,
                     const CommonOpts& opts) {
  const Geometry geom(k, sigma);
  const Grid2D grid(X, Y, nx, ny);
  const auto field = cc_distance_field(geom.profile(), grid);
  if (dump_field) {
    CsvTable csv({"x", "y", "dist"});
    for (int j = 0; j < grid.ny; ++j)
      for (int i = 0; i < grid.nx; ++i)
        csv.add_row({grid.x(i), grid.y(j), field.at(i, j)});
    csv.write(opts.resolve() / "metric_field.csv");
  }
  if (!radii_csv.empty()) {
    const auto radii = parse_list(radii_csv);
    const auto bp = ball_profile(field, radii);
    CsvTable csv({"r", "vol", "delta0", "nu0"});
    for (std::size_t i = 0; i < bp.radii.size(); ++i)
      csv.add_row({bp.radii[i], bp.volume[i], bp.delta0[i], bp.nu0[i]});
    csv.write(opts.resolve() / "ball_profile.csv");
  }
  std::cout << "ok: metric field built (" << nx << "x" << ny << ")\n";
  return 0;
}

int run_metric_sanity(int n, const CommonOpts& opts) {
  const Grid2D grid(1.0, 1.0, n, n);
  const auto field = cc_distance_field(isotropic_profile(), grid);
  double worst = 0.0;
  for (int j = 0; j < grid.ny; j += 2)
    for (int i = 0; i < grid.nx; i += 2) {
      const double e = std::hypot(grid.x(i), grid.y(j));
      if (e < 0.15) continue;
      worst = std::max(worst, std::abs(field.at(i, j) - e) / e);
    }
  const double rs[] = {0.3, 0.4};
  const auto bp = ball_profile(field, rs);
  ReportSummary rep;
  rep.params = {{"n", n}};
  rep.metrics = {{"worst_rel_error", worst},
                 {"delta0_over_r", bp.delta0[0] / bp.radii[0]}};
  rep.flags = {{"within_5pct", worst < 0.05},
               {"halving_ok",
                std::abs(bp.delta0[0] / bp.radii[0] - (1.0 - 1.0 / std::sqrt(2.0))) < 0.03}};
  rep.write(opts.resolve() / "metric_sanity.json");
  std::cout << (rep.all_flags_pass() ? "ok" : "FAIL")
            << ": isotropic sanity, worst error = " << worst << "\n";
  return rep.all_flags_pass() ? 0 : 3;
}

int run_cutoffs(double r, double nu, int J, const CommonOpts& opts) {
  const auto seq = cutoff_radii(r, nu, J);
  CsvTable csv({"j", "r_j", "ramp_top_j", "slope_j"});
  for (int j = 1; j <= J; ++j)
    csv.add_row({static_cast<double>(j), seq.radii[static_cast<std::size_t>(j) - 1],
                 seq.ramp_tops[static_cast<std::size_t>(j) - 1], seq.ramp_slope(j)});
  csv.write(opts.resolve() / "cutoff_radii.csv");
  std::cout << "ok: cutoff radii written, r_inf = " << seq.radii.back() << "\n";
  return 0;
}

int run_sobolev_probe(int k, double sigma, double m, double C_m, double rho, double X,
                      double Y, int nx, int ny, const CommonOpts& opts) {
  const Geometry geom(k, sigma);
  const Grid2D grid(X, Y, nx, ny);
  const auto field = cc_distance_field(geom.profile(), grid);
  CsvTable csv({"style", "eps", "lhs_log", "rhs", "ratio"});
  auto row = [&](const std::string&, double style_id, double eps, const SobolevProbe& p) {
    csv.add_row({style_id, eps, p.lhs_log, p.rhs, p.ratio()});
  };
  const auto p0 = sobolev_ratio(geom.profile(), m, C_m, field, rho,
                                test_family(geom.profile(), field, rho,
                                            TestStyle::metric_radial_bump));
  row("bump", 0, 0.0, p0);
  const auto p1 = sobolev_ratio(geom.profile(), m, C_m, field, rho,
                                test_family(geom.profile(), field, rho,
                                            TestStyle::tensor_bump));
  row("tensor", 1, 0.0, p1);
  for (double frac : {0.25, 0.1}) {
    const double eps = frac * rho;
    if (eps < 2.0 * grid.hx) continue;
    const auto p = sobolev_ratio(geom.profile(), m, C_m, field, rho,
                                 test_family(geom.profile(), field, rho,
                                             TestStyle::extremal, eps));
    row("extremal", 2, eps, p);
  }
  csv.write(opts.resolve() / "sobolev_probes.csv");
  std::cout << "ok: sobolev probes written, sup ratio = "
            << family_sup_ratio(geom.profile(), m, C_m, field, rho) << "\n";
  return 0;
}

int run_sobolev_failure(double m, int k, double sigma, double rho,
                        const std::string& eps_csv, const CommonOpts& opts) {
  const Geometry geom(k, sigma);
  const auto sweep = failure_probe(geom, m, 1.0, rho, parse_list(eps_csv));
  CsvTable csv({"eps", "lhs_log", "rhs", "ratio_log"});
  for (std::size_t i = 0; i < sweep.eps.size(); ++i)
    csv.add_row({sweep.eps[i], sweep.probes[i].lhs_log, sweep.probes[i].rhs,
                 sweep.probes[i].ratio_log});
  csv.write(opts.resolve() / "sobolev_failure.csv");
  ReportSummary rep;
  rep.params = {{"m", m}, {"k", k}, {"sigma", sigma}, {"rho", rho}};
  rep.metrics = {{"divergence_exponent", sweep.divergence_exponent},
                 {"log_growth", sweep.probes.back().ratio_log - sweep.probes.front().ratio_log}};
  rep.flags = {{"exponent_exceeds_one", sweep.divergence_exponent > 1.0}};
  rep.write(opts.resolve() / "sobolev_failure.json");
  std::cout << "ok: failure sweep written, exponent = " << sweep.divergence_exponent
            << "\n";
  return 0;
}

int run_sobolev_endpoint(int k, double sigma, double m, double r0,
                         const std::string& alphas_csv, const CommonOpts& opts) {
  const Geometry geom(k, sigma);
  const auto alphas = parse_list(alphas_csv);
  const auto rep = endpoint_check(geom.profile(), m, 1.0, r0, alphas);
  CsvTable csv({"alpha", "max_ratio", "argmax_y"});
  for (const auto& rowv : rep.rows) csv.add_row({rowv.alpha, rowv.max_ratio, rowv.argmax_y});
  csv.write(opts.resolve() / "endpoint_check.csv");
  std::cout << "ok: endpoint check written, max ratio = " << rep.max_ratio << "\n";
  return 0;
}

int run_solver_mms(int n1, int n2, const CommonOpts& opts) {
  const Geometry geom(1, 0.5);
  auto solve_err = [&](int n) {
    const Grid2D g = Grid2D::make(0.4, 0.9, 0.0, 0.5, n, n);
    const auto coeff = CoeffField::from_profile(geom.profile(), g);
    RhsPair rhs = RhsPair::zero(g);
    rhs.phi0 = fill_grid(g, [&](double x, double y) {
      const double f = geom.f(x);
      return M_PI * M_PI * (1.0 + f * f) * std::sin(M_PI * x) * std::sin(M_PI * y);
    });
    const auto bc = fill_grid(g, [](double x, double y) {
      return std::sin(M_PI * x) * std::sin(M_PI * y);
    });
    const auto rep = assemble_and_solve(geom.profile(), coeff, rhs, bc, 1e-11);
    double err = 0.0;
    for (int j = 1; j + 1 < g.ny; ++j)
      for (int i = 1; i + 1 < g.nx; ++i)
        err = std::max(err, std::abs(rep.u.at(i, j) -
                                     std::sin(M_PI * g.x(i)) * std::sin(M_PI * g.y(j))));
    return err;
  };
  const double e1 = solve_err(n1), e2 = solve_err(n2);
  const double order = std::log(e1 / e2) / std::log(static_cast<double>(n2) / n1);
  ReportSummary rep;
  rep.params = {{"n1", n1}, {"n2", n2}};
  rep.metrics = {{"err1", e1}, {"err2", e2}, {"order", order}};
  rep.flags = {{"order_ge_1.8", order >= 1.8}};
  rep.write(opts.resolve() / "solver_mms.json");
  std::cout << (order >= 1.8 ? "ok" : "FAIL") << ": convergence order = " << order << "\n";
  return order >= 1.8 ? 0 : 3;
}

int run_solver_supnorm(double m, int J, const CommonOpts& opts) {
  const Grid2D g(1.0, 1.0, 256, 256);
  const auto field = metric_field_from_function(
      g, 0.0, 0.0, [](double x, double y) { return std::hypot(x, y); });
  const auto radii = nested_radii(0.8, 0.4, J);
  GridFunction f = fill_grid(g, [](double x, double y) {
    return 1.0 + std::cos(M_PI * std::hypot(x, y) / 8.0);
  });
  const auto a = supnorm_recovery(f, field, radii, m);
  CsvTable csv({"j", "a_j"});
  for (std::size_t j = 0; j < a.size(); ++j)
    csv.add_row({static_cast<double>(j + 1), a[j]});
  csv.write(opts.resolve() / "supnorm_recovery.csv");
  std::cout << "ok: supnorm recovery written, a_J = " << a.back() << "\n";
  return 0;
}

int run_solver_moser(int k, double sigma, double m, int J, const CommonOpts& opts) {
  const Geometry geom(k, sigma);
  const Grid2D g(0.3, 0.15, 96, 768);
  const auto field = cc_distance_field(geom.profile(), g);
  const auto coeff = CoeffField::from_profile(geom.profile(), g, 0.2);
  RhsPair forcing = RhsPair::zero(g);
  forcing.phi0 = fill_grid(g, [](double, double) { return -0.4; });
  const auto bc = fill_grid(g, [](double x, double y) { return 1.0 + 0.4 * x + 0.3 * y; });
  const auto rep = assemble_and_solve(geom.profile(), coeff, forcing, bc);
  if (!certify(geom.profile(), coeff, RhsPair::zero(g), rep.u).subsolution)
    throw numeric_error("moser: subsolution certificate failed");
  const auto chain = moser_chain_check(geom.profile(), m, field, rep.u, 0.05, 0.12, 0.8,
                                       1.0, J);
  CsvTable csv({"j", "s_log", "K_j"});
  for (std::size_t j = 0; j < chain.s_log.size(); ++j)
    csv.add_row({static_cast<double>(j + 1), chain.s_log[j],
                 j < chain.K_j.size() ? chain.K_j[j] : 0.0});
  csv.write(opts.resolve() / "moser_chain.csv");
  ReportSummary summary;
  summary.params = {{"k", k}, {"sigma", sigma}, {"m", m}, {"J", J}};
  summary.metrics = {{"minimal_K", chain.minimal_K},
                     {"normalization", chain.normalization}};
  summary.flags = {{"finite", std::isfinite(chain.minimal_K)}};
  summary.write(opts.resolve() / "moser_chain.json");
  std::cout << "ok: moser chain written, minimal K = " << chain.minimal_K << "\n";
  return 0;
}

int dispatch(const std::vector<std::string>& args);

int run_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw io_error("cannot read config: " + path);
  nlohmann::json cfg = nlohmann::json::parse(f);
  std::vector<std::string> args;
  for (const auto& c : cfg.at("command")) args.push_back(c.get<std::string>());
  if (cfg.contains("flags")) {
    for (const auto& [key, val] : cfg.at("flags").items()) {
      args.push_back("--" + key);
      if (val.is_string())
        args.push_back(val.get<std::string>());
      else
        args.push_back(nlohmann::json(val).dump());
    }
  }
  return dispatch(args);
}

int dispatch(const std::vector<std::string>& args) {
  CLI::App app{"degenerate elliptic verification toolkit"};
  app.require_subcommand(1);
  CommonOpts opts;
  app.add_option("--out", opts.out_dir, "output directory (default: DEGEN_OUT or .)");

  // young
  auto* young = app.add_subcommand("young", "Young-function family checks");
  auto* ycheck = young->add_subcommand("check");
  double y_m = 2.0;
  std::string y_variant = "phi";
  ycheck->add_option("--m", y_m)->required();
  ycheck->add_option("--variant", y_variant)->check(CLI::IsMember({"phi", "phi_tilde"}));

  // iterates
  auto* iter = app.add_subcommand("iterates", "iterate ratio sweeps");
  auto* icheck = iter->add_subcommand("check");
  double i_m = 3.0;
  int i_jmax = 10;
  std::string i_betas = "1,-0.5,2,-2";
  icheck->add_option("--m", i_m);
  icheck->add_option("--jmax", i_jmax);
  icheck->add_option("--betas", i_betas);

  // recurrence
  auto* rec = app.add_subcommand("recurrence", "Moser recurrence traces");
  auto* rrun = rec->add_subcommand("run");
  double r_m = 3.0, r_K = std::exp(1.0), r_gamma = 4.0, r_theta = 2.0;
  int r_N = 10000;
  rrun->add_option("--m", r_m);
  rrun->add_option("--K", r_K);
  rrun->add_option("--gamma", r_gamma);
  rrun->add_option("--b1-theta", r_theta);
  rrun->add_option("--N", r_N);
  auto* rfail = rec->add_subcommand("failure");
  double f_m = 2.0, f_K = std::exp(2.0);
  int f_N = 10000;
  rfail->add_option("--m", f_m);
  rfail->add_option("--K", f_K);
  rfail->add_option("--N", f_N);

  // geometry
  auto* geo = app.add_subcommand("geometry", "degeneracy profile checks");
  auto* gcheck = geo->add_subcommand("check");
  int g_k = 1;
  double g_sigma = 0.5, g_m = 3.0, g_cm = 1.0;
  gcheck->add_option("--k", g_k)->required();
  gcheck->add_option("--sigma", g_sigma)->required();
  gcheck->add_option("--m", g_m);
  gcheck->add_option("--Cm", g_cm);

  // metric
  auto* met = app.add_subcommand("metric", "control-distance fields");
  auto* mbuild = met->add_subcommand("build");
  int m_k = 1, m_nx = 256, m_ny = 4096;
  double m_sigma = 0.5, m_X = 0.62, m_Y = 0.3;
  std::string m_radii;
  bool m_dump = false;
  mbuild->add_option("--k", m_k);
  mbuild->add_option("--sigma", m_sigma);
  mbuild->add_option("--X", m_X);
  mbuild->add_option("--Y", m_Y);
  mbuild->add_option("--nx", m_nx);
  mbuild->add_option("--ny", m_ny);
  mbuild->add_option("--radii", m_radii, "comma-separated ball radii");
  mbuild->add_flag("--dump-field", m_dump);
  auto* msan = met->add_subcommand("sanity");
  int ms_n = 512;
  msan->add_option("--n", ms_n);

  // cutoffs
  auto* cut = app.add_subcommand("cutoffs", "accumulating cutoff radii");
  double c_r = 0.3, c_nu = 0.7;
  int c_J = 20;
  cut->add_option("--r", c_r);
  cut->add_option("--nu", c_nu);
  cut->add_option("--J", c_J);

  // sobolev
  auto* sob = app.add_subcommand("sobolev", "Orlicz-Sobolev probes");
  auto* sprobe = sob->add_subcommand("probe");
  int s_k = 1, s_nx = 192, s_ny = 384;
  double s_sigma = 0.4, s_m = 3.0, s_cm = 1.0, s_rho = 0.12, s_X = 0.3, s_Y = 0.15;
  sprobe->add_option("--k", s_k);
  sprobe->add_option("--sigma", s_sigma);
  sprobe->add_option("--m", s_m);
  sprobe->add_option("--Cm", s_cm);
  sprobe->add_option("--rho", s_rho);
  sprobe->add_option("--X", s_X);
  sprobe->add_option("--Y", s_Y);
  sprobe->add_option("--nx", s_nx);
  sprobe->add_option("--ny", s_ny);
  auto* sfail = sob->add_subcommand("failure");
  int sf_k = 1;
  double sf_m = 3.0, sf_sigma = 1.5, sf_rho = 0.25;
  std::string sf_eps = "0.1,0.05,0.025,0.0125";
  sfail->add_option("--m", sf_m);
  sfail->add_option("--k", sf_k);
  sfail->add_option("--sigma", sf_sigma);
  sfail->add_option("--rho", sf_rho);
  sfail->add_option("--eps", sf_eps);
  auto* send = sob->add_subcommand("endpoint");
  int se_k = 2;
  double se_sigma = 1.0, se_m = 3.0, se_r0 = 0.02;
  std::string se_alphas = "0.001,1,1000";
  send->add_option("--k", se_k);
  send->add_option("--sigma", se_sigma);
  send->add_option("--m", se_m);
  send->add_option("--r0", se_r0);
  send->add_option("--alphas", se_alphas);

  // solver
  auto* sol = app.add_subcommand("solver", "finite-difference verification");
  auto* smms = sol->add_subcommand("mms");
  int mm_n1 = 48, mm_n2 = 96;
  smms->add_option("--n1", mm_n1);
  smms->add_option("--n2", mm_n2);
  auto* ssup = sol->add_subcommand("supnorm");
  double su_m = 3.0;
  int su_J = 25;
  ssup->add_option("--m", su_m);
  ssup->add_option("--J", su_J);
  auto* smos = sol->add_subcommand("moser");
  int mo_k = 1, mo_J = 8;
  double mo_sigma = 0.5, mo_m = 3.0;
  smos->add_option("--k", mo_k);
  smos->add_option("--sigma", mo_sigma);
  smos->add_option("--m", mo_m);
  smos->add_option("--J", mo_J);

  // config-file mode
  auto* runc = app.add_subcommand("run", "run a JSON experiment config");
  std::string cfg_path;
  runc->add_option("--config", cfg_path)->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  app.parse(reversed);

  if (ycheck->parsed()) return run_young_check(y_m, y_variant, opts);
  if (icheck->parsed()) return run_iterates_check(i_m, i_jmax, i_betas, opts);
  if (rrun->parsed()) return cli_recurrence(r_m, r_K, r_gamma, r_theta, r_N, opts);
  if (rfail->parsed()) return run_recurrence_failure(f_m, f_K, f_N, opts);
  if (gcheck->parsed()) return run_geometry_check(g_k, g_sigma, g_m, g_cm, opts);
  if (mbuild->parsed())
    return run_metric_build(m_k, m_sigma, m_X, m_Y, m_nx, m_ny, m_radii, m_dump, opts);
  if (msan->parsed()) return run_metric_sanity(ms_n, opts);
  if (cut->parsed()) return run_cutoffs(c_r, c_nu, c_J, opts);
  if (sprobe->parsed())
    return run_sobolev_probe(s_k, s_sigma, s_m, s_cm, s_rho, s_X, s_Y, s_nx, s_ny, opts);
  if (sfail->parsed()) return run_sobolev_failure(sf_m, sf_k, sf_sigma, sf_rho, sf_eps, opts);
  if (send->parsed()) return run_sobolev_endpoint(se_k, se_sigma, se_m, se_r0, se_alphas, opts);
  if (smms->parsed()) return run_solver_mms(mm_n1, mm_n2, opts);
  if (ssup->parsed()) return run_solver_supnorm(su_m, su_J, opts);
  if (smos->parsed()) return run_solver_moser(mo_k, mo_sigma, mo_m, mo_J, opts);
  if (runc->parsed()) return run_config(cfg_path);
  throw precondition_error("no subcommand selected");
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    return dispatch(args);
  } catch (const CLI::ParseError& e) {
    CLI::App dummy;
    return dummy.exit(e) ? 2 : 0;
  } catch (const degen::io_error& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 4;
  } catch (const degen::precondition_error& e) {
    std::cerr << "precondition violated: " << e.what() << "\n";
    return 2;
  } catch (const degen::domain_error& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
}
