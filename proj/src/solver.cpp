#include "degen/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace degen {

namespace {

double profile_f(const ProfileFn& profile, double x) {
  const double r = std::abs(x);
  if (r == 0.0) return 0.0;
  return profile(r).f;
}

double harmonic(double a, double b) { return 2.0 * a * b / (a + b); }

/// Face coefficient arrays: Fx(i,j) lives between cells (i-1,j) and (i,j) for
/// i = 1..nx-1; Fy(i,j) between (i,j-1) and (i,j) for j = 1..ny-1.
struct Faces {
  Grid2D g;
  std::vector<double> fx, fy;
  double& Fx(int i, int j) { return fx[static_cast<std::size_t>(j) * (g.nx + 1) + i]; }
  double Fx(int i, int j) const { return fx[static_cast<std::size_t>(j) * (g.nx + 1) + i]; }
  double& Fy(int i, int j) { return fy[static_cast<std::size_t>(j) * g.nx + i]; }
  double Fy(int i, int j) const { return fy[static_cast<std::size_t>(j) * g.nx + i]; }
};

Faces build_faces(const CoeffField& coeff) {
  const Grid2D& g = coeff.a1.grid;
  Faces f;
  f.g = g;
  f.fx.assign(static_cast<std::size_t>(g.nx + 1) * g.ny, 0.0);
  f.fy.assign(static_cast<std::size_t>(g.nx) * (g.ny + 1), 0.0);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 1; i < g.nx; ++i) {
      const double a = coeff.a1.at(i - 1, j), b = coeff.a1.at(i, j);
      if (!(a > 0.0 && b > 0.0))
        throw precondition_error("assemble: nonpositive a1 coefficient");
      f.Fx(i, j) = harmonic(a, b);
    }
  for (int j = 1; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const double a = coeff.a2.at(i, j - 1), b = coeff.a2.at(i, j);
      if (!(a > 0.0 && b > 0.0))
        throw precondition_error("assemble: nonpositive a2 coefficient");
      f.Fy(i, j) = harmonic(a, b);
    }
  return f;
}

// L u at interior cell (i, j) given full-grid values.
double apply_L(const Faces& f, const GridFunction& u, int i, int j) {
  const Grid2D& g = u.grid;
  const double ihx2 = 1.0 / (g.hx * g.hx), ihy2 = 1.0 / (g.hy * g.hy);
  return (f.Fx(i + 1, j) * (u.at(i, j) - u.at(i + 1, j)) +
          f.Fx(i, j) * (u.at(i, j) - u.at(i - 1, j))) * ihx2 +
         (f.Fy(i, j + 1) * (u.at(i, j) - u.at(i, j + 1)) +
          f.Fy(i, j) * (u.at(i, j) - u.at(i, j - 1))) * ihy2;
}

GridFunction rhs_vector(const ProfileFn& profile, const RhsPair& rhs) {
  GridFunction b = rhs.phi0;
  const GridFunction adj = grad_A_adjoint(profile, rhs.phi1x, rhs.phi1y);
  for (std::size_t c = 0; c < b.v.size(); ++c) b.v[c] += adj.v[c];
  return b;
}

}  // namespace

CoeffField CoeffField::from_profile(const ProfileFn& profile, const Grid2D& grid,
                                    double amp) {
  if (!(amp >= 0.0 && amp < 1.0))
    throw precondition_error("CoeffField: amp must be in [0, 1)");
  CoeffField c;
  c.a1 = GridFunction(grid);
  c.a2 = GridFunction(grid);
  c.lambda = 1.0 - amp;
  c.Lambda = 1.0 + amp;
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) {
      const double x = grid.x(i), y = grid.y(j);
      const double f = profile_f(profile, x);
      c.a1.at(i, j) = 1.0 + amp * std::sin(5.0 * x) * std::cos(3.0 * y);
      c.a2.at(i, j) = f * f * (1.0 + amp * std::cos(4.0 * x + 2.0 * y));
    }
  }
  return c;
}

RhsPair RhsPair::zero(const Grid2D& grid) {
  RhsPair r;
  r.phi0 = GridFunction(grid);
  r.phi1x = GridFunction(grid);
  r.phi1y = GridFunction(grid);
  r.phi_star = 0.0;
  return r;
}

SolveReport assemble_and_solve(const ProfileFn& profile, const CoeffField& coeff,
                               const RhsPair& rhs, const GridFunction& bc,
                               double tol) {
  if (!(tol > 1e-12 && tol < 1e-4))
    throw precondition_error("assemble_and_solve: tol outside (1e-12, 1e-4)");
  const Grid2D& g = coeff.a1.grid;
  if (!g.same_shape(bc.grid) || !g.same_shape(rhs.phi0.grid))
    throw precondition_error("assemble_and_solve: grid mismatch");
  const Faces faces = build_faces(coeff);
  const GridFunction b_full = rhs_vector(profile, rhs);

  const int ni = g.nx - 2, nj = g.ny - 2;
  if (ni < 1 || nj < 1) throw precondition_error("assemble_and_solve: grid too small");
  const std::size_t n = static_cast<std::size_t>(ni) * nj;
  auto dof = [&](int i, int j) {
    return static_cast<std::size_t>(j - 1) * ni + (i - 1);
  };

  // Right hand side with Dirichlet ring contributions folded in.
  const double ihx2 = 1.0 / (g.hx * g.hx), ihy2 = 1.0 / (g.hy * g.hy);
  std::vector<double> b(n), diag(n);
  for (int j = 1; j <= nj; ++j) {
    for (int i = 1; i <= ni; ++i) {
      double rhs_c = b_full.at(i, j);
      if (i == 1) rhs_c += faces.Fx(i, j) * bc.at(0, j) * ihx2;
      if (i == ni) rhs_c += faces.Fx(i + 1, j) * bc.at(g.nx - 1, j) * ihx2;
      if (j == 1) rhs_c += faces.Fy(i, j) * bc.at(i, 0) * ihy2;
      if (j == nj) rhs_c += faces.Fy(i, j + 1) * bc.at(i, g.ny - 1) * ihy2;
      b[dof(i, j)] = rhs_c;
      diag[dof(i, j)] = (faces.Fx(i, j) + faces.Fx(i + 1, j)) * ihx2 +
                        (faces.Fy(i, j) + faces.Fy(i, j + 1)) * ihy2;
    }
  }

  auto apply = [&](const std::vector<double>& x, std::vector<double>& out) {
    for (int j = 1; j <= nj; ++j) {
      for (int i = 1; i <= ni; ++i) {
        double v = diag[dof(i, j)] * x[dof(i, j)];
        if (i > 1) v -= faces.Fx(i, j) * ihx2 * x[dof(i - 1, j)];
        if (i < ni) v -= faces.Fx(i + 1, j) * ihx2 * x[dof(i + 1, j)];
        if (j > 1) v -= faces.Fy(i, j) * ihy2 * x[dof(i, j - 1)];
        if (j < nj) v -= faces.Fy(i, j + 1) * ihy2 * x[dof(i, j + 1)];
        out[dof(i, j)] = v;
      }
    }
  };

  // Preconditioned conjugate gradients (Jacobi).
  std::vector<double> x(n, 0.0), r(b), z(n), p(n), Ap(n);
  const double b_norm = std::sqrt(std::inner_product(b.begin(), b.end(), b.begin(), 0.0));
  SolveReport rep;
  rep.u = bc;
  if (b_norm == 0.0) {
    // homogeneous problem: interior solve still needed if bc is nonzero
  }
  for (std::size_t k = 0; k < n; ++k) z[k] = r[k] / diag[k];
  p = z;
  double rz = std::inner_product(r.begin(), r.end(), z.begin(), 0.0);
  const int max_iter = static_cast<int>(4 * std::sqrt(static_cast<double>(n))) + 400;
  int it = 0;
  const double target = tol * (b_norm > 0.0 ? b_norm : 1.0);
  for (; it < max_iter; ++it) {
    const double r_norm = std::sqrt(std::inner_product(r.begin(), r.end(), r.begin(), 0.0));
    if (r_norm <= target) break;
    apply(p, Ap);
    const double pAp = std::inner_product(p.begin(), p.end(), Ap.begin(), 0.0);
    if (!(pAp > 0.0)) throw numeric_error("assemble_and_solve: operator not SPD");
    const double alpha = rz / pAp;
    for (std::size_t k = 0; k < n; ++k) {
      x[k] += alpha * p[k];
      r[k] -= alpha * Ap[k];
    }
    for (std::size_t k = 0; k < n; ++k) z[k] = r[k] / diag[k];
    const double rz_new = std::inner_product(r.begin(), r.end(), z.begin(), 0.0);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t k = 0; k < n; ++k) p[k] = z[k] + beta * p[k];
  }
  const double r_norm = std::sqrt(std::inner_product(r.begin(), r.end(), r.begin(), 0.0));
  if (r_norm > target * 10.0)
    throw numeric_error("assemble_and_solve: CG did not converge");

  for (int j = 1; j <= nj; ++j)
    for (int i = 1; i <= ni; ++i) rep.u.at(i, j) = x[dof(i, j)];
  rep.residual = b_norm > 0.0 ? r_norm / b_norm : r_norm;
  rep.iterations = it;
  return rep;
}

GridFunction weak_residual(const ProfileFn& profile, const CoeffField& coeff,
                           const RhsPair& rhs, const GridFunction& u) {
  const Grid2D& g = u.grid;
  const Faces faces = build_faces(coeff);
  const GridFunction b_full = rhs_vector(profile, rhs);
  GridFunction res(g);
  for (int j = 1; j + 1 < g.ny; ++j)
    for (int i = 1; i + 1 < g.nx; ++i)
      res.at(i, j) = b_full.at(i, j) - apply_L(faces, u, i, j);
  return res;
}

Certificate certify(const ProfileFn& profile, const CoeffField& coeff,
                    const RhsPair& rhs, const GridFunction& u, double tol) {
  const GridFunction res = weak_residual(profile, coeff, rhs, u);
  const Grid2D& g = u.grid;
  Certificate cert;
  cert.min_residual = std::numeric_limits<double>::infinity();
  cert.max_residual = -std::numeric_limits<double>::infinity();
  for (int j = 1; j + 1 < g.ny; ++j)
    for (int i = 1; i + 1 < g.nx; ++i) {
      cert.min_residual = std::min(cert.min_residual, res.at(i, j));
      cert.max_residual = std::max(cert.max_residual, res.at(i, j));
    }
  cert.subsolution = cert.min_residual >= -tol;
  cert.supersolution = cert.max_residual <= tol;
  return cert;
}

double admissible_norm(double m, const RhsPair& rhs, double C_omega) {
  const Grid2D& g = rhs.phi0.grid;
  double sup1 = 0.0;
  bool phi0_zero = true;
  for (std::size_t c = 0; c < rhs.phi0.v.size(); ++c) {
    sup1 = std::max(sup1, std::hypot(rhs.phi1x.v[c], rhs.phi1y.v[c]));
    if (rhs.phi0.v[c] != 0.0) phi0_zero = false;
  }
  if (phi0_zero) return sup1;
  PhiM phi(m);
  ConjugateFn conj = ConjugateFn::of(phi);
  const DiscreteMeasure lebesgue =
      DiscreteMeasure::from_weights(std::vector<double>(g.size(), g.cell_area()));
  const double lux = luxemburg_norm(rhs.phi0.v, lebesgue, conj);
  return 2.0 * C_omega * lux + sup1;
}

double caccioppoli_constant(const ProfileFn& profile, const CoeffField& coeff,
                            const RhsPair& rhs, const GridFunction& u,
                            const GridFunction& psi, const IterSpec& h_spec,
                            CaccioppoliMode mode) {
  const Certificate cert = certify(profile, coeff, rhs, u);
  if (mode == CaccioppoliMode::sub_plus && !cert.subsolution)
    throw precondition_error("caccioppoli_constant: u is not a certified subsolution");
  if (mode != CaccioppoliMode::sub_plus && !cert.supersolution)
    throw precondition_error("caccioppoli_constant: u is not a certified supersolution");

  const Grid2D& g = u.grid;
  double phi_star = rhs.phi_star;
  if (phi_star <= 0.0) {
    if (h_spec.beta < 0.0)
      throw precondition_error("caccioppoli_constant: beta < 0 requires phi* > 0");
    phi_star = 1e-12;  // epsilon regularization of the zero-rhs case
  }

  GridFunction v(g);
  for (std::size_t c = 0; c < u.v.size(); ++c) {
    double part;
    switch (mode) {
      case CaccioppoliMode::sub_plus:
        part = std::max(u.v[c], 0.0);
        break;
      case CaccioppoliMode::super_minus:
        part = std::max(-u.v[c], 0.0);
        break;
      case CaccioppoliMode::super_positive:
        if (u.v[c] < -1e-12)
          throw precondition_error(
              "caccioppoli_constant: super_positive mode requires u >= 0");
        part = std::max(u.v[c], 0.0);
        break;
    }
    v.v[c] = part + phi_star;
  }
  const auto [vx, vy] = grad_A(profile, v);
  const auto [px, py] = grad_A(profile, psi);

  LogVal lhs = LogVal::zero(), rhs_acc = LogVal::zero();
  for (int j = 1; j + 1 < g.ny; ++j) {
    for (int i = 1; i + 1 < g.nx; ++i) {
      const std::size_t c = g.idx(i, j);
      const double ps = psi.v[c];
      const double gradv = std::hypot(vx.v[c], vy.v[c]);
      const LogVal val = LogVal::from_value(v.v[c]);
      const LogVal h = h_eval(h_spec, val);
      // |h'(v)| = ratio1 * h(v) / v
      const double ratio1 = h_ratios(h_spec, val).ratio1;
      if (ps != 0.0 && gradv > 0.0) {
        const LogVal hp = h * LogVal::from_value(ratio1) / val;
        lhs += (hp * LogVal::from_value(ps * gradv)).pow(2.0);
      }
      const double gradpsi = std::hypot(px.v[c], py.v[c]);
      rhs_acc += h.pow(2.0) * LogVal::from_value(gradpsi * gradpsi + ps * ps);
    }
  }
  if (rhs_acc.is_zero()) throw precondition_error("caccioppoli_constant: psi == 0");
  if (lhs.is_zero()) return 0.0;
  return std::exp(lhs.log() - rhs_acc.log());
}

namespace {

double doubling_nu0(const MetricField& field, double r) {
  std::vector<double> sorted(field.dist);
  std::sort(sorted.begin(), sorted.end());
  const auto vol_count = [&](double rad) {
    return static_cast<double>(
        std::lower_bound(sorted.begin(), sorted.end(), rad) - sorted.begin());
  };
  const double target = 0.5 * vol_count(r);
  if (target < 8.0) throw resolution_error("ball too small to halve");
  double lo = 0.0, hi = r;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (vol_count(r - mid) > target)
      lo = mid;
    else
      hi = mid;
  }
  return 1.0 - 0.5 * (lo + hi) / r;
}

LocalBoundDiag power_bound_check(const ProfileFn& profile, double m, double C_m,
                                 const MetricField& field, const GridFunction& u,
                                 double phi_star, double r, double nu, double beta,
                                 bool negative_power) {
  if (!(m > 2.0)) throw precondition_error("bound check: requires m > 2");
  const Grid2D& g = field.grid;
  if (!g.same_shape(u.grid)) throw precondition_error("bound check: grid mismatch");

  LocalBoundDiag diag;
  diag.nu0 = doubling_nu0(field, r);
  if (!(nu >= diag.nu0 && nu < 1.0))
    throw precondition_error("bound check: nu below the doubling threshold nu0");

  const double vol = ball_volume(field, r);
  double sup_log = -std::numeric_limits<double>::infinity();
  LogVal l2 = LogVal::zero();
  for (std::size_t c = 0; c < u.v.size(); ++c) {
    const double d = field.dist[c];
    if (d >= r) continue;
    double base;
    if (negative_power) {
      if (u.v[c] < -1e-12)
        throw precondition_error("negative_power_check: u must be nonnegative");
      base = std::max(u.v[c], 0.0) + phi_star;
    } else {
      base = std::max(u.v[c], 0.0) + phi_star;
    }
    if (!(base > 0.0))
      throw precondition_error("bound check: u^{+/-} + phi* must stay positive");
    const double lb = beta * std::log(base);
    if (d < nu * r) sup_log = std::max(sup_log, lb);
    l2 += LogVal::from_log(2.0 * lb) * LogVal::from_value(g.cell_area() / vol);
  }
  if (std::isinf(sup_log)) throw resolution_error("bound check: inner ball empty");

  const double l2_log = 0.5 * l2.log();
  diag.E = std::exp(sup_log - l2_log);
  const double phi_r_log = log_superradius({m, C_m, profile}, r);
  const double x = phi_r_log - std::log((1.0 - nu) * r);
  const double beta_term = negative_power ? std::abs(beta) + 1.0 : beta - 1.0;
  diag.comparator_log = std::pow(beta_term, m) + std::pow(x, m);
  diag.implied_constant = (sup_log - l2_log) / diag.comparator_log;
  return diag;
}

}  // namespace

LocalBoundDiag local_bound_check(const ProfileFn& profile, double m, double C_m,
                                 const MetricField& field, const GridFunction& u,
                                 double phi_star, double r, double nu, double beta) {
  if (!(beta >= 1.0)) throw precondition_error("local_bound_check: requires beta >= 1");
  return power_bound_check(profile, m, C_m, field, u, phi_star, r, nu, beta, false);
}

LocalBoundDiag negative_power_check(const ProfileFn& profile, double m, double C_m,
                                    const MetricField& field, const GridFunction& u,
                                    double phi_star, double r, double nu, double beta) {
  if (!(beta < 0.0)) throw precondition_error("negative_power_check: requires beta < 0");
  if (!(phi_star > 0.0))
    throw precondition_error("negative_power_check: requires phi* > 0 (epsilon-regularize)");
  return power_bound_check(profile, m, C_m, field, u, phi_star, r, nu, beta, true);
}

MaxPrincipleDiag max_principle_check(const GridFunction& u, double phi_star) {
  const Grid2D& g = u.grid;
  MaxPrincipleDiag diag;
  diag.interior_max = -std::numeric_limits<double>::infinity();
  diag.boundary_max = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const bool ring = i == 0 || i == g.nx - 1 || j == 0 || j == g.ny - 1;
      (ring ? diag.boundary_max : diag.interior_max) =
          std::max(ring ? diag.boundary_max : diag.interior_max, u.at(i, j));
    }
  }
  const double excess = diag.interior_max - diag.boundary_max;
  diag.exact = excess <= 1e-10 * std::max(1.0, std::abs(diag.boundary_max));
  diag.implied_constant = phi_star > 0.0 ? std::max(excess, 0.0) / phi_star : 0.0;
  return diag;
}

MoserChain moser_chain_check(const ProfileFn& profile, double m,
                             const MetricField& field, const GridFunction& u,
                             double phi_star, double r, double nu, double beta, int J) {
  if (!(m > 2.0)) throw precondition_error("moser_chain_check: requires m > 2");
  if (!(beta >= 1.0)) throw precondition_error("moser_chain_check: requires beta >= 1");
  const Grid2D& g = field.grid;
  if (!g.same_shape(u.grid)) throw precondition_error("moser_chain_check: grid mismatch");

  // Only the chain radii are needed here, so under-resolved cutoff ramps are
  // not an error: consecutive balls may share cells at grid scale.
  const CutoffSequence seq = cutoff_radii(r, nu, J);
  const double eps = phi_star > 0.0 ? phi_star : 1e-10;

  // normalization (utilde): a = e^{2^{m-1}/beta} / ||u^+ + phi*||_{L^{2 beta}(dmu_r)}
  const double vol_r = ball_volume(field, r);
  LogVal norm_acc = LogVal::zero();
  for (std::size_t c = 0; c < u.v.size(); ++c) {
    if (field.dist[c] >= r) continue;
    const double base = std::max(u.v[c], 0.0) + eps;
    norm_acc += LogVal::from_log(2.0 * beta * std::log(base)) *
                LogVal::from_value(g.cell_area() / vol_r);
  }
  const double norm_log = norm_acc.log() / (2.0 * beta);
  const double a_log = std::pow(2.0, m - 1.0) / beta - norm_log;

  MoserChain chain;
  chain.normalization = std::exp(a_log);
  PhiM phi(m);
  for (int j = 1; j <= J; ++j) {
    const double rj = seq.radii[static_cast<std::size_t>(j) - 1];
    const double vol_j = ball_volume(field, rj);
    if (vol_j <= 0.0) throw resolution_error("moser_chain_check: empty chain ball");
    LogVal s = LogVal::zero();
    const IterSpec spec(m, j - 1, 1.0, YoungVariant::phi);
    for (std::size_t c = 0; c < u.v.size(); ++c) {
      if (field.dist[c] >= rj) continue;
      const double base = std::max(u.v[c], 0.0) + eps;
      const double v2b_log = 2.0 * beta * (a_log + std::log(base));
      s += phi_iter(spec, LogVal::from_log(v2b_log)) *
           LogVal::from_value(g.cell_area() / vol_j);
    }
    chain.s_log.push_back(s.log());
  }
  for (int j = 1; j < J; ++j) {
    const double k_log =
        phi.inverse(LogVal::from_log(chain.s_log[static_cast<std::size_t>(j)])).log() -
        (m + 1.0) * std::log(static_cast<double>(j)) -
        chain.s_log[static_cast<std::size_t>(j) - 1];
    chain.K_j.push_back(std::exp(k_log));
  }
  chain.minimal_K = chain.K_j.empty()
                        ? 1.0
                        : *std::max_element(chain.K_j.begin(), chain.K_j.end());
  return chain;
}

std::vector<double> supnorm_recovery(const GridFunction& f, const MetricField& field,
                                     std::span<const double> radii, double m) {
  const Grid2D& g = field.grid;
  if (!g.same_shape(f.grid)) throw precondition_error("supnorm_recovery: grid mismatch");
  for (std::size_t j = 1; j < radii.size(); ++j)
    if (!(radii[j] < radii[j - 1]))
      throw precondition_error("supnorm_recovery: radii must decrease (nested sets)");

  std::vector<double> out;
  PhiM phi(m);
  for (std::size_t j = 1; j <= radii.size(); ++j) {
    const IterSpec spec(m, static_cast<int>(j), 1.0, YoungVariant::phi);
    LogVal acc = LogVal::zero();
    for (std::size_t c = 0; c < f.v.size(); ++c) {
      if (field.dist[c] >= radii[j - 1]) continue;
      const double av = std::abs(f.v[c]);
      if (av == 0.0) continue;
      acc += phi_iter(spec, LogVal::from_value(av)) * LogVal::from_value(g.cell_area());
    }
    out.push_back(acc.is_zero() ? 0.0 : phi_iter_inv(spec, acc).value());
  }
  return out;
}

std::vector<double> nested_radii(double rho1, double rho_inf, int J) {
  if (!(rho1 > rho_inf && rho_inf > 0.0 && J >= 1))
    throw precondition_error("nested_radii: bad parameters");
  std::vector<double> out;
  for (int j = 1; j <= J; ++j)
    out.push_back(rho_inf + (rho1 - rho_inf) / static_cast<double>(j));
  return out;
}

}  // namespace degen
