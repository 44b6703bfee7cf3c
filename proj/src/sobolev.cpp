#include "degen/sobolev.hpp"

#include <algorithm>
#include <cmath>

namespace degen {

namespace {

double profile_f(const ProfileFn& profile, double x) {
  const double r = std::abs(x);
  if (r == 0.0) return 0.0;
  return profile(r).f;
}

}  // namespace

SobolevProbe sobolev_ratio(const ProfileFn& profile, double m, double C_m,
                           const MetricField& field, double rho,
                           const GridFunction& w) {
  const Grid2D& g = field.grid;
  if (!g.same_shape(w.grid)) throw precondition_error("sobolev_ratio: grid mismatch");
  if (2.0 * rho / g.hx < 64.0)
    throw resolution_error("sobolev_ratio: ball not resolved by 64 cells across");

  const double vol = ball_volume(field, rho);
  if (vol <= 0.0) throw resolution_error("sobolev_ratio: empty ball");

  // support check: w vanishes outside B(0, rho)
  for (std::size_t c = 0; c < w.v.size(); ++c)
    if (w.v[c] != 0.0 && field.dist[c] >= rho)
      throw precondition_error("sobolev_ratio: w not supported in B(0, rho)");

  PhiM phi(m);
  const double wcell = g.cell_area() / vol;
  LogVal acc = LogVal::zero();
  const auto [gx, gy] = grad_A(profile, w);
  double rhs = 0.0;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const std::size_t c = g.idx(i, j);
      if (field.dist[c] >= rho) continue;
      const double av = std::abs(w.v[c]);
      if (av > 0.0)
        acc += phi.eval(LogVal::from_value(av)) * LogVal::from_value(wcell);
      rhs += std::hypot(gx.v[c], gy.v[c]) * wcell;
    }
  }

  SobolevProbe probe;
  probe.m = m;
  probe.C_m = C_m;
  probe.rho = rho;
  probe.rhs = rhs;
  if (acc.is_zero()) {
    probe.zero = true;
    probe.lhs_log = -std::numeric_limits<double>::infinity();
    probe.ratio_log = -std::numeric_limits<double>::infinity();
    return probe;
  }
  probe.lhs_log = phi.inverse(acc).log();
  const double log_phi_rho = log_superradius({m, C_m, profile}, rho);
  probe.ratio_log = probe.lhs_log - log_phi_rho - std::log(rhs);
  return probe;
}

GridFunction test_family(const ProfileFn& profile, const MetricField& field,
                         double rho, TestStyle style, double eps) {
  const Grid2D& g = field.grid;
  GridFunction w(g);
  w.compact_support = true;
  w.support_radius = rho;

  switch (style) {
    case TestStyle::metric_radial_bump: {
      for (std::size_t c = 0; c < w.v.size(); ++c) {
        const double s = field.dist[c] / rho;
        if (s < 1.0) {
          const double q = 1.0 - s * s;
          w.v[c] = q * q;
        }
      }
      return w;
    }
    case TestStyle::tensor_bump: {
      // product bump on a rectangle that certainly sits inside the CC ball:
      // |x| <= a = rho/4, |y| <= b = 0.45 f(a) rho
      const double a = rho / 4.0;
      const double b = 0.45 * profile_f(profile, a) * rho;
      for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
          const double sx = g.x(i) / a, sy = g.y(j) / b;
          if (std::abs(sx) < 1.0 && std::abs(sy) < 1.0) {
            const double qx = 1.0 - sx * sx, qy = 1.0 - sy * sy;
            w.at(i, j) = qx * qx * qy * qy;
          }
        }
      }
      // clip anything the rectangle estimate let slip outside the ball
      for (std::size_t c = 0; c < w.v.size(); ++c)
        if (field.dist[c] >= rho) w.v[c] = 0.0;
      return w;
    }
    case TestStyle::extremal: {
      if (!(eps >= 2.0 * g.hx))
        throw resolution_error("test_family: extremal cap eps below 2 hx");
      const double cap_F = profile(eps).F;
      if (cap_F > 690.0)
        throw precondition_error("test_family: extremal cap overflows double range");
      for (std::size_t c = 0; c < w.v.size(); ++c) {
        const double d = field.dist[c];
        if (d >= rho) continue;
        const double eta = d <= rho / 2.0 ? 1.0 : 2.0 * (1.0 - d / rho);
        const double Fd = d < eps ? cap_F : std::min(profile(d).F, cap_F);
        w.v[c] = eta * std::exp(Fd);
      }
      return w;
    }
  }
  throw precondition_error("test_family: unknown style");
}

double family_sup_ratio(const ProfileFn& profile, double m, double C_m,
                        const MetricField& field, double rho) {
  double sup = 0.0;
  auto consider = [&](const GridFunction& w) {
    const auto p = sobolev_ratio(profile, m, C_m, field, rho, w);
    if (!p.zero) sup = std::max(sup, p.ratio());
  };
  consider(test_family(profile, field, rho, TestStyle::metric_radial_bump));
  consider(test_family(profile, field, rho, TestStyle::tensor_bump));
  for (double eps_frac : {0.25, 0.1, 0.05}) {
    const double eps = eps_frac * rho;
    if (eps < 2.0 * field.grid.hx) continue;
    consider(test_family(profile, field, rho, TestStyle::extremal, eps));
  }
  return sup;
}

SobolevProbe extremal_probe_reduced(const ProfileFn& profile, double m, double C_m,
                                    double rho, double eps, int n_nodes) {
  if (!(eps > 0.0 && eps < rho / 2.0))
    throw precondition_error("extremal_probe_reduced: eps in (0, rho/2)");
  PhiM phi(m);
  const double cap_F = profile(eps).F;

  // The test function is radial in the control distance, w = eta(t) e^{F-cap},
  // so |grad_A w| <= |w'(t)| and the level-set measure carries the f e^{F}
  // cancellation.  Slice measure (d/dt of the ball-volume comparator):
  // P(t) ~ f(t)/|F'(t)|, in log form.
  auto logP = [&](double t) {
    const FDerivs d = profile(t);
    return -d.F - std::log(std::abs(d.dF));
  };
  auto eta = [&](double t) { return t <= rho / 2.0 ? 1.0 : 2.0 * (1.0 - t / rho); };
  auto logw = [&](double t) {
    const double e = eta(t);
    if (e <= 0.0) return -std::numeric_limits<double>::infinity();
    return std::log(e) + std::min(t <= eps ? cap_F : profile(t).F, cap_F);
  };
  // |w'(t)|: zero on the cap plateau, (eta |F'| + |eta'|) e^{F} outside
  auto logdw = [&](double t) {
    const double e = eta(t);
    const double deta = t <= rho / 2.0 ? 0.0 : 2.0 / rho;
    if (t <= eps) {
      if (deta == 0.0) return -std::numeric_limits<double>::infinity();
      return std::log(deta) + cap_F;
    }
    const FDerivs d = profile(t);
    return std::log(e * std::abs(d.dF) + deta) + d.F;
  };

  const double lo = std::log(rho) - 40.0, hi = std::log(rho);
  const double step = (hi - lo) / n_nodes;
  LogVal vol = LogVal::zero(), num = LogVal::zero(), grad = LogVal::zero();
  for (int i = 0; i < n_nodes; ++i) {
    const double lt = lo + (i + 0.5) * step;
    const double t = std::exp(lt);
    // dt = t dln t
    const LogVal meas = LogVal::from_log(logP(t) + lt + std::log(step));
    vol += meas;
    const double lw = logw(t);
    if (std::isfinite(lw)) num += phi.eval(LogVal::from_log(lw)) * meas;
    const double ldw = logdw(t);
    if (std::isfinite(ldw)) grad += LogVal::from_log(ldw) * meas;
  }
  if (vol.is_zero()) throw numeric_error("extremal_probe_reduced: empty ball");

  SobolevProbe probe;
  probe.m = m;
  probe.C_m = C_m;
  probe.rho = rho;
  if (num.is_zero()) {
    probe.zero = true;
    probe.lhs_log = -std::numeric_limits<double>::infinity();
    probe.ratio_log = -std::numeric_limits<double>::infinity();
    return probe;
  }
  probe.lhs_log = phi.inverse(num / vol).log();
  probe.rhs = (grad / vol).value();
  const double log_phi_rho = log_superradius({m, C_m, profile}, rho);
  probe.ratio_log = probe.lhs_log - log_phi_rho - (grad / vol).log();
  return probe;
}

FailureSweep failure_probe(const Geometry& geom, double m, double C_m, double rho,
                           std::vector<double> eps_list) {
  if (geom.k() != 1 || !(geom.sigma() > 1.0 / (m - 1.0)))
    throw precondition_error("failure_probe: requires k = 1 and sigma > 1/(m-1)");
  for (std::size_t i = 1; i < eps_list.size(); ++i)
    if (!(eps_list[i] < eps_list[i - 1]))
      throw precondition_error("failure_probe: eps list must decrease");

  FailureSweep sweep;
  sweep.eps = std::move(eps_list);
  sweep.divergence_exponent = (geom.sigma() + 1.0) * (1.0 - 1.0 / m);
  const ProfileFn profile = geom.profile();
  for (double eps : sweep.eps)
    sweep.probes.push_back(extremal_probe_reduced(profile, m, C_m, rho, eps));
  return sweep;
}

double kernel_log(const ProfileFn& profile, double x1, double y1) {
  if (!(y1 > x1 && x1 > 0.0))
    throw precondition_error("kernel_eval: requires y1 > x1 > 0");
  const double r = y1 - x1;
  const FDerivs at_x = profile(x1);
  if (r < 1.0 / std::abs(at_x.dF)) return -std::log(r) + at_x.F;
  const FDerivs at_y = profile(y1);
  return std::log(std::abs(at_y.dF)) + at_y.F;
}

double kernel_eval(const ProfileFn& profile, double x1, double y1) {
  return std::exp(kernel_log(profile, x1, y1));
}

EndpointReport endpoint_check(const ProfileFn& profile, double m, double C_m,
                              double r0, std::span<const double> alpha_list,
                              int n_y, int n_r) {
  PhiM phi(m);
  const double log_B = std::log(ball_volume_estimate(profile, r0));
  const double log_phi_r0 = log_superradius({m, C_m, profile}, r0);

  EndpointReport rep;
  for (double alpha : alpha_list) {
    if (!(alpha > 0.0)) throw precondition_error("endpoint_check: alpha > 0");
    double best = 0.0, best_y = 0.0;
    for (int iy = 1; iy <= n_y; ++iy) {
      const double y1 = r0 * iy / n_y;
      // I = int_0^{y1} 2 h_r Phi(K_r |B| alpha) dr / |B| on a log-spaced grid
      LogVal acc = LogVal::zero();
      const double lo = std::log(r0 * 1e-8), hi = std::log(y1);
      const double step = (hi - lo) / n_r;
      for (int ir = 0; ir < n_r; ++ir) {
        const double lr = lo + (ir + 0.5) * step;
        const double r = std::exp(lr);
        const double lk = kernel_log(profile, y1 - r, y1);
        const LogVal arg = LogVal::from_log(lk + log_B + std::log(alpha));
        // dr = r d(ln r); h_r = 1/K_r
        const LogVal term =
            phi.eval(arg) * LogVal::from_log(std::log(2.0) - lk + lr - log_B);
        acc += term * LogVal::from_value(step);
      }
      if (acc.is_zero()) continue;
      const double lhs_log = phi.inverse(acc).log();
      const double ratio = std::exp(lhs_log - std::log(alpha) - log_phi_r0);
      if (ratio > best) {
        best = ratio;
        best_y = y1;
      }
    }
    rep.rows.push_back({alpha, best, best_y});
    rep.max_ratio = std::max(rep.max_ratio, best);
  }
  return rep;
}

double global_sobolev_constant(const ProfileFn& profile, double m,
                               const MetricField& field) {
  const Grid2D& g = field.grid;
  PhiM phi(m);
  const DiscreteMeasure lebesgue =
      DiscreteMeasure::from_weights(std::vector<double>(g.size(), g.cell_area()));
  const double r_cap = 0.9 * std::min({g.half_extent_x(), 0.5 * (g.y1 - g.y0)});

  double sup = 0.0;
  auto consider = [&](const GridFunction& w) {
    const auto [gx, gy] = grad_A(profile, w);
    double grad_l1 = 0.0;
    for (std::size_t c = 0; c < w.v.size(); ++c)
      grad_l1 += std::hypot(gx.v[c], gy.v[c]) * g.cell_area();
    if (grad_l1 <= 0.0) return;
    const double lux = luxemburg_norm(w.v, lebesgue, phi);
    sup = std::max(sup, lux / grad_l1);
  };
  for (double frac : {0.25, 0.5, 0.75, 1.0})
    consider(test_family(profile, field, frac * r_cap, TestStyle::metric_radial_bump));
  consider(test_family(profile, field, r_cap, TestStyle::tensor_bump));
  return sup;
}

}  // namespace degen
