#include "degen/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace degen {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double profile_f(const ProfileFn& profile, double x) {
  const double r = std::abs(x);
  if (r == 0.0) return 0.0;
  return profile(r).f;
}

struct MoveTables {
  // Per-column edge costs; entries may be +inf (edge omitted).
  std::vector<double> V;            // (0,+-1)
  std::vector<double> Dp, Dm;       // (+1,+-1), (-1,+-1)
  std::vector<double> K21p, K21m;   // (+2,+-1), (-2,+-1)
  std::vector<double> K12p, K12m;   // (+1,+-2), (-1,+-2)
  double H = 0.0;                   // (+-1, 0)
};

MoveTables build_tables(const ProfileFn& profile, const Grid2D& g) {
  MoveTables t;
  const int nx = g.nx;
  std::vector<double> fc(nx), fb(nx + 1);
  for (int i = 0; i < nx; ++i) fc[i] = profile_f(profile, g.x(i));
  for (int b = 0; b <= nx; ++b) fb[b] = profile_f(profile, g.x0 + b * g.hx);

  auto vstep = [&](double f, double dy_cells) {
    return f > 0.0 ? dy_cells * g.hy / f : kInf;
  };
  t.H = g.hx;
  t.V.resize(nx);
  t.Dp.resize(nx);
  t.Dm.resize(nx);
  t.K21p.resize(nx);
  t.K21m.resize(nx);
  t.K12p.resize(nx);
  t.K12m.resize(nx);
  for (int i = 0; i < nx; ++i) {
    t.V[i] = vstep(fc[i], 1.0);
    t.Dp[i] = std::hypot(g.hx, vstep(fb[i + 1], 1.0));
    t.Dm[i] = std::hypot(g.hx, vstep(fb[i], 1.0));
    t.K12p[i] = std::hypot(g.hx, vstep(fb[i + 1], 2.0));
    t.K12m[i] = std::hypot(g.hx, vstep(fb[i], 2.0));
    t.K21p[i] = i + 1 < nx ? std::hypot(2.0 * g.hx, vstep(fc[i + 1], 1.0)) : kInf;
    t.K21m[i] = i - 1 >= 0 ? std::hypot(2.0 * g.hx, vstep(fc[i - 1], 1.0)) : kInf;
  }
  return t;
}

}  // namespace

MetricField cc_distance_field(const ProfileFn& profile, const Grid2D& grid,
                              double cx, double cy) {
  MetricField field;
  field.grid = grid;
  field.cx = cx;
  field.cy = cy;
  field.dist.assign(grid.size(), kInf);

  const MoveTables t = build_tables(profile, grid);
  using Entry = std::pair<double, std::uint32_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> pq;

  auto push = [&](std::size_t u, double d) {
    if (d < field.dist[u]) {
      field.dist[u] = d;
      pq.emplace(d, static_cast<std::uint32_t>(u));
    }
  };

  // Seeding: exact cell center gets a zero source; otherwise seed the two
  // rows adjacent to cy with two-leg (horizontal, then vertical) path costs.
  bool snapped = false;
  {
    const double fi = (cx - grid.x0) / grid.hx - 0.5;
    const double fj = (cy - grid.y0) / grid.hy - 0.5;
    const int i0 = static_cast<int>(std::lround(fi));
    const int j0 = static_cast<int>(std::lround(fj));
    if (i0 >= 0 && i0 < grid.nx && j0 >= 0 && j0 < grid.ny &&
        std::abs(grid.x(i0) - cx) < 1e-12 * grid.hx &&
        std::abs(grid.y(j0) - cy) < 1e-12 * grid.hy) {
      push(grid.idx(i0, j0), 0.0);
      snapped = true;
    }
  }
  if (!snapped) {
    // Upper-bound path cost from the center to a cell: the better of the
    // two-leg route (horizontal at cy, then vertical at the target column)
    // and a straight segment priced with the worst f along its x-span.
    auto seed_cost = [&](int i, int jj) {
      const double xi = grid.x(i);
      const double dx = std::abs(xi - cx);
      const double dy = std::abs(grid.y(jj) - cy);
      if (dy == 0.0) return dx;
      const double f_col = profile_f(profile, xi);
      double cost = f_col > 0.0 ? dx + dy / f_col : kInf;
      const double lo_x = std::min(cx, xi), hi_x = std::max(cx, xi);
      const double worst_x =
          lo_x <= 0.0 && hi_x >= 0.0 ? 0.0 : std::min(std::abs(lo_x), std::abs(hi_x));
      const double f_seg = profile_f(profile, worst_x);
      if (f_seg > 0.0) cost = std::min(cost, std::hypot(dx, dy / f_seg));
      return cost;
    };
    const int jlo = static_cast<int>(std::floor((cy - grid.y0) / grid.hy - 0.5));
    for (int jj : {jlo, jlo + 1}) {
      if (jj < 0 || jj >= grid.ny) continue;
      for (int i = 0; i < grid.nx; ++i) {
        const double cost = seed_cost(i, jj);
        if (std::isfinite(cost)) push(grid.idx(i, jj), cost);
      }
    }
    // a small disc of direct seeds tightens the field near the center
    const double seed_r = 6.0 * std::max(grid.hx, grid.hy);
    const int i0 = static_cast<int>(std::floor((cx - grid.x0) / grid.hx));
    const int span_i = static_cast<int>(seed_r / grid.hx) + 1;
    const int span_j = static_cast<int>(seed_r / grid.hy) + 1;
    for (int jj = std::max(0, jlo - span_j); jj <= std::min(grid.ny - 1, jlo + 1 + span_j); ++jj) {
      for (int i = std::max(0, i0 - span_i); i <= std::min(grid.nx - 1, i0 + span_i); ++i) {
        const double cost = seed_cost(i, jj);
        if (std::isfinite(cost)) push(grid.idx(i, jj), cost);
      }
    }
  }

  const int nx = grid.nx, ny = grid.ny;
  while (!pq.empty()) {
    const auto [d, u32] = pq.top();
    pq.pop();
    const std::size_t u = u32;
    if (d > field.dist[u]) continue;
    const int i = static_cast<int>(u % static_cast<std::size_t>(nx));
    const int j = static_cast<int>(u / static_cast<std::size_t>(nx));

    auto relax = [&](int di, int dj, double cost) {
      if (!std::isfinite(cost)) return;
      const int ii = i + di, jj = j + dj;
      if (ii < 0 || ii >= nx || jj < 0 || jj >= ny) return;
      push(grid.idx(ii, jj), d + cost);
    };

    relax(1, 0, t.H);
    relax(-1, 0, t.H);
    relax(0, 1, t.V[i]);
    relax(0, -1, t.V[i]);
    relax(1, 1, t.Dp[i]);
    relax(1, -1, t.Dp[i]);
    relax(-1, 1, t.Dm[i]);
    relax(-1, -1, t.Dm[i]);
    relax(2, 1, t.K21p[i]);
    relax(2, -1, t.K21p[i]);
    relax(-2, 1, t.K21m[i]);
    relax(-2, -1, t.K21m[i]);
    relax(1, 2, t.K12p[i]);
    relax(1, -2, t.K12p[i]);
    relax(-1, 2, t.K12m[i]);
    relax(-1, -2, t.K12m[i]);
  }
  return field;
}

MetricField metric_field_from_function(
    const Grid2D& grid, double cx, double cy,
    const std::function<double(double, double)>& dist_fn) {
  MetricField field;
  field.grid = grid;
  field.cx = cx;
  field.cy = cy;
  field.dist.resize(grid.size());
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i)
      field.dist[grid.idx(i, j)] = dist_fn(grid.x(i), grid.y(j));
  return field;
}

std::size_t ball_cell_count(const MetricField& field, double r) {
  std::size_t n = 0;
  for (double d : field.dist)
    if (d < r) ++n;
  return n;
}

double ball_volume(const MetricField& field, double r) {
  return static_cast<double>(ball_cell_count(field, r)) * field.grid.cell_area();
}

BallProfile ball_profile(const MetricField& field, std::span<const double> r_list,
                         double rel_tol) {
  std::vector<double> sorted(field.dist);
  std::sort(sorted.begin(), sorted.end());
  const double cell = field.grid.cell_area();
  auto vol = [&](double r) {
    const auto it = std::lower_bound(sorted.begin(), sorted.end(), r);
    return static_cast<double>(it - sorted.begin()) * cell;
  };

  BallProfile bp;
  for (double r : r_list) {
    if (r < 5.0 * field.grid.hx || r > field.grid.half_extent_x() / 2.0)
      throw precondition_error("ball_profile: radius outside [5 hx, X/2]");
    const double v = vol(r);
    if (v < 25.0 * cell)
      throw resolution_error("ball_profile: ball contains fewer than 25 cells");
    double lo = 0.0, hi = r;
    while (hi - lo > rel_tol * r) {
      const double mid = 0.5 * (lo + hi);
      if (vol(r - mid) > 0.5 * v)
        lo = mid;
      else
        hi = mid;
    }
    const double delta = 0.5 * (lo + hi);
    bp.radii.push_back(r);
    bp.volume.push_back(v);
    bp.delta0.push_back(delta);
    bp.nu0.push_back(1.0 - delta / r);
  }
  return bp;
}

std::pair<GridFunction, GridFunction> grad_A(const ProfileFn& profile,
                                             const GridFunction& w) {
  const Grid2D& g = w.grid;
  GridFunction gx(g), gy(g);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      double dx;
      if (i == 0)
        dx = (w.at(1, j) - w.at(0, j)) / g.hx;
      else if (i == g.nx - 1)
        dx = (w.at(i, j) - w.at(i - 1, j)) / g.hx;
      else
        dx = (w.at(i + 1, j) - w.at(i - 1, j)) / (2.0 * g.hx);
      double dy;
      if (j == 0)
        dy = (w.at(i, 1) - w.at(i, 0)) / g.hy;
      else if (j == g.ny - 1)
        dy = (w.at(i, j) - w.at(i, j - 1)) / g.hy;
      else
        dy = (w.at(i, j + 1) - w.at(i, j - 1)) / (2.0 * g.hy);
      gx.at(i, j) = dx;
      gy.at(i, j) = profile_f(profile, g.x(i)) * dy;
    }
  }
  return {std::move(gx), std::move(gy)};
}

GridFunction grad_A_adjoint(const ProfileFn& profile, const GridFunction& v1,
                            const GridFunction& v2) {
  const Grid2D& g = v1.grid;
  if (!g.same_shape(v2.grid)) throw precondition_error("grad_A_adjoint: shape mismatch");
  GridFunction out(g);
  // Scatter the transposes of the stencils used in grad_A.
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double a = v1.at(i, j);
      if (i == 0) {
        out.at(1, j) += a / g.hx;
        out.at(0, j) -= a / g.hx;
      } else if (i == g.nx - 1) {
        out.at(i, j) += a / g.hx;
        out.at(i - 1, j) -= a / g.hx;
      } else {
        out.at(i + 1, j) += a / (2.0 * g.hx);
        out.at(i - 1, j) -= a / (2.0 * g.hx);
      }
      const double b = v2.at(i, j) * profile_f(profile, g.x(i));
      if (j == 0) {
        out.at(i, 1) += b / g.hy;
        out.at(i, 0) -= b / g.hy;
      } else if (j == g.ny - 1) {
        out.at(i, j) += b / g.hy;
        out.at(i, j - 1) -= b / g.hy;
      } else {
        out.at(i, j + 1) += b / (2.0 * g.hy);
        out.at(i, j - 1) -= b / (2.0 * g.hy);
      }
    }
  }
  return out;
}

double CutoffSequence::psi(int j, double d) const {
  const double top = radii[static_cast<std::size_t>(j)];       // r_{j+1}
  const double ramp = ramp_tops[static_cast<std::size_t>(j) - 1];
  if (d <= top) return 1.0;
  if (d >= ramp) return 0.0;
  return (ramp - d) / (ramp - top);
}

double CutoffSequence::ramp_slope(int j) const {
  return 1.0 / (ramp_tops[static_cast<std::size_t>(j) - 1] -
                radii[static_cast<std::size_t>(j)]);
}

CutoffSequence cutoff_radii(double r, double nu, int J) {
  if (!(r > 0.0)) throw precondition_error("cutoff_radii: requires r > 0");
  if (!(nu > 0.0 && nu < 1.0)) throw precondition_error("cutoff_radii: nu in (0,1)");
  if (J < 1 || J > 30) throw precondition_error("cutoff_radii: J in [1, 30]");
  const double c = 6.0 / (M_PI * M_PI);
  CutoffSequence seq;
  seq.r = r;
  seq.nu = nu;
  seq.J = J;
  seq.radii.push_back(r);
  double cur = r;
  for (int j = 1; j <= J; ++j) {
    const double gap = c / (static_cast<double>(j) * j) * (1.0 - nu) * r;
    const double next = cur - gap;
    seq.ramp_tops.push_back(next + 0.75 * gap);
    seq.radii.push_back(next);
    cur = next;
  }
  return seq;
}

CutoffSequence cutoff_sequence(const MetricField& field, double r, double nu, int J) {
  CutoffSequence seq = cutoff_radii(r, nu, J);
  for (int j = 1; j <= J; ++j) {
    const double gap = seq.radii[static_cast<std::size_t>(j) - 1] -
                       seq.radii[static_cast<std::size_t>(j)];
    if (gap < 2.0 * field.grid.hx)
      throw resolution_error("cutoff_sequence: ramp narrower than 2 hx at j = " +
                             std::to_string(j));
  }
  return seq;
}

GridFunction cutoff_function(const MetricField& field, const CutoffSequence& seq, int j) {
  GridFunction psi(field.grid);
  for (std::size_t c = 0; c < field.dist.size(); ++c)
    psi.v[c] = seq.psi(j, field.dist[c]);
  psi.compact_support = true;
  psi.support_radius = seq.radii[static_cast<std::size_t>(j) - 1];
  return psi;
}

double cutoff_grad_sup(const ProfileFn& profile, const MetricField& field,
                       const CutoffSequence& seq, int j) {
  const Grid2D& g = field.grid;
  const double lo = seq.radii[static_cast<std::size_t>(j)] - 2.0 * (g.hx + g.hy);
  const double hi = seq.ramp_tops[static_cast<std::size_t>(j) - 1] + 2.0 * (g.hx + g.hy);
  double sup = 0.0;
  for (int jj = 0; jj < g.ny; ++jj) {
    for (int ii = 0; ii < g.nx; ++ii) {
      const double d = field.at(ii, jj);
      if (d < lo || d > hi) continue;
      auto psi_at = [&](int a, int b) { return seq.psi(j, field.at(a, b)); };
      double dx;
      if (ii == 0)
        dx = (psi_at(1, jj) - psi_at(0, jj)) / g.hx;
      else if (ii == g.nx - 1)
        dx = (psi_at(ii, jj) - psi_at(ii - 1, jj)) / g.hx;
      else
        dx = (psi_at(ii + 1, jj) - psi_at(ii - 1, jj)) / (2.0 * g.hx);
      double dy;
      if (jj == 0)
        dy = (psi_at(ii, 1) - psi_at(ii, 0)) / g.hy;
      else if (jj == g.ny - 1)
        dy = (psi_at(ii, jj) - psi_at(ii, jj - 1)) / g.hy;
      else
        dy = (psi_at(ii, jj + 1) - psi_at(ii, jj - 1)) / (2.0 * g.hy);
      const double f = profile_f(profile, g.x(ii));
      sup = std::max(sup, std::hypot(dx, f * dy));
    }
  }
  return sup;
}

double subunit_gradient_sup(const ProfileFn& profile, const MetricField& field,
                            double kink_tol) {
  const Grid2D& g = field.grid;
  double sup = 0.0;
  for (int j = 2; j + 2 < g.ny; ++j) {
    for (int i = 2; i + 2 < g.nx; ++i) {
      const double c = field.at(i, j);
      const double xl = (c - field.at(i - 1, j)) / g.hx;
      const double xr = (field.at(i + 1, j) - c) / g.hx;
      const double yl = (c - field.at(i, j - 1)) / g.hy;
      const double yr = (field.at(i, j + 1) - c) / g.hy;
      if (std::abs(xl - xr) > kink_tol * (std::abs(xl) + std::abs(xr) + 1.0)) continue;
      if (std::abs(yl - yr) > kink_tol * (std::abs(yl) + std::abs(yr) + 1.0)) continue;
      const double f = profile_f(profile, g.x(i));
      sup = std::max(sup, std::hypot(0.5 * (xl + xr), f * 0.5 * (yl + yr)));
    }
  }
  return sup;
}

Containment ball_containment(const MetricField& field, double r) {
  const Grid2D& g = field.grid;
  Containment c{std::numeric_limits<double>::infinity(), 0.0};
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double e = std::hypot(g.x(i) - field.cx, g.y(j) - field.cy);
      if (field.at(i, j) < r)
        c.outradius = std::max(c.outradius, e);
      else
        c.inradius = std::min(c.inradius, e);
    }
  }
  return c;
}

}  // namespace degen
