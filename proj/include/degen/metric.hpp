#pragma once

#include <array>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "degen/geometry.hpp"
#include "degen/grid.hpp"

namespace degen {

/// Discretized control distance d_A(center, .) for A = diag(1, f(x)^2):
/// horizontal speed 1, vertical speed f(x).
struct MetricField {
  Grid2D grid;
  double cx = 0.0, cy = 0.0;  // center point (need not be a cell center)
  std::vector<double> dist;   // per-cell distance from the center

  double at(int i, int j) const { return dist[grid.idx(i, j)]; }
};

/// Shortest-path distance field on a 16-neighbor stencil (axis, diagonal and
/// knight moves); edge costs use f at the move's midpoint abscissa.  The
/// 8-neighbor octile stencil has a worst-case isotropic bias of ~8.2%, which
/// breaks the 5%-of-Euclidean control, so the stencil carries knight moves
/// (worst-case bias ~2.8%).
///
/// Centers that are not cell centers are seeded through their two adjacent
/// rows with two-leg path costs |x_i - cx| + |dy|/f(|x_i|), which matches the
/// horizontal-then-vertical geodesics of this metric family.
MetricField cc_distance_field(const ProfileFn& profile, const Grid2D& grid,
                              double cx = 0.0, double cy = 0.0);

/// Field filled from an exact distance function (isotropic stubs, tests).
MetricField metric_field_from_function(
    const Grid2D& grid, double cx, double cy,
    const std::function<double(double, double)>& dist_fn);

/// Volumes, doubling increments and the innermost-ball parameter nu0.
struct BallProfile {
  std::vector<double> radii;
  std::vector<double> volume;  // |B(0,r)| = cell count * hx * hy
  std::vector<double> delta0;  // |B(0, r - delta0)| = |B(0,r)| / 2
  std::vector<double> nu0;     // 1 - delta0 / r
};

BallProfile ball_profile(const MetricField& field, std::span<const double> r_list,
                         double rel_tol = 1e-3);

double ball_volume(const MetricField& field, double r);
std::size_t ball_cell_count(const MetricField& field, double r);

/// A-gradient (d/dx w, f(x) d/dy w) by centered differences, one-sided at the
/// boundary.
std::pair<GridFunction, GridFunction> grad_A(const ProfileFn& profile,
                                             const GridFunction& w);

/// Adjoint of grad_A as assembled (exact transpose of the same stencils);
/// used to discretize the drift term of the right-hand side.
GridFunction grad_A_adjoint(const ProfileFn& profile, const GridFunction& v1,
                            const GridFunction& v2);

/// Accumulating cutoff radii r_1 = r > r_2 > ... -> nu r with
/// r_j - r_{j+1} = c j^{-2} (1-nu) r, c = 6/pi^2, and ramp tops r'_j chosen
/// inside (r_{j+1}, r_j) so supp psi_j stays in B(0, r_j).
struct CutoffSequence {
  double r = 0.0, nu = 0.0;
  std::vector<double> radii;      // r_1 .. r_{J+1}
  std::vector<double> ramp_tops;  // r'_j, j = 1..J
  int J = 0;

  double psi(int j, double d) const;        // ramp value of psi_j at distance d
  double ramp_slope(int j) const;           // 1 / (r'_j - r_{j+1})
};

/// Radii only; ramp construction never touches the grid.
CutoffSequence cutoff_radii(double r, double nu, int J);

/// Cutoff sequence on a field: validates that the grid resolves every ramp
/// (r_j - r_{j+1} >= 2 hx) and returns the materializable sequence.
CutoffSequence cutoff_sequence(const MetricField& field, double r, double nu, int J);

GridFunction cutoff_function(const MetricField& field, const CutoffSequence& seq, int j);

/// Streaming sup of |grad_A psi_j| over the ramp's support annulus; avoids
/// materializing psi on very large grids.
double cutoff_grad_sup(const ProfileFn& profile, const MetricField& field,
                       const CutoffSequence& seq, int j);

/// Largest Euclidean ball inside {dist < r} around the center and smallest
/// one containing it.
struct Containment {
  double inradius;
  double outradius;
};
Containment ball_containment(const MetricField& field, double r);

/// sup of |grad_A dist| over cells where the field is differentiable: cells
/// whose one-sided differences disagree by more than kink_tol (relative) lie
/// on the cut locus of the distance and are excluded, as are the outermost
/// two rings.
double subunit_gradient_sup(const ProfileFn& profile, const MetricField& field,
                            double kink_tol = 0.2);

}  // namespace degen
