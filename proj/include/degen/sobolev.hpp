#pragma once

#include <string>
#include <vector>

#include "degen/geometry.hpp"
#include "degen/logval.hpp"
#include "degen/metric.hpp"
#include "degen/young.hpp"

namespace degen {

/// One evaluation of the Orlicz-Sobolev functional pair on a test function:
/// LHS = Phi^{-1}( int_B Phi(|w|) dmu_rho ), RHS = int_B |grad_A w| dmu_rho,
/// ratio = LHS / (phi(rho) RHS) with phi the superradius.
struct SobolevProbe {
  double m = 0.0;
  double C_m = 1.0;
  double rho = 0.0;
  double lhs_log = 0.0;  // ln LHS (-inf for w == 0)
  double rhs = 0.0;
  double ratio_log = 0.0;
  bool zero = false;     // w == 0 on the ball

  double ratio() const { return zero ? 0.0 : std::exp(ratio_log); }
};

SobolevProbe sobolev_ratio(const ProfileFn& profile, double m, double C_m,
                           const MetricField& field, double rho,
                           const GridFunction& w);

enum class TestStyle { metric_radial_bump, tensor_bump, extremal };

/// The test functions the verification sweeps use.  The extremal family is
/// eta(dist) min(1/f(dist), 1/f(eps)) with eta == 1 on [0, rho/2] and linear
/// to 0 at rho.
GridFunction test_family(const ProfileFn& profile, const MetricField& field,
                         double rho, TestStyle style, double eps = 0.0);

/// Sup of the probe ratio over the standard family (two bumps plus three
/// capped extremals).
double family_sup_ratio(const ProfileFn& profile, double m, double C_m,
                        const MetricField& field, double rho);

/// Probe of the extremal family through the thin-ball 1-D reduction: the
/// integrals run over the slice coordinate x1 with the reachable ball
/// half-height as weight.  The divergent mass of the failing geometries sits
/// in Euclidean measure as small as e^{-F(eps)}, far below any cell, so this
/// reduction is the only faithful quadrature for the extremal family.
SobolevProbe extremal_probe_reduced(const ProfileFn& profile, double m, double C_m,
                                    double rho, double eps, int n_nodes = 4000);

struct FailureSweep {
  std::vector<double> eps;
  std::vector<SobolevProbe> probes;
  double divergence_exponent = 0.0;  // (sigma+1)(1-1/m)
};

/// Ratio sweep on the extremal family for the failing parameter range
/// k = 1, sigma > 1/(m-1); the ratio grows without bound as eps decreases.
FailureSweep failure_probe(const Geometry& geom, double m, double C_m, double rho,
                           std::vector<double> eps_list);

/// Two-regime kernel 1/h_r of the ball subrepresentation, r = y1 - x1 > 0:
/// 1/(r f(x1)) while r < 1/|F'(x1)|, then |F'(x1+r)|/f(x1+r).
double kernel_eval(const ProfileFn& profile, double x1, double y1);
double kernel_log(const ProfileFn& profile, double x1, double y1);

struct EndpointReport {
  struct Row {
    double alpha;
    double max_ratio;  // over sampled y
    double argmax_y;
  };
  std::vector<Row> rows;
  double max_ratio = 0.0;
};

/// Endpoint inequality check: Phi^{-1}(sup_y int_B Phi(K |B| alpha) dmu) over
/// (alpha phi(r0)), computed with the half-ball 1-D reduction of the kernel
/// integral; reports the max over sampled y per alpha.
EndpointReport endpoint_check(const ProfileFn& profile, double m, double C_m,
                              double r0, std::span<const double> alpha_list,
                              int n_y = 24, int n_r = 4000);

/// Empirical global (Phi, A)-Sobolev constant over the bump family:
/// sup ||v||_{L^Phi(dx)} / ||grad_A v||_{L^1(dx)} (unnormalized Lebesgue).
double global_sobolev_constant(const ProfileFn& profile, double m,
                               const MetricField& field);

}  // namespace degen
