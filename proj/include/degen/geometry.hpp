#pragma once

#include <functional>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "degen/errors.hpp"

namespace degen {

/// k-fold iterated natural log of 1/x.  Every intermediate level and the
/// result must be positive; violations raise domain_error naming the level.
double iterlog(int k, double x);

/// Values of the degeneracy profile at one radius.
struct FDerivs {
  double F;    // F(r)
  double dF;   // F'(r), negative on the degenerate range
  double d2F;  // F''(r), positive on the degenerate range
  double f;    // e^{-F(r)}
};

/// Profile abstraction consumed by the structural checks and by the metric /
/// solver grids; Geometry supplies the log-power family, tests supply stubs.
using ProfileFn = std::function<FDerivs(double)>;

/// The degeneracy family F(r) = (ln 1/r) (ln^{(k)} 1/r)^sigma.
class Geometry {
 public:
  Geometry(int k, double sigma);

  int k() const { return k_; }
  double sigma() const { return sigma_; }
  /// Largest r at which every iterated log of 1/r is >= 1.1.
  double r_max() const { return r_max_; }

  FDerivs derivatives(double r) const;
  double f(double r) const { return derivatives(r).f; }

  ProfileFn profile() const;

  nlohmann::json to_json() const;
  static Geometry from_json(const nlohmann::json& j);

 private:
  int k_;
  double sigma_;
  double r_max_;
};

/// Isotropic stub f == 1 (F == 0); only the `f` member is meaningful.
ProfileFn isotropic_profile();
/// Profile with F(r) = (ln 1/r)^p (the sigma = 0 family is p = 1).
ProfileFn log_power_profile(double p);

/// Per-condition outcome of the five structural conditions.
struct StructuralReport {
  bool f_vanishes;           // (1) F -> infinity as r -> 0+
  bool signs_ok;             // (2) F' < 0, F'' > 0
  double doubling_constant;  // (3) max of |F'(x)|/|F'(r)| over x in [r/2, 2r]
  bool monotone_ok;          // (4) 1/(-r F'(r)) nondecreasing on the grid
  double epsilon;            // (4) 1/sup of 1/(-r F')
  double cond5_low, cond5_high;  // (5) range of r F''(r)/(-F'(r))
  bool pass(double doubling_cap = 16.0, double cond5_cap = 16.0) const;
};

StructuralReport structural_check(const ProfileFn& profile, std::span<const double> r_grid);

/// Superradius parameters: the exponent constant is exposed because the
/// source estimates never pin it.
struct SuperradiusSpec {
  double m = 3.0;    // > 2 in applications
  double C_m = 1.0;  // exponent constant, default 1
  ProfileFn profile;
};

/// phi(r) = (1/|F'(r)|) exp(C_m (|F'(r)|^2 / F''(r) + 1)^{m-1}).
double superradius(const SuperradiusSpec& spec, double r);
/// ln phi(r); use this form in products with other logs.
double log_superradius(const SuperradiusSpec& spec, double r);

/// Discrete check of the monotonicity property of phi on a log-grid;
/// returns the most negative discrete increment of ln phi (>= -1e-12 means
/// monotone).
double superradius_monotonicity_defect(const SuperradiusSpec& spec,
                                       std::span<const double> r_grid);

/// Analytic comparator f(r)/|F'(r)|^2 for the volume of the metric ball
/// B(0, r).
double ball_volume_estimate(const ProfileFn& profile, double r);

/// Log-spaced grid helper (inclusive endpoints).
std::vector<double> log_grid(double lo, double hi, int n);

}  // namespace degen
