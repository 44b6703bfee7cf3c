#pragma once

#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "degen/logval.hpp"

namespace degen {

/// Sample points with nonnegative weights; the carrier of every discrete
/// integral in the Orlicz functionals.
struct DiscreteMeasure {
  std::vector<double> weights;
  double mass = 0.0;
  bool normalized = false;

  static DiscreteMeasure uniform_probability(std::size_t n);
  static DiscreteMeasure from_weights(std::vector<double> w);

  /// Copy with weights scaled to total mass 1.
  DiscreteMeasure normalized_copy() const;
};

/// Evaluatable Young function: increasing, convex, vanishing at 0.
class YoungFn {
 public:
  virtual ~YoungFn() = default;

  virtual LogVal eval(const LogVal& t) const = 0;
  virtual LogVal inverse(const LogVal& s) const = 0;
  /// (left, right) derivative at t; equal except at branch junctions.
  virtual std::pair<LogVal, LogVal> derivative(const LogVal& t) const = 0;
  virtual nlohmann::json to_json() const = 0;
};

/// The composition-friendly Young-function family: linear with slope F/E on
/// [0, E] and exp(((ln t)^{1/m} + 1)^m) above, with E = e^{2^m}, F = e^{3^m}.
class PhiM final : public YoungFn {
 public:
  explicit PhiM(double m);

  double m() const { return m_; }
  double log_E() const { return two_m_; }  // ln E = 2^m
  double log_F() const { return three_m_; }  // ln F = 3^m
  LogVal E() const { return LogVal::from_log(two_m_); }
  LogVal F() const { return LogVal::from_log(three_m_); }
  /// Slope of the linear branch, F/E.
  LogVal linear_slope() const { return LogVal::from_log(three_m_ - two_m_); }

  LogVal eval(const LogVal& t) const override;
  LogVal inverse(const LogVal& s) const override;
  std::pair<LogVal, LogVal> derivative(const LogVal& t) const override;
  /// (Phi', Phi'') with the analytic-branch factorization; Phi''=0 on the
  /// linear branch, one-sided values at t = E.
  std::pair<LogVal, LogVal> derivatives(const LogVal& t) const;
  nlohmann::json to_json() const override;

 private:
  double m_;
  double two_m_;    // 2^m
  double three_m_;  // 3^m
};

/// C^1 variant of PhiM: same above E, linear with slope F/(2E) below
/// a = 2E^2/F, and a monotone convex C^1 bridge on [a, E] matching the four
/// endpoint value/slope conditions.
class PhiTildeM final : public YoungFn {
 public:
  explicit PhiTildeM(double m);

  double m() const { return base_.m(); }
  const PhiM& base() const { return base_; }
  double log_a() const { return a_log_; }  // ln(2E^2/F)

  LogVal eval(const LogVal& t) const override;
  LogVal inverse(const LogVal& s) const override;
  std::pair<LogVal, LogVal> derivative(const LogVal& t) const override;
  nlohmann::json to_json() const override;

  /// Whether the single-quadratic example bridge satisfied all four endpoint
  /// conditions (it does not; kept for the construction report).
  bool used_quadratic_example() const { return used_quadratic_example_; }

  /// Reported equivalence constant: sup over a log-grid of Phi_m / PhiTilde_m.
  double equivalence_constant() const;

  /// Scaled bridge values (g, g', g'') at tau = t/E in [2E/F, 1];
  /// rho(t) = F g(t/E).
  struct BridgeVals {
    double g, dg, d2g;
  };
  BridgeVals bridge_at(double tau) const;

 private:
  // Bridge in scaled coordinates: tau = t/E in [tau0, 1], g(tau) = rho(t)/F.
  // Two C^1 quadratic pieces joined at `knot`, slopes m0 -> s_mid -> m1.
  struct ScaledBridge {
    double tau0, p0;       // left endpoint (a/E, E/F)
    double knot, s_mid;
    double m0, m1;
    double g(double tau) const;
    double dg(double tau) const;
    double d2g(double tau) const;
    double inverse(double target) const;  // bisection on [tau0, 1]
  };

  PhiM base_;
  double a_log_;
  ScaledBridge bridge_;
  bool used_quadratic_example_ = false;
};

/// Legendre conjugate sup_{t>0} (s t - Phi(t)) by golden-section search on
/// ln t; exactly 0 below the minimal slope.  `kink_logs` are candidate kink
/// abscissas checked alongside the interior optimum.
LogVal conjugate_eval(const YoungFn& phi, const LogVal& s,
                      std::span<const double> kink_logs = {});

LogVal conjugate_eval(const PhiM& phi, const LogVal& s);

/// Conjugate Young function as an evaluatable object (inverse by bisection).
class ConjugateFn final : public YoungFn {
 public:
  ConjugateFn(const YoungFn& base, std::vector<double> kink_logs);
  static ConjugateFn of(const PhiM& phi);

  LogVal eval(const LogVal& s) const override;
  LogVal inverse(const LogVal& y) const override;
  std::pair<LogVal, LogVal> derivative(const LogVal& s) const override;
  nlohmann::json to_json() const override;

 private:
  const YoungFn* base_;  // non-owning
  std::vector<double> kink_logs_;
};

/// inf{t>0 : integral Phi(|f|/t) dmu <= 1} by geometric bracketing plus
/// bisection in ln t; 0 for f == 0.
double luxemburg_norm(std::span<const double> f, const DiscreteMeasure& mu,
                      const YoungFn& phi, double rel_tol = 1e-10);

/// Phi^{-1}( integral Phi(|f|) dmu ), all in log-domain.
LogVal orlicz_quasinorm(std::span<const double> f, const DiscreteMeasure& mu,
                        const YoungFn& phi);
LogVal orlicz_quasinorm_log(std::span<const double> log_f,
                            const DiscreteMeasure& mu, const YoungFn& phi);

/// max over the grid pairs of Phi(ab) / (Phi(a) Phi(b)).
double submult_ratio(const YoungFn& phi, std::span<const double> log_a_grid,
                     std::span<const double> log_b_grid);

/// Serialization of the Phi_m / PhiTilde_m parameterization:
/// {"m": m, "variant": "phi"|"phi_tilde"}.
std::unique_ptr<YoungFn> young_from_json(const nlohmann::json& j);

}  // namespace degen
