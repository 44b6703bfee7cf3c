#include "degen/young.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

namespace degen {

// ---------------------------------------------------------------------------
// DiscreteMeasure

DiscreteMeasure DiscreteMeasure::uniform_probability(std::size_t n) {
  DiscreteMeasure mu;
  mu.weights.assign(n, n ? 1.0 / static_cast<double>(n) : 0.0);
  mu.mass = n ? 1.0 : 0.0;
  mu.normalized = true;
  return mu;
}

DiscreteMeasure DiscreteMeasure::from_weights(std::vector<double> w) {
  DiscreteMeasure mu;
  double mass = 0.0;
  for (double x : w) {
    if (x < 0.0 || std::isnan(x)) throw precondition_error("DiscreteMeasure: negative weight");
    mass += x;
  }
  mu.weights = std::move(w);
  mu.mass = mass;
  mu.normalized = false;
  return mu;
}

DiscreteMeasure DiscreteMeasure::normalized_copy() const {
  if (mass <= 0.0) throw precondition_error("DiscreteMeasure: cannot normalize zero mass");
  DiscreteMeasure mu;
  mu.weights.reserve(weights.size());
  for (double x : weights) mu.weights.push_back(x / mass);
  mu.mass = 1.0;
  mu.normalized = true;
  return mu;
}

// ---------------------------------------------------------------------------
// PhiM

PhiM::PhiM(double m) : m_(m) {
  if (!(m > 1.0)) throw precondition_error("PhiM: requires m > 1");
  two_m_ = std::pow(2.0, m);
  three_m_ = std::pow(3.0, m);
}

LogVal PhiM::eval(const LogVal& t) const {
  if (t.is_zero()) return LogVal::zero();
  const double x = t.log();
  if (x >= two_m_) {
    const double theta = std::pow(x, 1.0 / m_);
    return LogVal::from_log(std::pow(theta + 1.0, m_));
  }
  return LogVal::from_log(x + (three_m_ - two_m_));
}

LogVal PhiM::inverse(const LogVal& s) const {
  if (s.is_zero()) return LogVal::zero();
  const double y = s.log();
  if (y >= three_m_) {
    const double theta = std::pow(y, 1.0 / m_);
    return LogVal::from_log(std::pow(theta - 1.0, m_));
  }
  return LogVal::from_log(y - (three_m_ - two_m_));
}

std::pair<LogVal, LogVal> PhiM::derivative(const LogVal& t) const {
  if (t.is_zero()) {
    const LogVal s = linear_slope();
    return {s, s};
  }
  const double x = t.log();
  const LogVal slope = linear_slope();
  if (x < two_m_) return {slope, slope};
  auto analytic = [&](double xx) {
    // Phi'(t) = (Phi(t)/t) * Omega(t), Omega = (1 + (ln t)^{-1/m})^{m-1}
    const double theta = std::pow(xx, 1.0 / m_);
    const double log_phi = std::pow(theta + 1.0, m_);
    const double omega = std::pow(1.0 + 1.0 / theta, m_ - 1.0);
    return LogVal::from_log(log_phi - xx + std::log(omega));
  };
  if (x == two_m_) return {slope, analytic(x)};
  const LogVal d = analytic(x);
  return {d, d};
}

std::pair<LogVal, LogVal> PhiM::derivatives(const LogVal& t) const {
  if (t.is_zero()) throw domain_error("PhiM::derivatives: t = 0");
  const double x = t.log();
  if (x < two_m_) return {linear_slope(), LogVal::zero()};
  const double theta = std::pow(x, 1.0 / m_);
  const double log_phi = std::pow(theta + 1.0, m_);
  const double omega = std::pow(1.0 + 1.0 / theta, m_ - 1.0);
  // Gamma = Omega - 1 - ((m-1)/m) / (Omega^{1/(m-1)} (ln t)^{1+1/m})
  const double gamma = omega - 1.0 -
      ((m_ - 1.0) / m_) / (std::pow(omega, 1.0 / (m_ - 1.0)) * std::pow(x, 1.0 + 1.0 / m_));
  const LogVal d1 = LogVal::from_log(log_phi - x + std::log(omega));
  if (gamma <= 0.0)  // only possible just above E for m near 1; clamp at 0
    return {d1, LogVal::zero()};
  const LogVal d2 = LogVal::from_log(log_phi - 2.0 * x + std::log(omega) + std::log(gamma));
  return {d1, d2};
}

nlohmann::json PhiM::to_json() const {
  return nlohmann::json{{"m", m_}, {"variant", "phi"}};
}

// ---------------------------------------------------------------------------
// PhiTildeM

double PhiTildeM::ScaledBridge::g(double tau) const {
  if (tau <= knot) {
    const double d = tau - tau0;
    return p0 + m0 * d + (s_mid - m0) * d * d / (2.0 * (knot - tau0));
  }
  const double d = 1.0 - tau;
  return 1.0 - m1 * d + (m1 - s_mid) * d * d / (2.0 * (1.0 - knot));
}

double PhiTildeM::ScaledBridge::dg(double tau) const {
  if (tau <= knot) return m0 + (s_mid - m0) * (tau - tau0) / (knot - tau0);
  return m1 - (m1 - s_mid) * (1.0 - tau) / (1.0 - knot);
}

double PhiTildeM::ScaledBridge::d2g(double tau) const {
  if (tau <= knot) return (s_mid - m0) / (knot - tau0);
  return (m1 - s_mid) / (1.0 - knot);
}

double PhiTildeM::ScaledBridge::inverse(double target) const {
  double lo = tau0, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

PhiTildeM::PhiTildeM(double m) : base_(m) {
  const double two_m = base_.log_E();
  const double three_m = base_.log_F();
  a_log_ = std::log(2.0) + 2.0 * two_m - three_m;  // ln(2E^2/F)

  // Scaled endpoint data: tau in [a/E, 1], g = rho/F.
  const double tau0 = std::exp(a_log_ - two_m);        // a/E = 2E/F
  const double p0 = std::exp(two_m - three_m);         // E/F
  const double m0 = 0.5;                               // rho'(a) E/F
  const double m1 = std::pow(1.5, m - 1.0);            // rho'(E) E/F
  const double secant = (1.0 - p0) / (1.0 - tau0);

  // The explicit quadratic from the construction note fails rho(E) = F (checked
  // here); substitute a two-piece convex C^1 quadratic when it does.
  {
    const double A = (std::exp(three_m - two_m)) * (std::pow(1.5, m - 1.0) - 0.5);
    const double alpha_scaled = 2.0 * A * std::exp(-2.0 * two_m) - 1.0;  // alpha/E
    auto rho_scaled = [&](double tau) {
      double v = p0 + 0.5 * (tau - tau0);
      if (tau > alpha_scaled) {
        const double q = tau - alpha_scaled;
        v += A * std::exp(-three_m) * q * q / (2.0 * (1.0 - alpha_scaled)) * std::exp(two_m);
      }
      return v;
    };
    const double tol = 1e-9;
    used_quadratic_example_ = std::abs(rho_scaled(1.0) - 1.0) < tol &&
                              alpha_scaled >= tau0 && alpha_scaled <= 1.0;
  }

  if (!(m0 < secant && secant < m1))
    throw precondition_error(
        "PhiTildeM: no convex C^1 bridge exists for this m (needs roughly m >= 1.45)");

  // Knot at half the feasible range; keeps the middle slope strictly inside
  // (m0, m1) so both pieces are nondegenerate.
  const double w = (m1 - secant) / (m1 - m0);
  bridge_.tau0 = tau0;
  bridge_.p0 = p0;
  bridge_.m0 = m0;
  bridge_.m1 = m1;
  bridge_.knot = tau0 + w * (1.0 - tau0);
  bridge_.s_mid = 2.0 * secant - m0 * w - m1 * (1.0 - w);
  if (!(bridge_.s_mid >= m0 - 1e-12 && bridge_.s_mid <= m1 + 1e-12))
    throw numeric_error("PhiTildeM: bridge slope outside convex range");
}

LogVal PhiTildeM::eval(const LogVal& t) const {
  if (t.is_zero()) return LogVal::zero();
  const double x = t.log();
  if (x >= base_.log_E()) return base_.eval(t);
  if (x <= a_log_)
    return LogVal::from_log(x + (base_.log_F() - base_.log_E()) - std::log(2.0));
  const double tau = std::exp(x - base_.log_E());
  const double g = bridge_.g(tau);
  return LogVal::from_log(base_.log_F() + std::log(g));
}

LogVal PhiTildeM::inverse(const LogVal& s) const {
  if (s.is_zero()) return LogVal::zero();
  const double y = s.log();
  if (y >= base_.log_F()) return base_.inverse(s);
  if (y <= base_.log_E())
    return LogVal::from_log(y - (base_.log_F() - base_.log_E()) + std::log(2.0));
  const double tau = bridge_.inverse(std::exp(y - base_.log_F()));
  return LogVal::from_log(base_.log_E() + std::log(tau));
}

std::pair<LogVal, LogVal> PhiTildeM::derivative(const LogVal& t) const {
  const double lower_slope_log = base_.log_F() - base_.log_E() - std::log(2.0);
  if (t.is_zero() || t.log() <= a_log_) {
    const LogVal s = LogVal::from_log(lower_slope_log);
    return {s, s};
  }
  const double x = t.log();
  if (x >= base_.log_E()) return base_.derivative(t);
  const double tau = std::exp(x - base_.log_E());
  const LogVal d =
      LogVal::from_log(base_.log_F() - base_.log_E() + std::log(bridge_.dg(tau)));
  return {d, d};
}

PhiTildeM::BridgeVals PhiTildeM::bridge_at(double tau) const {
  return {bridge_.g(tau), bridge_.dg(tau), bridge_.d2g(tau)};
}

double PhiTildeM::equivalence_constant() const {
  double worst = 2.0;  // exact ratio on the lower linear branch
  const double lo = a_log_, hi = base_.log_E();
  for (int i = 0; i <= 400; ++i) {
    const double x = lo + (hi - lo) * i / 400.0;
    const LogVal t = LogVal::from_log(x);
    const double ratio = std::exp(base_.eval(t).log() - eval(t).log());
    worst = std::max(worst, ratio);
  }
  return worst;
}

nlohmann::json PhiTildeM::to_json() const {
  return nlohmann::json{{"m", m()}, {"variant", "phi_tilde"}};
}

// ---------------------------------------------------------------------------
// Conjugate

namespace {

// s*t - Phi(t) as a LogVal (zero when nonpositive), at x = ln t.
LogVal supremand(const YoungFn& phi, const LogVal& s, double x) {
  const LogVal t = LogVal::from_log(x);
  const LogVal st = s * t;
  const LogVal ph = phi.eval(t);
  if (st <= ph) return LogVal::zero();
  return LogVal::diff(st, ph);
}

}  // namespace

LogVal conjugate_eval(const YoungFn& phi, const LogVal& s,
                      std::span<const double> kink_logs) {
  if (s.is_zero()) return LogVal::zero();
  double lo = -40.0;
  double hi = std::max(400.0, 1.2 * s.log() + 10.0);
  // Push the right end out until the supremand has died off there; for m
  // near 1 the optimum sits at ln t of order (ln s)^{m/(m-1)}.
  while (!supremand(phi, s, hi).is_zero()) {
    hi *= 1.7;
    if (hi > 1e12) throw numeric_error("conjugate_eval: no superlinear growth found");
  }

  // Golden-section on ln t; the supremand's derivative s - Phi'(t) is
  // decreasing, so the profile is unimodal.
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - gr * (hi - lo);
  double x2 = lo + gr * (hi - lo);
  LogVal f1 = supremand(phi, s, x1);
  LogVal f2 = supremand(phi, s, x2);
  for (int i = 0; i < 200; ++i) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = supremand(phi, s, x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = supremand(phi, s, x1);
    }
  }
  LogVal best = std::max(f1, f2);
  for (double k : kink_logs) best = std::max(best, supremand(phi, s, k));
  return best;
}

LogVal conjugate_eval(const PhiM& phi, const LogVal& s) {
  const double kink[] = {phi.log_E()};
  return conjugate_eval(static_cast<const YoungFn&>(phi), s, kink);
}

ConjugateFn::ConjugateFn(const YoungFn& base, std::vector<double> kink_logs)
    : base_(&base), kink_logs_(std::move(kink_logs)) {}

ConjugateFn ConjugateFn::of(const PhiM& phi) {
  return ConjugateFn(phi, {phi.log_E()});
}

LogVal ConjugateFn::eval(const LogVal& s) const {
  return conjugate_eval(*base_, s, kink_logs_);
}

LogVal ConjugateFn::inverse(const LogVal& y) const {
  if (y.is_zero()) return LogVal::zero();
  // eval is nondecreasing and 0 below the minimal slope; bracket then bisect.
  double lo = -40.0, hi = -40.0;
  while (eval(LogVal::from_log(hi)) < y) {
    lo = hi;
    hi = hi <= 0.0 ? hi + 10.0 : hi * 1.5;
    if (hi > 1e6) throw numeric_error("ConjugateFn::inverse: bracket failed");
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (eval(LogVal::from_log(mid)) < y)
      lo = mid;
    else
      hi = mid;
  }
  return LogVal::from_log(0.5 * (lo + hi));
}

std::pair<LogVal, LogVal> ConjugateFn::derivative(const LogVal& s) const {
  // centered log-domain difference; adequate for the diagnostics that use it
  if (s.is_zero()) return {LogVal::zero(), LogVal::zero()};
  const double h = 1e-6;
  const LogVal up = eval(LogVal::from_log(s.log() + h));
  const LogVal dn = eval(LogVal::from_log(s.log() - h));
  if (up.is_zero() || dn.is_zero() || up <= dn) return {LogVal::zero(), LogVal::zero()};
  const LogVal d = LogVal::diff(up, dn) / LogVal::from_log(s.log() + std::log(2.0 * h));
  return {d, d};
}

nlohmann::json ConjugateFn::to_json() const {
  nlohmann::json j = base_->to_json();
  j["conjugate"] = true;
  return j;
}

// ---------------------------------------------------------------------------
// Orlicz functionals

namespace {

// ln( integral Phi(|f|/t) dmu ), with f given as ln|f| (-inf for zeros).
LogVal integral_phi_scaled(std::span<const double> log_f, const DiscreteMeasure& mu,
                           const YoungFn& phi, double log_t) {
  LogVal acc = LogVal::zero();
  for (std::size_t i = 0; i < log_f.size(); ++i) {
    const double w = mu.weights[i];
    if (w == 0.0 || std::isinf(log_f[i])) continue;
    const LogVal val = phi.eval(LogVal::from_log(log_f[i] - log_t));
    acc += val * LogVal::from_value(w);
  }
  return acc;
}

std::vector<double> abs_logs(std::span<const double> f) {
  std::vector<double> lf(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double a = std::abs(f[i]);
    lf[i] = a == 0.0 ? -std::numeric_limits<double>::infinity() : std::log(a);
  }
  return lf;
}

}  // namespace

double luxemburg_norm(std::span<const double> f, const DiscreteMeasure& mu,
                      const YoungFn& phi, double rel_tol) {
  if (f.size() != mu.weights.size())
    throw precondition_error("luxemburg_norm: size mismatch");
  if (mu.mass <= 0.0) throw precondition_error("luxemburg_norm: invalid measure (zero mass)");

  const auto lf = abs_logs(f);
  double sup_log = -std::numeric_limits<double>::infinity();
  double supp_mass = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (mu.weights[i] > 0.0 && !std::isinf(lf[i])) {
      sup_log = std::max(sup_log, lf[i]);
      supp_mass += mu.weights[i];
    }
  }
  if (supp_mass == 0.0) return 0.0;

  // Bracket around t0 = ||f||_inf / Phi^{-1}(1/mu(supp f)).
  const LogVal inv = phi.inverse(LogVal::from_value(1.0 / supp_mass));
  double lo = sup_log - inv.log();
  double hi = lo;
  auto le_one = [&](double log_t) {
    return integral_phi_scaled(lf, mu, phi, log_t) <= LogVal::one();
  };
  int guard = 0;
  while (!le_one(hi)) {
    hi += std::log(4.0);
    if (++guard > 600) throw numeric_error("luxemburg_norm: upper bracket failed");
  }
  guard = 0;
  while (le_one(lo)) {
    lo -= std::log(4.0);
    if (++guard > 600) {
      // integral stays <= 1 for all t, i.e. norm is 0 only for f == 0; here it
      // means the infimum is at -inf numerically -- return 0 guardedly.
      return 0.0;
    }
  }
  while (hi - lo > rel_tol) {
    const double mid = 0.5 * (lo + hi);
    if (le_one(mid))
      hi = mid;
    else
      lo = mid;
  }
  return std::exp(0.5 * (lo + hi));
}

LogVal orlicz_quasinorm_log(std::span<const double> log_f, const DiscreteMeasure& mu,
                            const YoungFn& phi) {
  if (log_f.size() != mu.weights.size())
    throw precondition_error("orlicz_quasinorm: size mismatch");
  LogVal acc = LogVal::zero();
  for (std::size_t i = 0; i < log_f.size(); ++i) {
    const double w = mu.weights[i];
    if (w == 0.0 || std::isinf(log_f[i])) continue;
    acc += phi.eval(LogVal::from_log(log_f[i])) * LogVal::from_value(w);
  }
  return phi.inverse(acc);
}

LogVal orlicz_quasinorm(std::span<const double> f, const DiscreteMeasure& mu,
                        const YoungFn& phi) {
  return orlicz_quasinorm_log(abs_logs(f), mu, phi);
}

double submult_ratio(const YoungFn& phi, std::span<const double> log_a_grid,
                     std::span<const double> log_b_grid) {
  double worst = 0.0;
  for (double la : log_a_grid) {
    const double pa = phi.eval(LogVal::from_log(la)).log();
    for (double lb : log_b_grid) {
      const double pb = phi.eval(LogVal::from_log(lb)).log();
      const double pab = phi.eval(LogVal::from_log(la + lb)).log();
      worst = std::max(worst, std::exp(pab - pa - pb));
    }
  }
  return worst;
}

std::unique_ptr<YoungFn> young_from_json(const nlohmann::json& j) {
  const double m = j.at("m").get<double>();
  const std::string variant = j.at("variant").get<std::string>();
  if (variant == "phi") return std::make_unique<PhiM>(m);
  if (variant == "phi_tilde") return std::make_unique<PhiTildeM>(m);
  throw precondition_error("young_from_json: unknown variant '" + variant + "'");
}

}  // namespace degen
