#include "degen/iterates.hpp"

#include <cmath>

namespace degen {

IterSpec::IterSpec(double m_, int j_, double beta_, YoungVariant variant_)
    : m(m_), j(j_), beta(beta_), variant(variant_) {
  if (!(m > 1.0)) throw precondition_error("IterSpec: requires m > 1");
  if (j < 0) throw precondition_error("IterSpec: requires j >= 0");
  if (beta == 0.0) throw precondition_error("IterSpec: beta = 0 is invalid");
  if (beta > 0.0 && beta < 1.0)
    throw precondition_error("IterSpec: beta must satisfy beta < 0 or beta >= 1");
}

ThetaRep ThetaRep::from_logval(double m, const LogVal& t) {
  if (t.is_zero()) throw domain_error("ThetaRep: t = 0 has no theta representation");
  ThetaRep r;
  r.m = m;
  r.log_t = t.log();
  r.analytic = r.log_t >= std::pow(2.0, m);
  r.theta = r.analytic ? std::pow(r.log_t, 1.0 / m) : 0.0;
  return r;
}

LogVal ThetaRep::to_logval() const { return LogVal::from_log(log_t); }

namespace {

struct Thresholds {
  double m;
  double two_m, three_m;
  double c;       // ln(F/E) = 3^m - 2^m, the phi linear-branch log-increment
  double a_log;   // ln(2E^2/F), phi_tilde only
  double c0;      // ln(F/(2E)), phi_tilde bottom-branch log-increment
  explicit Thresholds(double m_)
      : m(m_),
        two_m(std::pow(2.0, m_)),
        three_m(std::pow(3.0, m_)),
        c(three_m - two_m),
        a_log(std::log(2.0) + 2.0 * two_m - three_m),
        c0(three_m - two_m - std::log(2.0)) {}
};

double analytic_steps(const Thresholds& th, double x, int k) {
  const double theta = std::pow(x, 1.0 / th.m);
  return std::pow(theta + static_cast<double>(k), th.m);
}

double phi_iter_log(double m, int j, double x, YoungVariant variant) {
  const Thresholds th(m);
  if (j == 0) return x;
  if (variant == YoungVariant::phi) {
    if (x >= th.two_m) return analytic_steps(th, x, j);
    const int n_lin = static_cast<int>(std::min<double>(
        j, std::ceil((th.two_m - x) / th.c)));
    x += n_lin * th.c;
    if (n_lin >= j) return x;
    return analytic_steps(th, x, j - n_lin);
  }
  // phi_tilde: bottom-linear steps, then the bridge at most once, then analytic.
  PhiTildeM tilde(m);
  int left = j;
  if (x < th.a_log) {
    const int n0 = static_cast<int>(std::min<double>(
        left, std::ceil((th.a_log - x) / th.c0)));
    x += n0 * th.c0;
    left -= n0;
    if (left == 0) return x;
  }
  if (x < th.two_m) {
    x = tilde.eval(LogVal::from_log(x)).log();
    --left;
    if (left == 0) return x;
  }
  return analytic_steps(th, x, left);
}

double phi_iter_inv_log(double m, int j, double y, YoungVariant variant) {
  const Thresholds th(m);
  if (j == 0) return y;
  if (variant == YoungVariant::phi) {
    // All-analytic shortcut (the common case for deep chains).
    const double theta = std::pow(y, 1.0 / m);
    if (theta - static_cast<double>(j) >= 2.0)
      return std::pow(theta - static_cast<double>(j), m);
    for (int i = 0; i < j; ++i) {
      if (y >= th.three_m)
        y = std::pow(std::pow(y, 1.0 / m) - 1.0, m);
      else
        y -= th.c;
    }
    return y;
  }
  PhiTildeM tilde(m);
  for (int i = 0; i < j; ++i) {
    if (y > th.three_m)
      y = std::pow(std::pow(y, 1.0 / m) - 1.0, m);
    else if (y > th.two_m)
      y = tilde.inverse(LogVal::from_log(y)).log();
    else
      y -= th.c0;
  }
  return y;
}

// Ratio-state propagation through the elementary h-level maps.  For the
// running composite g = f_k o ... o f_1 we track r1 = t g'/g and
// q = g g'' / g'^2; composing with f at the point w = g(t) updates
//   r1 <- R1f(w) * r1,   q <- Qf(w) + q / R1f(w),
// where R1f = w f'/f and Qf = f f''/f'^2.
struct RatioState {
  double x;   // ln of current value (h-level)
  double r1 = 1.0;
  double q = 0.0;
};

// One analytic h-level step f(w) = exp(((2 ln w)^{1/m} + 1)^m / 2), ln w >= 2^{m-1}.
void apply_analytic(const Thresholds& th, RatioState& st) {
  const double m = th.m;
  const double u = 2.0 * st.x;  // ln(w^2) >= 2^m
  const double base = std::pow(u, 1.0 / m);
  const double omega = std::pow(1.0 + 1.0 / base, m - 1.0);
  // w * d(omega)/dw at this point
  const double womega_p = -((m - 1.0) / m) * 2.0 * std::pow(u, -1.0 / m - 1.0) *
                          std::pow(1.0 + 1.0 / base, m - 2.0);
  const double qf = ((omega * omega - omega + womega_p) / (omega * omega));
  st.q = qf + st.q / omega;
  st.r1 *= omega;
  st.x = 0.5 * std::pow(base + 1.0, m);
}

void apply_linear(double log_slope_h, RatioState& st) {
  // R1f = 1, Qf = 0: ratios unchanged.
  st.x += log_slope_h;
}

void apply_bridge(const PhiTildeM& tilde, const Thresholds& th, RatioState& st) {
  // f(w) = sqrt(rho(w^2)) in scaled coordinates tau = w^2 / E.
  const double tau = std::exp(2.0 * st.x - th.two_m);
  const auto b = tilde.bridge_at(tau);
  const double r1f = tau * b.dg / b.g;
  const double qf = b.g / (tau * b.dg) + 2.0 * b.g * b.d2g / (b.dg * b.dg) - 1.0;
  st.q = qf + st.q / r1f;
  st.r1 *= r1f;
  st.x = 0.5 * (th.three_m + std::log(b.g));
}

// Base ratios of h_j(s) = sqrt(Phi^{(j)}(s^2)) at ln s = xs.
RatioState base_ratios(double m, int j, double xs, YoungVariant variant) {
  const Thresholds th(m);
  RatioState st;
  st.x = xs;
  if (variant == YoungVariant::phi) {
    for (int i = 0; i < j; ++i) {
      if (2.0 * st.x >= th.two_m)
        apply_analytic(th, st);
      else
        apply_linear(0.5 * th.c, st);
    }
    return st;
  }
  PhiTildeM tilde(m);
  for (int i = 0; i < j; ++i) {
    const double u = 2.0 * st.x;
    if (u >= th.two_m)
      apply_analytic(th, st);
    else if (u > th.a_log)
      apply_bridge(tilde, th, st);
    else
      apply_linear(0.5 * th.c0, st);
  }
  return st;
}

}  // namespace

LogVal phi_iter(const IterSpec& spec, const LogVal& t) {
  if (t.is_zero()) return LogVal::zero();
  return LogVal::from_log(phi_iter_log(spec.m, spec.j, t.log(), spec.variant));
}

LogVal phi_iter_inv(const IterSpec& spec, const LogVal& s) {
  if (s.is_zero()) return LogVal::zero();
  return LogVal::from_log(phi_iter_inv_log(spec.m, spec.j, s.log(), spec.variant));
}

LogVal h_eval(const IterSpec& spec, const LogVal& t) {
  if (t.is_zero()) {
    if (spec.beta < 0.0) throw domain_error("h_eval: t = 0 with beta < 0");
    return LogVal::zero();
  }
  const double u = 2.0 * spec.beta * t.log();
  const double v = phi_iter_log(spec.m, spec.j, u, spec.variant);
  return LogVal::from_log(0.5 * v);
}

double h_log_deriv(const IterSpec& spec, const LogVal& t) {
  const RatioState st = base_ratios(spec.m, spec.j, spec.beta * t.log(), spec.variant);
  return spec.beta * st.r1;
}

HRatios h_ratios(const IterSpec& spec, const LogVal& t) {
  if (t.is_zero()) throw domain_error("h_ratios: t = 0");
  const RatioState st = base_ratios(spec.m, spec.j, spec.beta * t.log(), spec.variant);
  HRatios out;
  out.ratio1 = std::abs(spec.beta) * st.r1;
  out.ratio2 = (spec.beta - 1.0) / spec.beta / st.r1 + (st.q + 1.0);
  return out;
}

}  // namespace degen
