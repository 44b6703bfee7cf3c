#include "degen/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <nlohmann/json.hpp>

namespace degen {

double iterlog(int k, double x) {
  if (k < 1) throw precondition_error("iterlog: requires k >= 1");
  if (!(x > 0.0)) throw domain_error("iterlog: requires x > 0");
  double v = std::log(1.0 / x);
  for (int level = 2; level <= k; ++level) {
    if (!(v > 0.0))
      throw domain_error("iterlog: level " + std::to_string(level) +
                         " undefined (previous level <= 0)");
    v = std::log(v);
  }
  if (!(v > 0.0))
    throw domain_error("iterlog: level " + std::to_string(k) + " is nonpositive");
  return v;
}

Geometry::Geometry(int k, double sigma) : k_(k), sigma_(sigma) {
  if (k < 1)
    throw precondition_error("Geometry: k >= 1 only (the k = 0 family is excluded)");
  if (!(sigma > 0.0)) throw precondition_error("Geometry: requires sigma > 0");
  // r_max: every iterated log >= 1.1, i.e. ln^{(k)}(1/r) >= 1.1.
  double t = 1.1;
  for (int i = 1; i < k; ++i) t = std::exp(t);
  r_max_ = std::exp(-t);
}

FDerivs Geometry::derivatives(double r) const {
  if (!(r > 0.0)) throw domain_error("Geometry::derivatives: r <= 0");
  // All iterated logs L_1..L_k must be positive.
  std::vector<double> L(static_cast<std::size_t>(k_) + 1);
  L[1] = std::log(1.0 / r);
  if (!(L[1] > 0.0)) throw domain_error("Geometry: ln(1/r) <= 0");
  for (int i = 2; i <= k_; ++i) {
    L[i] = std::log(L[i - 1]);
    if (!(L[i] > 0.0))
      throw domain_error("Geometry: iterated log level " + std::to_string(i) +
                         " is nonpositive at r = " + std::to_string(r));
  }

  FDerivs d;
  if (k_ == 1) {
    // F = (ln 1/r)^{1+sigma}
    const double Lr = L[1];
    d.F = std::pow(Lr, 1.0 + sigma_);
    d.dF = -(1.0 + sigma_) * std::pow(Lr, sigma_) / r;
    d.d2F = (1.0 + sigma_) * std::pow(Lr, sigma_) / (r * r) * (1.0 + sigma_ / Lr);
    d.f = std::exp(-d.F);
    return d;
  }

  // F = L_1 L_k^sigma;  F' = -F Lambda / (r L_1) with
  // Lambda = 1 + sigma / (L_2 ... L_k).
  double P = 1.0;  // product L_2 ... L_k
  for (int i = 2; i <= k_; ++i) P *= L[i];
  const double lambda = 1.0 + sigma_ / P;
  // Lambda' = (sigma / (r P)) * sum_{j=2..k} 1 / (L_1 ... L_j)
  double sum = 0.0;
  double prod = L[1];
  for (int j = 2; j <= k_; ++j) {
    prod *= L[j];
    sum += 1.0 / prod;
  }
  const double dlambda = sigma_ / (r * P) * sum;

  d.F = L[1] * std::pow(L[k_], sigma_);
  d.dF = -d.F * lambda / (r * L[1]);
  d.d2F = -d.dF * lambda / (r * L[1]) - d.F * dlambda / (r * L[1]) +
          d.F * lambda * (L[1] - 1.0) / (r * r * L[1] * L[1]);
  d.f = std::exp(-d.F);
  return d;
}

ProfileFn Geometry::profile() const {
  return [geom = *this](double r) { return geom.derivatives(r); };
}

nlohmann::json Geometry::to_json() const {
  return nlohmann::json{{"k", k_}, {"sigma", sigma_}};
}

Geometry Geometry::from_json(const nlohmann::json& j) {
  return Geometry(j.at("k").get<int>(), j.at("sigma").get<double>());
}

ProfileFn isotropic_profile() {
  return [](double) { return FDerivs{0.0, 0.0, 0.0, 1.0}; };
}

ProfileFn log_power_profile(double p) {
  if (!(p >= 1.0)) throw precondition_error("log_power_profile: requires p >= 1");
  return [p](double r) {
    if (!(r > 0.0 && r < 1.0)) throw domain_error("log_power_profile: r outside (0,1)");
    const double L = std::log(1.0 / r);
    FDerivs d;
    d.F = std::pow(L, p);
    d.dF = -p * std::pow(L, p - 1.0) / r;
    d.d2F = p * std::pow(L, p - 1.0) / (r * r) * (1.0 + (p - 1.0) / L);
    d.f = std::exp(-d.F);
    return d;
  };
}

bool StructuralReport::pass(double doubling_cap, double cond5_cap) const {
  return f_vanishes && signs_ok && doubling_constant <= doubling_cap && monotone_ok &&
         cond5_low >= 1.0 / cond5_cap && cond5_high <= cond5_cap;
}

StructuralReport structural_check(const ProfileFn& profile,
                                  std::span<const double> r_grid) {
  if (r_grid.size() < 3) throw precondition_error("structural_check: grid too small");
  std::vector<double> rs(r_grid.begin(), r_grid.end());
  std::sort(rs.begin(), rs.end());

  StructuralReport rep{};
  rep.signs_ok = true;
  rep.monotone_ok = true;
  rep.doubling_constant = 1.0;
  rep.cond5_low = std::numeric_limits<double>::infinity();
  rep.cond5_high = 0.0;

  double inv_prev = -std::numeric_limits<double>::infinity();
  double g_max = 0.0;
  for (double r : rs) {
    const FDerivs d = profile(r);
    if (!(d.dF < 0.0 && d.d2F > 0.0)) rep.signs_ok = false;
    // (3): comparability of |F'| over [r/2, 2r] (clipped to the grid range)
    for (int s = 0; s <= 8; ++s) {
      const double x = r * std::exp((s / 8.0 * 2.0 - 1.0) * std::log(2.0));
      if (x < rs.front() || x > rs.back()) continue;
      const double ratio = std::abs(profile(x).dF) / std::abs(d.dF);
      rep.doubling_constant = std::max(rep.doubling_constant, std::max(ratio, 1.0 / ratio));
    }
    // (4): 1/(-r F') nondecreasing in r and bounded
    const double g = 1.0 / (-r * d.dF);
    if (g < inv_prev * (1.0 - 1e-12)) rep.monotone_ok = false;
    inv_prev = std::max(inv_prev, g);
    g_max = std::max(g_max, g);
    // (5): r F'' / (-F') within constants
    const double c5 = r * d.d2F / (-d.dF);
    rep.cond5_low = std::min(rep.cond5_low, c5);
    rep.cond5_high = std::max(rep.cond5_high, c5);
  }
  rep.epsilon = 1.0 / g_max;
  // (1): F increases towards r = 0 and is large at the small end.
  rep.f_vanishes = profile(rs.front()).F > profile(rs.back()).F && profile(rs.front()).F > 1.0;
  return rep;
}

double log_superradius(const SuperradiusSpec& spec, double r) {
  const FDerivs d = spec.profile(r);
  // elliptic stubs (F constant) degenerate to the classical radius scaling
  if (d.dF == 0.0 && d.d2F == 0.0) return std::log(r);
  if (!(d.dF < 0.0 && d.d2F > 0.0))
    throw domain_error("superradius: profile not degenerate-convex at this r");
  const double x = d.dF * d.dF / d.d2F;
  return -std::log(std::abs(d.dF)) + spec.C_m * std::pow(x + 1.0, spec.m - 1.0);
}

double superradius(const SuperradiusSpec& spec, double r) {
  return std::exp(log_superradius(spec, r));
}

double superradius_monotonicity_defect(const SuperradiusSpec& spec,
                                       std::span<const double> r_grid) {
  std::vector<double> rs(r_grid.begin(), r_grid.end());
  std::sort(rs.begin(), rs.end());
  double worst = 0.0;
  double prev = log_superradius(spec, rs.front());
  for (std::size_t i = 1; i < rs.size(); ++i) {
    const double cur = log_superradius(spec, rs[i]);
    worst = std::min(worst, cur - prev);
    prev = cur;
  }
  return worst;
}

double ball_volume_estimate(const ProfileFn& profile, double r) {
  const FDerivs d = profile(r);
  return d.f / (d.dF * d.dF);
}

std::vector<double> log_grid(double lo, double hi, int n) {
  if (!(lo > 0.0 && hi > lo && n >= 2)) throw precondition_error("log_grid: bad range");
  std::vector<double> g(static_cast<std::size_t>(n));
  const double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < n; ++i)
    g[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * i / (n - 1));
  return g;
}

}  // namespace degen
