#pragma once

#include <utility>

#include "degen/logval.hpp"
#include "degen/young.hpp"

namespace degen {

enum class YoungVariant { phi, phi_tilde };

/// Parameters of the Moser test functions h_{j,beta}(t) = sqrt(Phi^{(j)}(t^{2 beta})).
struct IterSpec {
  double m = 3.0;
  int j = 1;                // iteration depth, j = 0 means identity
  double beta = 1.0;        // beta < 0 or beta >= 1
  YoungVariant variant = YoungVariant::phi;

  IterSpec(double m_, int j_, double beta_ = 1.0,
           YoungVariant variant_ = YoungVariant::phi);
};

/// theta-domain handle for iterated compositions: on the analytic branch
/// composing the Young function is exactly theta -> theta + 1, with
/// theta = (ln t)^{1/m}; below E the composition multiplies by the linear
/// slope, tracked as a pending count.
struct ThetaRep {
  double m = 0.0;
  double theta = 0.0;       // valid once on the analytic branch
  double log_t = 0.0;       // always valid
  bool analytic = false;

  static ThetaRep from_logval(double m, const LogVal& t);
  LogVal to_logval() const;
};

/// Phi^{(j)}(t): linear slope F/E below E, theta -> theta + 1 above.
LogVal phi_iter(const IterSpec& spec, const LogVal& t);

/// Exact inverse of phi_iter (round-trip to 1e-12 in log-domain).
LogVal phi_iter_inv(const IterSpec& spec, const LogVal& s);

/// h_{j,beta}(t) = sqrt(Phi^{(j)}(t^{2 beta})).
LogVal h_eval(const IterSpec& spec, const LogVal& t);

/// Logarithmic derivative d ln h / d ln t = t h'(t) / h(t), signed by beta.
/// Also the first ratio below; exposed for derivative cross-checks.
double h_log_deriv(const IterSpec& spec, const LogVal& t);

struct HRatios {
  double ratio1;  // t |h'(t)| / h(t)
  double ratio2;  // Upsilon(t) / h'(t)^2, Upsilon = (h^2/2)'' = h h'' + h'^2
};

/// Analytic derivative ratios via the branch decomposition of the iterate
/// chain; one-sided (from the right) at branch junctions.
HRatios h_ratios(const IterSpec& spec, const LogVal& t);

}  // namespace degen
