#include "degen/recurrence.hpp"

#include <cmath>

namespace degen {

RecurrenceTrace run_recurrence(double m, double K, double gamma, double theta1, int N) {
  if (!(m > 1.0)) throw precondition_error("run_recurrence: requires m > 1");
  if (!(K > 1.0)) throw precondition_error("run_recurrence: requires K > 1");
  if (!(gamma >= 0.0)) throw precondition_error("run_recurrence: requires gamma >= 0");
  if (!(theta1 >= 2.0))
    throw precondition_error("run_recurrence: requires theta1 >= 2 (b_1 >= e^{2^m})");
  if (N < 1) throw precondition_error("run_recurrence: requires N >= 1");

  RecurrenceTrace tr;
  tr.m = m;
  tr.K = K;
  tr.gamma = gamma;
  tr.theta1 = theta1;
  tr.betas.reserve(static_cast<std::size_t>(N));
  double beta = theta1;
  tr.betas.push_back(beta);
  for (int n = 1; n < N; ++n) {
    const double L = std::log(K) + gamma * std::log(static_cast<double>(n));
    beta = std::pow(std::pow(beta, m) + L, 1.0 / m) + 1.0;
    tr.betas.push_back(beta);
  }
  return tr;
}

bool cstar_verify(const RecurrenceTrace& trace, double C_m) {
  if (!(trace.m > 2.0))
    throw precondition_error("cstar_verify: the domination lemma requires m > 2");
  const double shift = trace.theta1 + C_m * (trace.gamma + std::log(trace.K));
  for (std::size_t i = 0; i < trace.betas.size(); ++i) {
    const double alpha = shift + static_cast<double>(i);
    // 1e-12 relative slack so accumulated rounding cannot flip the comparison
    if (alpha < trace.betas[i] - 1e-12 * std::max(1.0, trace.betas[i])) return false;
  }
  return true;
}

double minimal_cm(const RecurrenceTrace& trace) {
  if (!(trace.m > 2.0)) throw precondition_error("minimal_cm: requires m > 2");
  const double denom = trace.gamma + std::log(trace.K);
  double sup = 0.0;
  for (std::size_t i = 0; i < trace.betas.size(); ++i) {
    const double drift = trace.betas[i] - trace.theta1 - static_cast<double>(i);
    sup = std::max(sup, drift / denom);
  }
  return sup;
}

std::vector<double> failure_demo(double m, double K, int N) {
  if (!(m <= 2.0)) throw precondition_error("failure_demo: requires m <= 2");
  if (!(K > std::exp(1.0))) throw precondition_error("failure_demo: requires K > e");
  const double theta1 = 2.0;  // b_1 = e^{2^m}
  const RecurrenceTrace tr = run_recurrence(m, K, /*gamma=*/0.0, theta1, N);
  std::vector<double> out;
  out.reserve(tr.betas.size());
  for (std::size_t i = 0; i < tr.betas.size(); ++i)
    out.push_back(std::pow(tr.betas[i] - static_cast<double>(i), m));
  return out;
}

}  // namespace degen
