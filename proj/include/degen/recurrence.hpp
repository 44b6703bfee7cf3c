#pragma once

#include <vector>

#include "degen/errors.hpp"

namespace degen {

/// theta-domain trace of the Moser recurrence b_{n+1} = Phi(K n^gamma b_n):
/// with theta = (ln b)^{1/m} the update is
///   beta_{n+1} = (beta_n^m + ln(K n^gamma))^{1/m} + 1.
/// Nothing but theta-domain arithmetic can represent the n-fold exponential
/// tower b_n.
struct RecurrenceTrace {
  double m = 0.0;
  double K = 0.0;
  double gamma = 0.0;
  double theta1 = 0.0;                 // (ln b_1)^{1/m}
  std::vector<double> betas;           // betas[n-1] = beta_n, n = 1..N
  /// alphas with the dominating constant folded in are formed on demand:
  /// alpha_n = theta1 + C_m (gamma + ln K) + (n - 1).
};

/// Run the recurrence for N steps (theta-domain only).
RecurrenceTrace run_recurrence(double m, double K, double gamma, double theta1, int N);

/// True iff alpha_n = theta1 + C_m (gamma + ln K) + (n-1) >= beta_n for all n
/// in the trace; theta-domain form of Phi^{(n-1)}(C*) >= b_n.  Requires m > 2.
bool cstar_verify(const RecurrenceTrace& trace, double C_m);

/// Smallest admissible C_m over the computed horizon:
/// sup_n (beta_n - theta1 - (n-1)) / (gamma + ln K).
double minimal_cm(const RecurrenceTrace& trace);

/// Divergence demonstration for m <= 2, K > e, gamma = 0: returns the log
/// values ln Phi^{(-(n-1))}(b_n) = (beta_n - (n-1))^m for n = 1..N (so the
/// first entry is ln b_1); the sequence increases without bound.
std::vector<double> failure_demo(double m, double K, int N);

}  // namespace degen
