#include <doctest.h>

#include <cmath>

#include "degen/iterates.hpp"
#include "degen/recurrence.hpp"
#include "degen/young.hpp"

using degen::cstar_verify;
using degen::failure_demo;
using degen::LogVal;
using degen::minimal_cm;
using degen::run_recurrence;

TEST_CASE("preconditions") {
  CHECK_THROWS_AS(run_recurrence(3.0, 2.0, 1.0, 1.5, 10), degen::precondition_error);
  CHECK_THROWS_AS(run_recurrence(3.0, 0.5, 1.0, 2.0, 10), degen::precondition_error);
  const auto tr = run_recurrence(2.0, 2.0, 1.0, 2.0, 10);
  CHECK_THROWS_AS(cstar_verify(tr, 1.0), degen::precondition_error);
  CHECK_THROWS_AS(minimal_cm(tr), degen::precondition_error);
  CHECK_THROWS_AS(failure_demo(3.0, 10.0, 10), degen::precondition_error);
  CHECK_THROWS_AS(failure_demo(2.0, 2.0, 10), degen::precondition_error);
}

TEST_CASE("one-step hand value: m=3, K=e, gamma=4, theta1=2") {
  const auto tr = run_recurrence(3.0, std::exp(1.0), 4.0, 2.0, 2);
  CHECK(tr.betas[0] == 2.0);
  CHECK(tr.betas[1] == doctest::Approx(std::cbrt(9.0) + 1.0).epsilon(1e-14));
  CHECK(tr.betas[1] == doctest::Approx(3.0801).epsilon(1e-4));
}

TEST_CASE("degenerate limit: K -> 1+, gamma -> 0+ gives beta_n = theta1 + n - 1") {
  const auto tr = run_recurrence(3.0, 1.0 + 1e-14, 0.0, 2.0, 50);
  for (std::size_t i = 0; i < tr.betas.size(); ++i)
    CHECK(tr.betas[i] == doctest::Approx(2.0 + static_cast<double>(i)).epsilon(1e-12));
  // the drift (= minimal C_m times gamma + ln K) vanishes in this limit
  CHECK(minimal_cm(tr) * (tr.gamma + std::log(tr.K)) < 1e-12);
  CHECK(cstar_verify(tr, 0.0));
}

TEST_CASE("rough lower bound beta_{n+1} >= n + beta_1 and monotonicity") {
  const auto tr = run_recurrence(3.0, std::exp(1.0), 4.0, 2.0, 2000);
  for (std::size_t i = 0; i + 1 < tr.betas.size(); ++i) {
    CHECK(tr.betas[i + 1] > tr.betas[i] + 1.0);
    CHECK(tr.betas[i + 1] >= static_cast<double>(i + 1) + tr.betas[0] - 1e-12);
  }
}

TEST_CASE("cstar domination and the minimal constant") {
  const auto tr = run_recurrence(3.0, std::exp(1.0), 4.0, 2.0, 10000);
  CHECK(cstar_verify(tr, 10.0));
  CHECK_FALSE(cstar_verify(tr, 0.0));
  const double cm = minimal_cm(tr);
  CHECK(cm > 0.0);
  CHECK(cm < 10.0);
  // minimal admissible constant verifies, anything smaller fails
  CHECK(cstar_verify(tr, cm + 1e-12));
  CHECK_FALSE(cstar_verify(tr, cm * 0.95));
}

TEST_CASE("minimal constant grows as m decreases toward 2") {
  const auto tr_low = run_recurrence(2.1, std::exp(1.0), 4.0, 2.0, 5000);
  const auto tr_high = run_recurrence(3.0, std::exp(1.0), 4.0, 2.0, 5000);
  CHECK(minimal_cm(tr_low) > minimal_cm(tr_high));
}

TEST_CASE("theta-domain trace equals direct LogVal iteration for n <= 30") {
  const double m = 3.0, K = std::exp(1.0), gamma = 4.0;
  const auto tr = run_recurrence(m, K, gamma, 2.0, 30);
  degen::PhiM phi(m);
  LogVal b = LogVal::from_log(std::pow(2.0, m));  // b_1 = e^{2^m}
  for (int n = 1; n <= 30; ++n) {
    const double theta = std::pow(b.log(), 1.0 / m);
    const double ref = tr.betas[static_cast<std::size_t>(n - 1)];
    CHECK(std::abs(theta - ref) < 1e-10 * std::max(1.0, std::abs(ref)));
    b = phi.eval(LogVal::from_value(K * std::pow(n, gamma)) * b);
  }
}

TEST_CASE("failure demo: m = 2, K = e^2 diverges; m = 3 contrast run stays put") {
  const auto seq = failure_demo(2.0, std::exp(2.0), 10000);
  // first entry is ln b_1 = 2^m
  CHECK(seq[0] == doctest::Approx(4.0));
  // log of Phi^{(-(n-1))}(b_n) grows without bound; value ratio >= 10x
  CHECK(seq[9999] - seq[9] > std::log(10.0));
  for (std::size_t i = 10; i < seq.size(); i += 500) CHECK(seq[i] > seq[i - 5]);

  // contrast: m = 3 with the same K stays bounded (drift converges)
  const auto tr3 = run_recurrence(3.0, std::exp(2.0), 0.0, 2.0, 10000);
  std::vector<double> unwound;
  for (std::size_t i = 0; i < tr3.betas.size(); ++i)
    unwound.push_back(std::pow(tr3.betas[i] - static_cast<double>(i), 3.0));
  CHECK(unwound.back() - unwound[9] < std::log(10.0));
  CHECK(unwound.back() < 40.0);
}
