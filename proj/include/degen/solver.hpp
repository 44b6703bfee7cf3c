#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "degen/geometry.hpp"
#include "degen/grid.hpp"
#include "degen/iterates.hpp"
#include "degen/metric.hpp"
#include "degen/young.hpp"

namespace degen {

/// Diagonal coefficient field with the ellipticity sandwich
/// lambda <= a1 <= Lambda and lambda f(x)^2 <= a2 <= Lambda f(x)^2.
struct CoeffField {
  GridFunction a1, a2;
  double lambda = 1.0, Lambda = 1.0;

  /// a1 = 1 + amp g1, a2 = f^2 (1 + amp g2) with smooth bounded patterns;
  /// amp in [0, 1).
  static CoeffField from_profile(const ProfileFn& profile, const Grid2D& grid,
                                 double amp = 0.0);
};

/// Right-hand side pair phi_0 - div_A phi_1 with its admissible norm.
struct RhsPair {
  GridFunction phi0;
  GridFunction phi1x, phi1y;
  double phi_star = 0.0;

  static RhsPair zero(const Grid2D& grid);
};

struct SolveReport {
  GridFunction u;
  double residual = 0.0;  // relative algebraic residual
  int iterations = 0;
};

/// 5-point scheme with harmonic-mean face coefficients, Dirichlet data taken
/// from the boundary ring of `bc`, conjugate gradients with Jacobi
/// preconditioning.  The drift term is discretized as the adjoint of grad_A.
SolveReport assemble_and_solve(const ProfileFn& profile, const CoeffField& coeff,
                               const RhsPair& rhs, const GridFunction& bc,
                               double tol = 1e-10);

/// Interior residual rhs - L u (zero for exact discrete solutions); the sign
/// certificates below come from testing it against nonnegative test masses.
GridFunction weak_residual(const ProfileFn& profile, const CoeffField& coeff,
                           const RhsPair& rhs, const GridFunction& u);

struct Certificate {
  double min_residual = 0.0;
  double max_residual = 0.0;
  bool subsolution = false;    // residual >= -tol
  bool supersolution = false;  // residual <= +tol
};

Certificate certify(const ProfileFn& profile, const CoeffField& coeff,
                    const RhsPair& rhs, const GridFunction& u, double tol = 1e-8);

/// phi* = 2 C_Omega ||phi0||_{L^{Phi*}(dx)} + ||phi1||_inf, with C_Omega the
/// empirically measured global Sobolev constant.
double admissible_norm(double m, const RhsPair& rhs, double C_omega);

/// Which reverse-Sobolev variant to check: increasing h of u^+ on a
/// subsolution, increasing h of u^- on a supersolution, or (the
/// negative-power lemma) monotone h of u itself on a nonnegative
/// supersolution.
enum class CaccioppoliMode { sub_plus, super_minus, super_positive };

/// Minimal constant of the reverse Sobolev inequality
///   int psi^2 |grad_A h(v)|^2 <= C int h(v)^2 (|grad_A psi|^2 + psi^2),
/// v = u^{+/-} + phi*, on the given cutoff; h comes from the iterate family
/// (j = 0, beta = 1 is h(t) = t).  The sub/supersolution hypothesis is
/// machine-checked before anything is computed.
double caccioppoli_constant(const ProfileFn& profile, const CoeffField& coeff,
                            const RhsPair& rhs, const GridFunction& u,
                            const GridFunction& psi, const IterSpec& h_spec,
                            CaccioppoliMode mode = CaccioppoliMode::sub_plus);

struct LocalBoundDiag {
  double E = 0.0;                 // sup-to-L2 ratio of (u^+ + phi*)^beta
  double comparator_log = 0.0;    // (beta-1)^m + (ln phi(r)/((1-nu) r))^m
  double implied_constant = 0.0;  // ln E / comparator_log
  double nu0 = 0.0;
};

/// Theorem-form diagnostics for the positive-power local bound (beta >= 1).
LocalBoundDiag local_bound_check(const ProfileFn& profile, double m, double C_m,
                                 const MetricField& field, const GridFunction& u,
                                 double phi_star, double r, double nu, double beta);

/// Negative-power variant for nonnegative supersolutions (beta < 0);
/// comparator uses (|beta|+1)^m.  phi* = 0 inputs must be epsilon-regularized
/// by the caller.
LocalBoundDiag negative_power_check(const ProfileFn& profile, double m, double C_m,
                                    const MetricField& field, const GridFunction& u,
                                    double phi_star, double r, double nu, double beta);

struct MaxPrincipleDiag {
  double interior_max = 0.0;
  double boundary_max = 0.0;
  double implied_constant = 0.0;  // (interior - boundary)+ / phi*, 0 if phi* = 0
  bool exact = false;             // interior <= boundary
};

MaxPrincipleDiag max_principle_check(const GridFunction& u, double phi_star);

struct MoserChain {
  std::vector<double> s_log;  // ln s_j, j = 1..J
  std::vector<double> K_j;    // minimal K at each step j = 1..J-1
  double minimal_K = 0.0;
  double normalization = 0.0;  // the scaling a-tilde applied to u
};

/// s_j = int_{B_j} Phi^{(j-1)}(v^{2 beta}) dmu_j for the normalized
/// v = a u^+ + a phi* with ||v^beta||_{L^2(dmu_r)} = e^{2^{m-1}}; reports the
/// minimal K with s_{j+1} <= Phi(K j^{m+1} s_j).  The caller certifies u.
MoserChain moser_chain_check(const ProfileFn& profile, double m,
                             const MetricField& field, const GridFunction& u,
                             double phi_star, double r, double nu, double beta, int J);

/// a_j = Phi^{(-j)}( int_{D_j} Phi^{(j)}(|f|) domega ) on nested sets
/// D_j = {dist < radii[j-1]}, omega = Lebesgue cell measure.
std::vector<double> supnorm_recovery(const GridFunction& f, const MetricField& field,
                                     std::span<const double> radii, double m);

/// Nested radii decreasing from rho1 toward rho_inf like 1/j.
std::vector<double> nested_radii(double rho1, double rho_inf, int J);

}  // namespace degen
