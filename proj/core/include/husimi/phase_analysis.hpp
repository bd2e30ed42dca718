#pragma once

#include <array>
#include <complex>
#include <vector>

#include "husimi/model.hpp"

namespace husimi {

enum class Stability { Center, Saddle };
const char* stability_name(Stability s);

struct FixedPointReport {
  PhasePoint location;
  std::array<std::complex<double>, 2> eigenvalues;
  Stability stability = Stability::Center;
  bool exists = false;
};

enum class TrajectoryClass { BoundedClosed, UnboundedQ, UnboundedP, Undetermined };
const char* trajectory_class_name(TrajectoryClass c);

struct Trajectory {
  std::vector<PhasePoint> points;
  std::vector<double> times;
  TrajectoryClass classification = TrajectoryClass::Undetermined;
};

// Second-order expansion p(q) = p0 + m1 (q - q0) + m2/2 (q - q0)^2 of the
// separatrix branch through a saddle, and the potential V_* at which the
// curvature coefficient m2 changes sign.
struct SeparatrixGeometry {
  double m1 = 0.0;
  double m2 = 0.0;
  double v_star = 0.0;
};

// All analytic fixed points with |q| <= q_window, |p| <= p_window.
// When the model's existence condition fails (Model I: |Delta| > 4 pi beta V,
// Model II: pi beta V > J) a single report with exists = false is returned.
// Requires V > 0.
std::vector<FixedPointReport> fixed_points(const ModelParams& params, double q_window,
                                           double p_window);

// Window defaults: one quasiperiod in q (|q| <= 1/(2 beta)), p in [-pi, pi].
std::vector<FixedPointReport> fixed_points(const ModelParams& params);

// Closed-form Jacobian eigenvalues +-sqrt(lambda^2) at a fixed point,
//   lambda^2 = -2 (2 pi beta)^2 V (J_L + J_R) cos p0 cos(2 pi beta q0)   (Model I / AA)
//   lambda^2 = -2 (2 pi beta)^2 V J cos p0 cos(2 pi beta q0)             (Model II)
// Rejects inputs where the flow magnitude exceeds 1e-9.
std::array<std::complex<double>, 2> jacobian_eigenvalues(const ModelParams& params, PhasePoint fp);

// Analytic classical critical potential:
//   ModelI      : 1/2 sqrt((J_L + J_R)^2 + 4 Delta^2 / (4 pi beta)^2)
//   ModelII     : 2J / sqrt(1 + (2 pi beta)^2)
//   HermitianAA : J (beta-independent)
double critical_potential(const ModelParams& params);

// Solves critical_potential(params with beta) == quantum_vc for beta in
// closed form. Errors when no real solution exists (Model I requires
// quantum_vc > (J_L + J_R)/2 and Delta != 0; Model II requires
// quantum_vc <= 2J; HermitianAA has no beta dependence).
double special_beta(const ModelParams& params, double quantum_vc);

// m1 from the unstable-eigenvector slope of the Jacobian, m2 from matching
// the second-order expansion of dp/dq = g/f, v_star from the closed form.
// Requires a saddle report.
SeparatrixGeometry separatrix_geometry(const ModelParams& params, const FixedPointReport& saddle);

// Max |g(q, p(q)) - m f(q, p(q))| over n_samples interior points of the
// straight chord between two saddles (m = chord slope). Exactly zero at
// V = V_c, strictly positive off-critical.
double separatrix_line_residual(const ModelParams& params, PhasePoint saddle_a,
                                PhasePoint saddle_b, int n_samples);

// Solves Gamma_R(saddle_1(V)) == Gamma_R(saddle_2(V)) for V by bisection on
// the analytic saddle branches; also asserts Gamma_I vanishes at both
// saddles. Agrees with critical_potential to 1e-10.
double saddle_energy_match(const ModelParams& params);

// Forward fixed-step RK4 integration of flow_field with first-crossing
// classification: |q - q0| > 3/(2 beta) => UnboundedQ, |p - p0| > 4 pi =>
// UnboundedP, return to within 1e-3 of the start (after having left) or
// never leaving => BoundedClosed, otherwise Undetermined.
Trajectory integrate_trajectory(const ModelParams& params, PhasePoint start, double t_final,
                                double dt, int record_stride = 1);

// Bisection on V of the "any probe trajectory unbounded in q" predicate;
// probe starts are sampled between adjacent saddles (fallback probes across
// one quasiperiod when no saddles exist at that V). Preconditions: the
// predicate differs between v_lo and v_hi.
double bracket_critical_potential(const ModelParams& params, double v_lo, double v_hi, double tol);

// 1/lambda_saddle with lambda_saddle the positive real Jacobian eigenvalue;
// +infinity when the saddle branches merge (lambda -> 0, e.g. Model I at
// beta V = |Delta|/(4 pi)). Errors when no fixed points exist.
double ehrenfest_time(const ModelParams& params);

}  // namespace husimi
