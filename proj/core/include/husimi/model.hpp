#pragma once

#include <complex>

namespace husimi {

// The three lattice/continuum models handled by this library.
//
//   ModelI      : asymmetric hopping J_L != J_R, real quasiperiodic potential
//   ModelII     : symmetric hopping J, complex on-site potential V e^{-2 pi i beta q}
//   HermitianAA : symmetric hopping J, real quasiperiodic potential (Aubry-Andre)
enum class Variant { ModelI, ModelII, HermitianAA };

const char* variant_name(Variant v);

struct PhasePoint {
  double q = 0.0;
  double p = 0.0;
};

// Real/imaginary split of the classical Hamiltonian, H^c = Gamma_R + i Gamma_I.
struct ComplexEnergy {
  double gamma_r = 0.0;
  double gamma_i = 0.0;
};

// Couplings for one model instance. `delta()` is derived, never stored.
class ModelParams {
 public:
  static ModelParams model_i(double j_left, double j_right, double v, double beta);
  static ModelParams model_ii(double j, double v, double beta);
  static ModelParams hermitian_aa(double j, double v, double beta);

  Variant variant() const { return variant_; }
  double j_left() const { return j_left_; }
  double j_right() const { return j_right_; }
  double j() const { return j_; }
  double v() const { return v_; }
  double beta() const { return beta_; }
  double delta() const { return j_right_ - j_left_; }

  // Returns a copy with the potential strength replaced (used by sweeps).
  ModelParams with_v(double v) const;
  // Returns a copy with the incommensurability parameter replaced.
  ModelParams with_beta(double beta) const;

 private:
  ModelParams() = default;
  void validate() const;

  Variant variant_ = Variant::HermitianAA;
  double j_left_ = 0.0;
  double j_right_ = 0.0;
  double j_ = 0.0;
  double v_ = 0.0;
  double beta_ = 0.0;
};

// Classical Hamiltonian H^c at a phase-space point:
//   ModelI      : J_R e^{ip} + J_L e^{-ip} + 2V cos(2 pi beta q)
//   ModelII     : 2J cos p + V e^{-2 pi i beta q}
//   HermitianAA : 2J cos p + 2V cos(2 pi beta q)
std::complex<double> classical_hamiltonian(const ModelParams& params, PhasePoint pt);

// Gamma_R + i Gamma_I == classical_hamiltonian(params, pt).
ComplexEnergy gamma_split(const ModelParams& params, PhasePoint pt);

struct FlowVelocity {
  double dq_dt = 0.0;
  double dp_dt = 0.0;
};

// Reversed-time characteristic flow of the semiclassical Husimi transport,
//   dq/dt = -dGamma_R/dp + dGamma_I/dq
//   dp/dt = +dGamma_R/dq + dGamma_I/dp
// in hard-coded closed form per variant. Integrating this field forward
// from a query point for duration t yields the characteristic origin
// zeta_0; the distribution itself is transported along the negated field.
FlowVelocity flow_field(const ModelParams& params, PhasePoint pt);

// Closed-form Jacobian of flow_field, [[d(dq)/dq, d(dq)/dp], [d(dp)/dq, d(dp)/dp]].
struct FlowJacobian {
  double fq = 0.0, fp = 0.0;
  double gq = 0.0, gp = 0.0;
};
FlowJacobian flow_jacobian(const ModelParams& params, PhasePoint pt);

}  // namespace husimi
