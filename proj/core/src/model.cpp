#include "husimi/model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace husimi {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

const char* variant_name(Variant v) {
  switch (v) {
    case Variant::ModelI: return "model_i";
    case Variant::ModelII: return "model_ii";
    case Variant::HermitianAA: return "hermitian_aa";
  }
  return "unknown";
}

ModelParams ModelParams::model_i(double j_left, double j_right, double v, double beta) {
  ModelParams m;
  m.variant_ = Variant::ModelI;
  m.j_left_ = j_left;
  m.j_right_ = j_right;
  m.j_ = 0.5 * (j_left + j_right);
  m.v_ = v;
  m.beta_ = beta;
  m.validate();
  return m;
}

ModelParams ModelParams::model_ii(double j, double v, double beta) {
  ModelParams m;
  m.variant_ = Variant::ModelII;
  m.j_left_ = j;
  m.j_right_ = j;
  m.j_ = j;
  m.v_ = v;
  m.beta_ = beta;
  m.validate();
  return m;
}

ModelParams ModelParams::hermitian_aa(double j, double v, double beta) {
  ModelParams m;
  m.variant_ = Variant::HermitianAA;
  m.j_left_ = j;
  m.j_right_ = j;
  m.j_ = j;
  m.v_ = v;
  m.beta_ = beta;
  m.validate();
  return m;
}

void ModelParams::validate() const {
  if (!std::isfinite(beta_) || beta_ == 0.0)
    throw std::invalid_argument("ModelParams: beta must be finite and nonzero");
  if (beta_ < 0.0)
    throw std::invalid_argument("ModelParams: beta must be positive");
  if (!(v_ >= 0.0) || !std::isfinite(v_))
    throw std::invalid_argument("ModelParams: v must be finite and >= 0");
  if (!std::isfinite(j_left_) || !std::isfinite(j_right_) || !std::isfinite(j_))
    throw std::invalid_argument("ModelParams: hopping amplitudes must be finite");
  if (variant_ != Variant::ModelI && j_left_ != j_right_)
    throw std::invalid_argument("ModelParams: symmetric-hopping variant requires j_left == j_right");
}

ModelParams ModelParams::with_v(double v) const {
  ModelParams m = *this;
  m.v_ = v;
  m.validate();
  return m;
}

ModelParams ModelParams::with_beta(double beta) const {
  ModelParams m = *this;
  m.beta_ = beta;
  m.validate();
  return m;
}

std::complex<double> classical_hamiltonian(const ModelParams& params, PhasePoint pt) {
  const double theta = kTwoPi * params.beta() * pt.q;
  using namespace std::complex_literals;
  switch (params.variant()) {
    case Variant::ModelI:
      return params.j_right() * std::exp(1i * pt.p) + params.j_left() * std::exp(-1i * pt.p) +
             2.0 * params.v() * std::cos(theta);
    case Variant::ModelII:
      return 2.0 * params.j() * std::cos(pt.p) + params.v() * std::exp(-1i * theta);
    case Variant::HermitianAA:
      return 2.0 * params.j() * std::cos(pt.p) + 2.0 * params.v() * std::cos(theta);
  }
  throw std::logic_error("unreachable");
}

ComplexEnergy gamma_split(const ModelParams& params, PhasePoint pt) {
  const double theta = kTwoPi * params.beta() * pt.q;
  ComplexEnergy e;
  switch (params.variant()) {
    case Variant::ModelI:
      e.gamma_r = (params.j_right() + params.j_left()) * std::cos(pt.p) +
                  2.0 * params.v() * std::cos(theta);
      e.gamma_i = params.delta() * std::sin(pt.p);
      break;
    case Variant::ModelII:
      e.gamma_r = 2.0 * params.j() * std::cos(pt.p) + params.v() * std::cos(theta);
      e.gamma_i = -params.v() * std::sin(theta);
      break;
    case Variant::HermitianAA:
      e.gamma_r = 2.0 * params.j() * std::cos(pt.p) + 2.0 * params.v() * std::cos(theta);
      e.gamma_i = 0.0;
      break;
  }
  return e;
}

FlowVelocity flow_field(const ModelParams& params, PhasePoint pt) {
  const double b2pi = kTwoPi * params.beta();
  const double theta = b2pi * pt.q;
  FlowVelocity u;
  switch (params.variant()) {
    case Variant::ModelI:
      u.dq_dt = (params.j_right() + params.j_left()) * std::sin(pt.p);
      u.dp_dt = params.delta() * std::cos(pt.p) - 2.0 * b2pi * params.v() * std::sin(theta);
      break;
    case Variant::ModelII:
      u.dq_dt = 2.0 * params.j() * std::sin(pt.p) - b2pi * params.v() * std::cos(theta);
      u.dp_dt = -b2pi * params.v() * std::sin(theta);
      break;
    case Variant::HermitianAA:
      u.dq_dt = 2.0 * params.j() * std::sin(pt.p);
      u.dp_dt = -2.0 * b2pi * params.v() * std::sin(theta);
      break;
  }
  return u;
}

FlowJacobian flow_jacobian(const ModelParams& params, PhasePoint pt) {
  const double b2pi = kTwoPi * params.beta();
  const double theta = b2pi * pt.q;
  FlowJacobian j;
  switch (params.variant()) {
    case Variant::ModelI:
      j.fq = 0.0;
      j.fp = (params.j_right() + params.j_left()) * std::cos(pt.p);
      j.gq = -2.0 * b2pi * b2pi * params.v() * std::cos(theta);
      j.gp = -params.delta() * std::sin(pt.p);
      break;
    case Variant::ModelII:
      j.fq = b2pi * b2pi * params.v() * std::sin(theta);
      j.fp = 2.0 * params.j() * std::cos(pt.p);
      j.gq = -b2pi * b2pi * params.v() * std::cos(theta);
      j.gp = 0.0;
      break;
    case Variant::HermitianAA:
      j.fq = 0.0;
      j.fp = 2.0 * params.j() * std::cos(pt.p);
      j.gq = -2.0 * b2pi * b2pi * params.v() * std::cos(theta);
      j.gp = 0.0;
      break;
  }
  return j;
}

}  // namespace husimi
