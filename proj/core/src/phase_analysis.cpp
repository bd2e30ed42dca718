#include "husimi/phase_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "husimi/errors.hpp"

namespace husimi {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double lambda_squared(const ModelParams& params, PhasePoint fp) {
  const double b2pi = kTwoPi * params.beta();
  const double theta = b2pi * fp.q;
  const double hop = (params.variant() == Variant::ModelII)
                         ? params.j()
                         : params.j_left() + params.j_right();
  return -2.0 * b2pi * b2pi * params.v() * hop * std::cos(fp.p) * std::cos(theta);
}

FixedPointReport make_report(const ModelParams& params, PhasePoint loc) {
  FixedPointReport rep;
  rep.location = loc;
  rep.exists = true;
  const double l2 = lambda_squared(params, loc);
  if (l2 > 0.0) {
    const double l = std::sqrt(l2);
    rep.eigenvalues = {std::complex<double>(l, 0.0), std::complex<double>(-l, 0.0)};
    rep.stability = Stability::Saddle;
  } else {
    const double l = std::sqrt(-l2);
    rep.eigenvalues = {std::complex<double>(0.0, l), std::complex<double>(0.0, -l)};
    rep.stability = Stability::Center;
  }
  return rep;
}

// All solutions of sin(x) = y inside |x| <= window.
std::vector<double> arcsin_branches(double y, double window) {
  std::vector<double> out;
  const double a = std::asin(std::clamp(y, -1.0, 1.0));
  for (int k = -static_cast<int>(window / kTwoPi) - 2;
       k <= static_cast<int>(window / kTwoPi) + 2; ++k) {
    const double x1 = a + kTwoPi * k;
    const double x2 = kPi - a + kTwoPi * k;
    if (std::abs(x1) <= window + 1e-12) out.push_back(x1);
    if (std::abs(x2) <= window + 1e-12) out.push_back(x2);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(),
                        [](double u, double v) { return std::abs(u - v) < 1e-12; }),
            out.end());
  return out;
}

// Multiples of pi inside |x| <= window.
std::vector<double> pi_multiples(double window) {
  std::vector<double> out;
  for (int n = -static_cast<int>(window / kPi) - 1; n <= static_cast<int>(window / kPi) + 1; ++n) {
    const double x = n * kPi;
    if (std::abs(x) <= window + 1e-12) out.push_back(x);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool is_even_pi_multiple(double x) {
  return std::abs(std::remainder(x, kTwoPi)) < 1e-9;
}

struct FlowHessian {
  double fqq = 0.0, fqp = 0.0, fpp = 0.0;
  double gqq = 0.0, gqp = 0.0, gpp = 0.0;
};

FlowHessian flow_hessian(const ModelParams& params, PhasePoint pt) {
  const double b2pi = kTwoPi * params.beta();
  const double theta = b2pi * pt.q;
  FlowHessian h;
  switch (params.variant()) {
    case Variant::ModelI:
      h.fpp = -(params.j_right() + params.j_left()) * std::sin(pt.p);
      h.gqq = 2.0 * b2pi * b2pi * b2pi * params.v() * std::sin(theta);
      h.gpp = -params.delta() * std::cos(pt.p);
      break;
    case Variant::ModelII:
      h.fqq = b2pi * b2pi * b2pi * params.v() * std::cos(theta);
      h.fpp = -2.0 * params.j() * std::sin(pt.p);
      h.gqq = b2pi * b2pi * b2pi * params.v() * std::sin(theta);
      break;
    case Variant::HermitianAA:
      h.fpp = -2.0 * params.j() * std::sin(pt.p);
      h.gqq = 2.0 * b2pi * b2pi * b2pi * params.v() * std::sin(theta);
      break;
  }
  return h;
}

// Analytic saddle pair (same separatrix branch) as a function of V.
// Returns false when the existence condition fails.
bool saddle_pair(const ModelParams& params, double v, PhasePoint& a, PhasePoint& b) {
  const double b2pi = kTwoPi * params.beta();
  switch (params.variant()) {
    case Variant::ModelI: {
      const double y = params.delta() / (2.0 * b2pi * v);  // Delta / (4 pi beta V)
      if (std::abs(y) > 1.0) return false;
      const double s = std::asin(y);
      a = {(kPi - s) / b2pi, 0.0};  // cos(theta) = -sqrt(1-y^2), p0 = 0
      b = {-s / b2pi, kPi};         // cos(theta) = +sqrt(1-y^2), p0 = pi
      return true;
    }
    case Variant::ModelII: {
      const double y = kPi * params.beta() * v / params.j();
      if (std::abs(y) > 1.0) return false;
      const double s = std::asin(y);
      a = {0.0, kPi - s};           // cos(p0) = -sqrt(1-y^2), theta = 0
      b = {kPi / b2pi, -s};         // cos(p0) = +sqrt(1-y^2), theta = pi
      return true;
    }
    case Variant::HermitianAA:
      a = {0.0, kPi};
      b = {kPi / b2pi, 0.0};
      return true;
  }
  return false;
}

enum class QuickClass { UnboundedQ, Other };

QuickClass classify_quick(const ModelParams& params, PhasePoint start, double horizon, double dt) {
  const double q_esc = 3.0 / (2.0 * params.beta());
  const double p_esc = 4.0 * kPi;
  double q = start.q, p = start.p;
  const int steps = static_cast<int>(horizon / dt);
  for (int k = 0; k < steps; ++k) {
    const FlowVelocity u1 = flow_field(params, {q, p});
    const FlowVelocity u2 = flow_field(params, {q + 0.5 * dt * u1.dq_dt, p + 0.5 * dt * u1.dp_dt});
    const FlowVelocity u3 = flow_field(params, {q + 0.5 * dt * u2.dq_dt, p + 0.5 * dt * u2.dp_dt});
    const FlowVelocity u4 = flow_field(params, {q + dt * u3.dq_dt, p + dt * u3.dp_dt});
    q += dt / 6.0 * (u1.dq_dt + 2.0 * u2.dq_dt + 2.0 * u3.dq_dt + u4.dq_dt);
    p += dt / 6.0 * (u1.dp_dt + 2.0 * u2.dp_dt + 2.0 * u3.dp_dt + u4.dp_dt);
    if (std::abs(q - start.q) > q_esc) return QuickClass::UnboundedQ;
    if (std::abs(p - start.p) > p_esc) return QuickClass::Other;
  }
  return QuickClass::Other;
}

std::vector<PhasePoint> probe_starts(const ModelParams& params, double v) {
  std::vector<PhasePoint> probes;
  PhasePoint a, b;
  if (saddle_pair(params, v, a, b)) {
    for (int k = 1; k <= 5; ++k) {
      const double f = k / 6.0;
      probes.push_back({a.q + f * (b.q - a.q), a.p + f * (b.p - a.p)});
    }
  } else {
    // No saddles at this V; span one quasiperiod at mid-band momentum.
    const double period = 1.0 / params.beta();
    for (int k = -2; k <= 2; ++k) probes.push_back({0.25 * k * period, 0.5 * kPi});
  }
  return probes;
}

bool any_unbounded_q(const ModelParams& params, double v,
                     const double horizon = 200.0, const double dt = 0.01) {
  const ModelParams at_v = params.with_v(v);
  for (const PhasePoint& s : probe_starts(at_v, v)) {
    if (classify_quick(at_v, s, horizon, dt) == QuickClass::UnboundedQ) return true;
  }
  return false;
}

}  // namespace

const char* stability_name(Stability s) {
  return s == Stability::Center ? "center" : "saddle";
}

const char* trajectory_class_name(TrajectoryClass c) {
  switch (c) {
    case TrajectoryClass::BoundedClosed: return "bounded_closed";
    case TrajectoryClass::UnboundedQ: return "unbounded_q";
    case TrajectoryClass::UnboundedP: return "unbounded_p";
    case TrajectoryClass::Undetermined: return "undetermined";
  }
  return "unknown";
}

std::vector<FixedPointReport> fixed_points(const ModelParams& params, double q_window,
                                           double p_window) {
  if (!(params.v() > 0.0))
    throw std::invalid_argument("fixed_points: requires V > 0");
  const double b2pi = kTwoPi * params.beta();
  const double theta_window = b2pi * q_window;
  std::vector<FixedPointReport> out;

  switch (params.variant()) {
    case Variant::ModelI: {
      const double y0 = params.delta() / (2.0 * b2pi * params.v());  // Delta/(4 pi beta V)
      if (std::abs(y0) > 1.0) {
        out.push_back(FixedPointReport{});  // exists = false
        return out;
      }
      for (double p0 : pi_multiples(p_window)) {
        const double y = is_even_pi_multiple(p0) ? y0 : -y0;
        for (double theta : arcsin_branches(y, theta_window))
          out.push_back(make_report(params, {theta / b2pi, p0}));
      }
      break;
    }
    case Variant::ModelII: {
      const double y0 = kPi * params.beta() * params.v() / params.j();
      if (std::abs(y0) > 1.0) {
        out.push_back(FixedPointReport{});
        return out;
      }
      for (double theta : pi_multiples(theta_window)) {
        const double y = is_even_pi_multiple(theta) ? y0 : -y0;
        for (double p0 : arcsin_branches(y, p_window))
          out.push_back(make_report(params, {theta / b2pi, p0}));
      }
      break;
    }
    case Variant::HermitianAA: {
      for (double p0 : pi_multiples(p_window))
        for (double theta : pi_multiples(theta_window))
          out.push_back(make_report(params, {theta / b2pi, p0}));
      break;
    }
  }
  std::sort(out.begin(), out.end(), [](const FixedPointReport& a, const FixedPointReport& b) {
    if (a.location.q != b.location.q) return a.location.q < b.location.q;
    return a.location.p < b.location.p;
  });
  return out;
}

std::vector<FixedPointReport> fixed_points(const ModelParams& params) {
  return fixed_points(params, 0.5 / params.beta(), kPi);
}

std::array<std::complex<double>, 2> jacobian_eigenvalues(const ModelParams& params,
                                                         PhasePoint fp) {
  const FlowVelocity u = flow_field(params, fp);
  if (std::hypot(u.dq_dt, u.dp_dt) > 1e-9)
    throw std::invalid_argument("jacobian_eigenvalues: input is not a fixed point");
  const double l2 = lambda_squared(params, fp);
  if (l2 >= 0.0) {
    const double l = std::sqrt(l2);
    return {std::complex<double>(l, 0.0), std::complex<double>(-l, 0.0)};
  }
  const double l = std::sqrt(-l2);
  return {std::complex<double>(0.0, l), std::complex<double>(0.0, -l)};
}

double critical_potential(const ModelParams& params) {
  const double b2pi = kTwoPi * params.beta();
  switch (params.variant()) {
    case Variant::ModelI: {
      const double s = params.j_left() + params.j_right();
      const double d = params.delta();
      return 0.5 * std::sqrt(s * s + d * d / (b2pi * b2pi));
    }
    case Variant::ModelII:
      return 2.0 * params.j() / std::sqrt(1.0 + b2pi * b2pi);
    case Variant::HermitianAA:
      return params.j();
  }
  throw std::logic_error("unreachable");
}

double special_beta(const ModelParams& params, double quantum_vc) {
  if (!(quantum_vc > 0.0))
    throw std::invalid_argument("special_beta: quantum_vc must be > 0");
  switch (params.variant()) {
    case Variant::ModelI: {
      const double s = params.j_left() + params.j_right();
      const double d = std::abs(params.delta());
      const double disc = 4.0 * quantum_vc * quantum_vc - s * s;
      if (d == 0.0)
        throw std::invalid_argument("special_beta: Model I with Delta == 0 has no beta dependence");
      if (!(disc > 0.0))
        throw std::invalid_argument(
            "special_beta: no real solution (requires quantum_vc > (J_L + J_R)/2)");
      return d / (kTwoPi * std::sqrt(disc));
    }
    case Variant::ModelII: {
      const double r = 2.0 * params.j() / quantum_vc;
      if (r < 1.0)
        throw std::invalid_argument("special_beta: no real solution (requires quantum_vc <= 2J)");
      return std::sqrt(r * r - 1.0) / kTwoPi;
    }
    case Variant::HermitianAA:
      throw std::invalid_argument("special_beta: critical potential is beta-independent");
  }
  throw std::logic_error("unreachable");
}

SeparatrixGeometry separatrix_geometry(const ModelParams& params, const FixedPointReport& saddle) {
  if (!saddle.exists || saddle.stability != Stability::Saddle)
    throw std::invalid_argument("separatrix_geometry: requires an existing saddle report");
  const PhasePoint fp = saddle.location;
  const FlowJacobian jac = flow_jacobian(params, fp);
  const double lambda_plus = saddle.eigenvalues[0].real();
  if (std::abs(jac.fp) < 1e-12 || lambda_plus <= 0.0)
    throw std::invalid_argument("separatrix_geometry: degenerate Jacobian");

  SeparatrixGeometry geo;
  // Unstable eigenvector slope: J (1, m)^T = lambda (1, m)^T with fq ~ 0.
  geo.m1 = lambda_plus / jac.fp;

  const FlowHessian h = flow_hessian(params, fp);
  const double m1 = geo.m1;
  const double num = 0.5 * h.gqq + h.gqp * m1 + 0.5 * h.gpp * m1 * m1 -
                     m1 * (0.5 * h.fqq + h.fqp * m1 + 0.5 * h.fpp * m1 * m1);
  const double den = jac.fq + 1.5 * m1 * jac.fp - 0.5 * jac.gp;
  if (std::abs(den) < 1e-12)
    throw std::invalid_argument("separatrix_geometry: degenerate second-order matching");
  geo.m2 = num / den;
  geo.v_star = critical_potential(params);
  return geo;
}

double separatrix_line_residual(const ModelParams& params, PhasePoint saddle_a,
                                PhasePoint saddle_b, int n_samples) {
  if (n_samples < 1) throw std::invalid_argument("separatrix_line_residual: n_samples must be >= 1");
  const double dq = saddle_b.q - saddle_a.q;
  if (std::abs(dq) < 1e-12)
    throw std::invalid_argument("separatrix_line_residual: coincident saddles");
  const double m = (saddle_b.p - saddle_a.p) / dq;
  double worst = 0.0;
  for (int k = 1; k <= n_samples; ++k) {
    const double f = static_cast<double>(k) / (n_samples + 1);
    const PhasePoint pt{saddle_a.q + f * dq, saddle_a.p + f * m * dq};
    const FlowVelocity u = flow_field(params, pt);
    worst = std::max(worst, std::abs(u.dp_dt - m * u.dq_dt));
  }
  return worst;
}

double saddle_energy_match(const ModelParams& params) {
  PhasePoint a, b;
  auto mismatch = [&](double v) {
    if (!saddle_pair(params, v, a, b))
      throw std::invalid_argument("saddle_energy_match: no saddle pair at V=" + std::to_string(v));
    const ModelParams at_v = params.with_v(v);
    return gamma_split(at_v, a).gamma_r - gamma_split(at_v, b).gamma_r;
  };

  // Lowest V with saddles: Model I needs 4 pi beta V >= |Delta|,
  // Model II needs pi beta V <= J (upper bound instead).
  double lo = 1e-9, hi = 1.0;
  const double b2pi = kTwoPi * params.beta();
  switch (params.variant()) {
    case Variant::ModelI:
      lo = std::abs(params.delta()) / (2.0 * b2pi) + 1e-12;
      hi = lo + 1.0;
      while (mismatch(lo) * mismatch(hi) > 0.0) {
        hi = lo + 2.0 * (hi - lo);
        if (hi > 1e6) throw std::runtime_error("saddle_energy_match: no sign change found");
      }
      break;
    case Variant::ModelII:
      lo = 1e-9;
      hi = params.j() / (kPi * params.beta()) - 1e-12;
      break;
    case Variant::HermitianAA:
      lo = 1e-9;
      hi = 2.0 * params.j() + 1.0;
      break;
  }

  double flo = mismatch(lo);
  if (flo * mismatch(hi) > 0.0)
    throw std::runtime_error("saddle_energy_match: energies do not cross in the existence range");
  for (int iter = 0; iter < 200 && hi - lo > 1e-14 * std::max(1.0, hi); ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double fm = mismatch(mid);
    if (fm == 0.0) { lo = hi = mid; break; }
    if (fm * flo > 0.0) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  const double v_match = 0.5 * (lo + hi);

  saddle_pair(params, v_match, a, b);
  const ModelParams at_v = params.with_v(v_match);
  if (std::abs(gamma_split(at_v, a).gamma_i) > 1e-12 ||
      std::abs(gamma_split(at_v, b).gamma_i) > 1e-12)
    throw std::runtime_error("saddle_energy_match: Gamma_I does not vanish at the saddles");
  return v_match;
}

Trajectory integrate_trajectory(const ModelParams& params, PhasePoint start, double t_final,
                                double dt, int record_stride) {
  if (!(dt > 0.0)) throw std::invalid_argument("integrate_trajectory: dt must be > 0");
  if (record_stride < 1) throw std::invalid_argument("integrate_trajectory: stride must be >= 1");

  const double q_esc = 3.0 / (2.0 * params.beta());
  const double p_esc = 4.0 * kPi;
  constexpr double eps_close = 1e-3;

  Trajectory traj;
  traj.points.push_back(start);
  traj.times.push_back(0.0);

  double q = start.q, p = start.p;
  bool departed = false;
  bool closed = false;
  TrajectoryClass escape = TrajectoryClass::Undetermined;

  const int steps = static_cast<int>(std::round(t_final / dt));
  for (int k = 1; k <= steps; ++k) {
    const FlowVelocity u1 = flow_field(params, {q, p});
    const FlowVelocity u2 = flow_field(params, {q + 0.5 * dt * u1.dq_dt, p + 0.5 * dt * u1.dp_dt});
    const FlowVelocity u3 = flow_field(params, {q + 0.5 * dt * u2.dq_dt, p + 0.5 * dt * u2.dp_dt});
    const FlowVelocity u4 = flow_field(params, {q + dt * u3.dq_dt, p + dt * u3.dp_dt});
    q += dt / 6.0 * (u1.dq_dt + 2.0 * u2.dq_dt + 2.0 * u3.dq_dt + u4.dq_dt);
    p += dt / 6.0 * (u1.dp_dt + 2.0 * u2.dp_dt + 2.0 * u3.dp_dt + u4.dp_dt);
    if (k % record_stride == 0 || k == steps) {
      traj.points.push_back({q, p});
      traj.times.push_back(k * dt);
    }
    if (escape == TrajectoryClass::Undetermined) {
      if (std::abs(q - start.q) > q_esc) escape = TrajectoryClass::UnboundedQ;
      else if (std::abs(p - start.p) > p_esc) escape = TrajectoryClass::UnboundedP;
    }
    const double dist = std::hypot(q - start.q, p - start.p);
    if (dist > 10.0 * eps_close) departed = true;
    else if (departed && dist < eps_close) closed = true;
  }

  if (escape != TrajectoryClass::Undetermined) traj.classification = escape;
  else if (closed || !departed) traj.classification = TrajectoryClass::BoundedClosed;
  else traj.classification = TrajectoryClass::Undetermined;
  return traj;
}

double bracket_critical_potential(const ModelParams& params, double v_lo, double v_hi,
                                  double tol) {
  if (!(v_lo > 0.0) || !(v_hi > v_lo))
    throw std::invalid_argument("bracket_critical_potential: need 0 < v_lo < v_hi");
  if (!(tol > 0.0)) throw std::invalid_argument("bracket_critical_potential: tol must be > 0");

  const bool lo_uq = any_unbounded_q(params, v_lo);
  const bool hi_uq = any_unbounded_q(params, v_hi);
  if (lo_uq == hi_uq)
    throw std::invalid_argument(
        "bracket_critical_potential: no classification change across the bracket");

  double lo = v_lo, hi = v_hi;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (any_unbounded_q(params, mid) == lo_uq) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

double ehrenfest_time(const ModelParams& params) {
  const auto reports = fixed_points(params);
  if (reports.empty() || !reports.front().exists)
    throw std::invalid_argument("ehrenfest_time: no fixed points exist");
  double lambda_max = 0.0;
  for (const auto& rep : reports) {
    if (rep.stability == Stability::Saddle)
      lambda_max = std::max(lambda_max, rep.eigenvalues[0].real());
  }
  // Saddle and center branches merged (lambda -> 0): within floating noise
  // of the merge, cos(theta_0) ~ sqrt(eps) and lambda^2/scale ~ 1e-8 even
  // though |y| < 1 formally holds.
  const double b2pi = kTwoPi * params.beta();
  const double hop = (params.variant() == Variant::ModelII)
                         ? params.j()
                         : params.j_left() + params.j_right();
  const double scale = 2.0 * b2pi * b2pi * params.v() * hop;
  if (lambda_max * lambda_max > 1e-14 * scale) return 1.0 / lambda_max;
  return std::numeric_limits<double>::infinity();
}

}  // namespace husimi
