#include "husimi/semiclassical.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "husimi/continuum.hpp"
#include "husimi/errors.hpp"

namespace husimi {

namespace {

// One RK4 step of (q, p, log w) under a flow functor returning
// (dq/dt, dp/dt, dlogw/dt).
template <class Flow>
inline void rk4_step(Flow&& flow, double& q, double& p, double& lw, double dt) {
  double f1, g1, w1, f2, g2, w2, f3, g3, w3, f4, g4, w4;
  flow(q, p, f1, g1, w1);
  flow(q + 0.5 * dt * f1, p + 0.5 * dt * g1, f2, g2, w2);
  flow(q + 0.5 * dt * f2, p + 0.5 * dt * g2, f3, g3, w3);
  flow(q + dt * f3, p + dt * g3, f4, g4, w4);
  q += dt / 6.0 * (f1 + 2.0 * f2 + 2.0 * f3 + f4);
  p += dt / 6.0 * (g1 + 2.0 * g2 + 2.0 * g3 + g4);
  lw += dt / 6.0 * (w1 + 2.0 * w2 + 2.0 * w3 + w4);
}

template <class Flow>
CharacteristicResult integrate_characteristic(Flow&& flow, PhasePoint z, double t, double dt,
                                              double escape_bound) {
  CharacteristicResult res;
  res.final = z;
  double q = z.q, p = z.p, lw = 0.0;
  double elapsed = 0.0;
  while (elapsed < t - 1e-15) {
    const double step = std::min(dt, t - elapsed);
    rk4_step(flow, q, p, lw, step);
    elapsed += step;
    if (std::abs(q) > escape_bound || std::abs(p) > escape_bound) {
      res.escaped = true;
      break;
    }
  }
  res.origin = {q, p};
  res.log_norm = lw;
  return res;
}

struct ModelFlow {
  const ModelParams& params;
  void operator()(double q, double p, double& f, double& g, double& w) const {
    const FlowVelocity u = flow_field(params, {q, p});
    f = u.dq_dt;
    g = u.dp_dt;
    w = 2.0 * gamma_split(params, {q, p}).gamma_i;
  }
};

// kappa * q test Hamiltonian: Gamma_R = kappa q, Gamma_I = 0.
struct LinearFlow {
  double kappa;
  void operator()(double, double, double& f, double& g, double& w) const {
    f = 0.0;
    g = kappa;
    w = 0.0;
  }
};

template <class Flow>
std::vector<HusimiField> husimi_series_impl(Flow&& flow, const PhaseSpaceGrid& grid,
                                            const std::vector<double>& sample_times, double dt,
                                            double escape_bound, SemiclassicalDiagnostics* diag) {
  for (size_t k = 0; k < sample_times.size(); ++k) {
    if (sample_times[k] < 0.0)
      throw std::invalid_argument("semiclassical_husimi: sample times must be >= 0");
    if (k > 0 && sample_times[k] <= sample_times[k - 1])
      throw std::invalid_argument("semiclassical_husimi: sample times must be strictly increasing");
  }
  if (!(dt > 0.0)) throw std::invalid_argument("semiclassical_husimi: dt must be > 0");

  const int nq = grid.nq, np = grid.np;
  const size_t n_nodes = static_cast<size_t>(nq) * np;
  std::vector<double> q(n_nodes), p(n_nodes), lw(n_nodes, 0.0);
  std::vector<char> escaped(n_nodes, 0);
  for (int i = 0; i < nq; ++i)
    for (int j = 0; j < np; ++j) {
      q[i * np + j] = grid.q_at(i);
      p[i * np + j] = grid.p_at(j);
    }

  std::vector<HusimiField> out;
  out.reserve(sample_times.size());
  double t = 0.0;
  size_t n_escaped = 0;
  double max_lw = 0.0;

  auto snapshot = [&](double time) {
    HusimiField field;
    field.grid = grid;
    field.time = time;
    field.values.resize(nq, np);
    for (int i = 0; i < nq; ++i)
      for (int j = 0; j < np; ++j) {
        const size_t k = static_cast<size_t>(i) * np + j;
        if (escaped[k]) {
          field.values(i, j) = 0.0;
          continue;
        }
        const double z2 = 0.5 * (q[k] * q[k] + p[k] * p[k]);
        const double ex = -z2 + lw[k];
        field.values(i, j) = ex < -700.0 ? 0.0 : std::exp(ex);
        if (lw[k] > max_lw) max_lw = lw[k];
      }
    out.push_back(std::move(field));
  };

  size_t si = 0;
  while (si < sample_times.size() && std::abs(sample_times[si] - t) < 1e-12) {
    snapshot(sample_times[si]);
    ++si;
  }
  while (si < sample_times.size()) {
    const double step = std::min(dt, sample_times[si] - t);
    for (size_t k = 0; k < n_nodes; ++k) {
      if (escaped[k]) continue;
      rk4_step(flow, q[k], p[k], lw[k], step);
      if (std::abs(q[k]) > escape_bound || std::abs(p[k]) > escape_bound) {
        escaped[k] = 1;
        ++n_escaped;
      }
    }
    t += step;
    if (std::abs(sample_times[si] - t) < 1e-12) {
      snapshot(sample_times[si]);
      ++si;
    }
  }

  const double frac = static_cast<double>(n_escaped) / static_cast<double>(n_nodes);
  if (diag) {
    diag->escaped_fraction = frac;
    diag->max_log_norm = max_lw;
    // Step-halving check on a 5% node subsample, full horizon.
    if (!sample_times.empty() && sample_times.back() > 0.0) {
      double worst = 0.0;
      const double horizon = sample_times.back();
      for (size_t k = 0; k < n_nodes; k += 20) {
        PhasePoint z{grid.q_at(static_cast<int>(k) / np), grid.p_at(static_cast<int>(k) % np)};
        const auto coarse = integrate_characteristic(flow, z, horizon, dt, escape_bound);
        const auto fine = integrate_characteristic(flow, z, horizon, 0.5 * dt, escape_bound);
        if (coarse.escaped || fine.escaped) continue;
        worst = std::max(worst, std::max(std::abs(coarse.origin.q - fine.origin.q),
                                         std::abs(coarse.origin.p - fine.origin.p)));
      }
      diag->step_halving_error = worst;
    }
  }
  if (frac > 0.10)
    throw GuardError("semiclassical_husimi: escaped-node fraction exceeds 10%");
  return out;
}

}  // namespace

CharacteristicResult backward_characteristic(const ModelParams& params, PhasePoint z, double t,
                                             double dt, double escape_bound) {
  if (t < 0.0) throw std::invalid_argument("backward_characteristic: t must be >= 0");
  if (!(dt > 0.0)) throw std::invalid_argument("backward_characteristic: dt must be > 0");
  return integrate_characteristic(ModelFlow{params}, z, t, dt, escape_bound);
}

HusimiField semiclassical_husimi(const ModelParams& params, const PhaseSpaceGrid& grid, double t,
                                 double dt, SemiclassicalDiagnostics* diag) {
  return semiclassical_husimi_series(params, grid, {t}, dt, diag).front();
}

std::vector<HusimiField> semiclassical_husimi_series(const ModelParams& params,
                                                     const PhaseSpaceGrid& grid,
                                                     const std::vector<double>& sample_times,
                                                     double dt, SemiclassicalDiagnostics* diag) {
  return husimi_series_impl(ModelFlow{params}, grid, sample_times, dt, 1e3, diag);
}

ExactnessReport quadratic_exactness_check(double t) {
  if (t < 0.0) throw std::invalid_argument("quadratic_exactness_check: t must be >= 0");
  constexpr double kappa = 1.0;
  const PhaseSpaceGrid grid;  // defaults

  const FockOperators ops = make_fock_operators(160);
  const Eigen::MatrixXcd H = linear_position_hamiltonian(ops, kappa);
  const Eigen::VectorXcd psi = evolve_quantum(H, t, 0.005);
  const HusimiField quantum = quantum_husimi(psi, grid, t);

  const auto classical =
      husimi_series_impl(LinearFlow{kappa}, grid, {t}, 1e-3, 1e3, nullptr).front();

  ExactnessReport rep;
  rep.time = t;
  rep.max_abs_discrepancy = (quantum.values - classical.values).cwiseAbs().maxCoeff();
  return rep;
}

}  // namespace husimi
