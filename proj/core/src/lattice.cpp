#include "husimi/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "husimi/errors.hpp"

namespace husimi {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_odd(int L) {
  if (L < 3) throw std::invalid_argument("lattice size L must be >= 3");
  if (L % 2 == 0) throw std::invalid_argument("lattice size L must be odd");
}

// Compact tridiagonal view of H when the matrix is exactly tridiagonal;
// all three lattice variants are, and the banded product is ~L times
// cheaper than the dense one.
struct Bands {
  Eigen::VectorXcd diag, sup, sub;
  bool valid = false;
};

Bands extract_bands(const Eigen::MatrixXcd& H) {
  const auto n = H.rows();
  Bands b;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (std::abs(i - j) > 1 && H(i, j) != 0.0) return b;
    }
  }
  b.diag = H.diagonal();
  b.sup = H.diagonal(1);
  b.sub = H.diagonal(-1);
  b.valid = true;
  return b;
}

void banded_mul(const Bands& b, const Eigen::VectorXcd& x, Eigen::VectorXcd& out) {
  const auto n = x.size();
  out.noalias() = b.diag.cwiseProduct(x);
  out.head(n - 1) += b.sup.cwiseProduct(x.tail(n - 1));
  out.tail(n - 1) += b.sub.cwiseProduct(x.head(n - 1));
}

}  // namespace

Eigen::MatrixXcd build_lattice_hamiltonian(const ModelParams& params, int L) {
  require_odd(L);
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(L, L);
  using namespace std::complex_literals;
  for (int row = 0; row < L; ++row) {
    const int j = row + 1;  // site index 1..L
    const double theta = kTwoPi * params.beta() * j;
    switch (params.variant()) {
      case Variant::ModelI:
        H(row, row) = 2.0 * params.v() * std::cos(theta);
        break;
      case Variant::ModelII:
        H(row, row) = params.v() * std::exp(-1i * theta);
        break;
      case Variant::HermitianAA:
        H(row, row) = 2.0 * params.v() * std::cos(theta);
        break;
    }
    if (row + 1 < L) {
      const double hop_up = (params.variant() == Variant::ModelI) ? params.j_left() : params.j();
      const double hop_dn = (params.variant() == Variant::ModelI) ? params.j_right() : params.j();
      H(row, row + 1) = hop_up;
      H(row + 1, row) = hop_dn;
    }
  }
  return H;
}

LatticeState coherent_initial_state(int L) {
  require_odd(L);
  LatticeState s;
  s.center_site = (L + 1) / 2;
  s.amplitudes.resize(L);
  for (int row = 0; row < L; ++row) {
    const double m = (row + 1) - s.center_site;
    s.amplitudes(row) = std::exp(-0.5 * m * m);
  }
  s.amplitudes /= s.amplitudes.norm();
  s.time = 0.0;
  return s;
}

std::vector<LatticeState> evolve_lattice(const Eigen::MatrixXcd& H, const LatticeState& state,
                                         double t_final, double dt,
                                         const std::vector<double>& sample_times) {
  if (!(dt > 0.0)) throw std::invalid_argument("evolve_lattice: dt must be > 0");
  if (!(t_final >= dt)) throw std::invalid_argument("evolve_lattice: t_final must be >= dt");

  const double row_sum = H.cwiseAbs().rowwise().sum().maxCoeff();
  if (dt * row_sum > 0.1)
    throw GuardError("evolve_lattice: dt * max-row-sum(H) exceeds 0.1 stability guard");

  std::vector<double> samples = sample_times;
  if (samples.empty()) samples.push_back(t_final);
  for (size_t k = 0; k < samples.size(); ++k) {
    if (samples[k] < 0.0 || samples[k] > t_final + 1e-12)
      throw std::invalid_argument("evolve_lattice: sample time outside [0, t_final]");
    if (k > 0 && samples[k] <= samples[k - 1])
      throw std::invalid_argument("evolve_lattice: sample times must be strictly increasing");
  }

  const Bands bands = extract_bands(H);
  Eigen::VectorXcd psi = state.amplitudes;
  Eigen::VectorXcd k1(psi.size()), k2(psi.size()), k3(psi.size()), k4(psi.size()), tmp(psi.size());
  const std::complex<double> mi(0.0, -1.0);

  auto deriv = [&](const Eigen::VectorXcd& x, Eigen::VectorXcd& out) {
    if (bands.valid) {
      banded_mul(bands, x, out);
    } else {
      out.noalias() = H * x;
    }
    out *= mi;
  };

  std::vector<LatticeState> snapshots;
  snapshots.reserve(samples.size());
  double t = state.time;
  size_t si = 0;

  auto maybe_snapshot = [&]() {
    while (si < samples.size() && std::abs(samples[si] - t) < 1e-9) {
      LatticeState snap;
      snap.amplitudes = psi;
      snap.center_site = state.center_site;
      snap.time = samples[si];
      snapshots.push_back(std::move(snap));
      ++si;
    }
  };
  maybe_snapshot();

  while (si < samples.size()) {
    const double step = std::min(dt, samples[si] - t);
    deriv(psi, k1);
    tmp = psi + (0.5 * step) * k1;
    deriv(tmp, k2);
    tmp = psi + (0.5 * step) * k2;
    deriv(tmp, k3);
    tmp = psi + step * k3;
    deriv(tmp, k4);
    psi += (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    psi /= psi.norm();
    t += step;
    maybe_snapshot();
  }
  return snapshots;
}

double sigma_squared_lattice(const LatticeState& state) {
  double sum = 0.0;
  for (int row = 0; row < state.size(); ++row) {
    const double m = (row + 1) - state.center_site;
    sum += m * m * std::norm(state.amplitudes(row));
  }
  return sum;
}

double velocity(const TransportRecord& record, double t_eval) {
  for (size_t k = 0; k < record.times.size(); ++k) {
    if (std::abs(record.times[k] - t_eval) < 1e-9) {
      if (t_eval <= 0.0) throw std::invalid_argument("velocity: t_eval must be > 0");
      return std::sqrt(record.sigma_sq[k]) / t_eval;
    }
  }
  throw std::invalid_argument("velocity: t_eval is not a sample time of the record");
}

double edge_mass(const LatticeState& state, int edge_sites) {
  const int L = state.size();
  const int n = std::min(edge_sites, L / 2);
  double mass = 0.0;
  for (int row = 0; row < n; ++row) mass += std::norm(state.amplitudes(row));
  for (int row = L - n; row < L; ++row) mass += std::norm(state.amplitudes(row));
  return mass;
}

}  // namespace husimi
