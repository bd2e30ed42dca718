#include "husimi/continuum.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "husimi/errors.hpp"

namespace husimi {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// cos/sin/exp of the position quadrature via its real-symmetric
// eigendecomposition q = U X U^T.
struct PositionSpectral {
  Eigen::MatrixXd U;
  Eigen::VectorXd x;

  explicit PositionSpectral(int N) {
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(N, N);
    for (int n = 0; n + 1 < N; ++n) {
      const double e = std::sqrt(0.5 * (n + 1));
      q(n, n + 1) = e;
      q(n + 1, n) = e;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(q);
    if (es.info() != Eigen::Success)
      throw std::runtime_error("position quadrature eigendecomposition failed");
    U = es.eigenvectors();
    x = es.eigenvalues();
  }

  Eigen::MatrixXd apply_real(const Eigen::VectorXd& fx) const {
    return U * fx.asDiagonal() * U.transpose();
  }
};

// Unitary T = diag(i^n) conjugating q into p: p = T q T†.
Eigen::MatrixXcd conjugate_to_momentum(const Eigen::MatrixXd& re, const Eigen::MatrixXd& im) {
  const int N = static_cast<int>(re.rows());
  Eigen::MatrixXcd out(N, N);
  static const std::complex<double> phase[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  for (int r = 0; r < N; ++r) {
    for (int c = 0; c < N; ++c) {
      // i^r * conj(i^c) = i^(r-c)
      const std::complex<double> f = phase[((r - c) % 4 + 4) % 4];
      out(r, c) = f * std::complex<double>(re(r, c), im(r, c));
    }
  }
  return out;
}

}  // namespace

FockOperators make_fock_operators(int N) {
  if (N < 8) throw std::invalid_argument("make_fock_operators: N must be >= 8");
  FockOperators ops;
  ops.dim = N;
  ops.lowering = Eigen::MatrixXcd::Zero(N, N);
  for (int n = 1; n < N; ++n) ops.lowering(n - 1, n) = std::sqrt(static_cast<double>(n));
  ops.raising = ops.lowering.adjoint();
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  ops.position = inv_sqrt2 * (ops.raising + ops.lowering);
  ops.momentum = std::complex<double>(0.0, inv_sqrt2) * (ops.raising - ops.lowering);
  return ops;
}

Eigen::MatrixXcd build_continuum_hamiltonian(const ModelParams& params, const FockOperators& ops) {
  const int N = ops.dim;
  const PositionSpectral spec(N);
  const double b2pi = kTwoPi * params.beta();

  switch (params.variant()) {
    case Variant::ModelI: {
      // expm(+i p) from cos/sin of the spectrum, rotated into the p basis.
      const Eigen::MatrixXd cosp = spec.apply_real(spec.x.array().cos().matrix());
      const Eigen::MatrixXd sinp = spec.apply_real(spec.x.array().sin().matrix());
      const Eigen::MatrixXcd exp_ip = conjugate_to_momentum(cosp, sinp);
      const Eigen::MatrixXcd cosq =
          spec.apply_real((b2pi * spec.x.array()).cos().matrix()).cast<std::complex<double>>();
      return params.j_right() * exp_ip + params.j_left() * exp_ip.adjoint() +
             2.0 * params.v() * cosq;
    }
    case Variant::ModelII: {
      const Eigen::MatrixXd cosp = spec.apply_real(spec.x.array().cos().matrix());
      const Eigen::MatrixXcd cosp_p =
          conjugate_to_momentum(cosp, Eigen::MatrixXd::Zero(N, N));
      const Eigen::MatrixXd cq = spec.apply_real((b2pi * spec.x.array()).cos().matrix());
      const Eigen::MatrixXd sq = spec.apply_real((b2pi * spec.x.array()).sin().matrix());
      // expm(-2 pi i beta q) = cosm(..) - i sinm(..)
      Eigen::MatrixXcd exp_mq(N, N);
      exp_mq.real() = cq;
      exp_mq.imag() = -sq;
      return 2.0 * params.j() * cosp_p + params.v() * exp_mq;
    }
    case Variant::HermitianAA: {
      const Eigen::MatrixXd cosp = spec.apply_real(spec.x.array().cos().matrix());
      const Eigen::MatrixXcd cosp_p =
          conjugate_to_momentum(cosp, Eigen::MatrixXd::Zero(N, N));
      const Eigen::MatrixXcd cosq =
          spec.apply_real((b2pi * spec.x.array()).cos().matrix()).cast<std::complex<double>>();
      return 2.0 * params.j() * cosp_p + 2.0 * params.v() * cosq;
    }
  }
  throw std::logic_error("unreachable");
}

Eigen::MatrixXcd linear_position_hamiltonian(const FockOperators& ops, double kappa) {
  return kappa * ops.position;
}

double top_level_population(const Eigen::VectorXcd& psi) {
  const int N = static_cast<int>(psi.size());
  const int start = (9 * N) / 10;
  double pop = 0.0;
  for (int n = start; n < N; ++n) pop += std::norm(psi(n));
  return pop;
}

std::vector<Eigen::VectorXcd> evolve_quantum_series(const Eigen::MatrixXcd& H,
                                                    const std::vector<double>& sample_times,
                                                    double dt, bool enforce_guard) {
  if (!(dt > 0.0)) throw std::invalid_argument("evolve_quantum: dt must be > 0");
  for (size_t k = 0; k < sample_times.size(); ++k) {
    if (sample_times[k] < 0.0)
      throw std::invalid_argument("evolve_quantum: sample times must be >= 0");
    if (k > 0 && sample_times[k] <= sample_times[k - 1])
      throw std::invalid_argument("evolve_quantum: sample times must be strictly increasing");
  }
  const int N = static_cast<int>(H.rows());
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(N);
  psi(0) = 1.0;

  Eigen::VectorXcd k1(N), k2(N), k3(N), k4(N), tmp(N);
  const std::complex<double> mi(0.0, -1.0);
  auto deriv = [&](const Eigen::VectorXcd& x, Eigen::VectorXcd& out) {
    out.noalias() = H * x;
    out *= mi;
  };

  std::vector<Eigen::VectorXcd> snapshots;
  snapshots.reserve(sample_times.size());
  double t = 0.0;
  size_t si = 0;
  auto maybe_snapshot = [&]() {
    while (si < sample_times.size() && std::abs(sample_times[si] - t) < 1e-9) {
      if (enforce_guard && top_level_population(psi) > 1e-6)
        throw GuardError("evolve_quantum: truncation guard tripped (top 10% Fock population > 1e-6) at t=" +
                         std::to_string(t));
      snapshots.push_back(psi);
      ++si;
    }
  };
  maybe_snapshot();

  while (si < sample_times.size()) {
    const double step = std::min(dt, sample_times[si] - t);
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

Eigen::VectorXcd evolve_quantum(const Eigen::MatrixXcd& H, double t, double dt) {
  if (t < 0.0) throw std::invalid_argument("evolve_quantum: t must be >= 0");
  if (t == 0.0) {
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(H.rows());
    psi(0) = 1.0;
    return psi;
  }
  return evolve_quantum_series(H, {t}, dt).front();
}

HusimiField quantum_husimi(const Eigen::VectorXcd& psi, const PhaseSpaceGrid& grid, double time) {
  const int N = static_cast<int>(psi.size());
  HusimiField field;
  field.grid = grid;
  field.time = time;
  field.values.resize(grid.nq, grid.np);

  constexpr double kRescale = 1e140;
  constexpr double kLogRescale = 322.36191301916641;  // ln(1e140)

  for (int i = 0; i < grid.nq; ++i) {
    const double q = grid.q_at(i);
    for (int j = 0; j < grid.np; ++j) {
      const double p = grid.p_at(j);
      const double z2 = 0.5 * (q * q + p * p);  // |z|^2
      // Underflow guard: when even the largest term of the overlap series,
      // ln|c_n| = -|z|^2/2 + n ln|z| - lnGamma(n+1)/2 at n = N-1, sits below
      // the double range, the value is an exact zero.
      if (z2 > static_cast<double>(N)) {
        const double lmax = -0.5 * z2 + 0.5 * (N - 1) * std::log(z2) - 0.5 * std::lgamma(N);
        if (lmax < -760.0) {
          field.values(i, j) = 0.0;
          continue;
        }
      }
      // <z|psi> = e^{-|z|^2/2} sum_n (z*)^n/sqrt(n!) psi_n via the recurrence
      // c_{n+1} = c_n z*/sqrt(n+1), carried as c_n = m e^{K} with m
      // renormalized into [1e-140, 1e140]; segments whose e^{K} underflows
      // contribute exact zeros. |c_n| <= 1 throughout, so e^{K} <= 1e140.
      // z = (q + ip)/sqrt(2), conjugated:
      const std::complex<double> zc(q / std::numbers::sqrt2, -p / std::numbers::sqrt2);
      std::complex<double> m(1.0, 0.0);
      double K = -0.5 * z2;
      double expK = K < -745.0 ? 0.0 : std::exp(K);
      std::complex<double> amp = expK * m * psi(0);
      for (int n = 1; n < N; ++n) {
        m *= zc / std::sqrt(static_cast<double>(n));
        const double a2 = std::norm(m);
        if (a2 > kRescale * kRescale) {
          m *= 1.0 / kRescale;
          K += kLogRescale;
          expK = K < -745.0 ? 0.0 : std::exp(K);
        } else if (a2 < 1.0 / (kRescale * kRescale)) {
          m *= kRescale;
          K -= kLogRescale;
          expK = K < -745.0 ? 0.0 : std::exp(K);
        }
        amp += expK * m * psi(n);
      }
      field.values(i, j) = std::norm(amp);
    }
  }
  return field;
}

double husimi_variance(const HusimiField& field) {
  const double mass = field_mass(field);
  if (!(mass > 0.0)) throw std::domain_error("husimi_variance: zero-mass field");
  return field_q2_moment(field) / mass;
}

double purity(const HusimiField& field) {
  const double mass = field_mass(field);
  if (!(mass > 0.0)) throw std::domain_error("purity: zero-mass field");
  return field_square_integral(field) / (mass * mass);
}

}  // namespace husimi
