#pragma once

#include <Eigen/Dense>
#include <vector>

#include "husimi/model.hpp"
#include "husimi/phase_space.hpp"

namespace husimi {

// Truncated oscillator algebra: a, a†, and the quadratures
// q = (a† + a)/sqrt(2), p = i(a† - a)/sqrt(2) as N x N matrices.
struct FockOperators {
  int dim = 0;
  Eigen::MatrixXcd lowering;
  Eigen::MatrixXcd raising;
  Eigen::MatrixXcd position;
  Eigen::MatrixXcd momentum;
};

// Standard matrix elements a[n-1, n] = sqrt(n). Requires N >= 8.
FockOperators make_fock_operators(int N);

// Continuum Hamiltonian in the truncated number basis:
//   ModelI      : J_R expm(i p) + J_L expm(-i p) + 2V cosm(2 pi beta q)
//   ModelII     : 2J cosm(p) + V expm(-2 pi i beta q)
//   HermitianAA : 2J cosm(p) + 2V cosm(2 pi beta q)
// Matrix functions are evaluated by spectral decomposition of the Hermitian
// argument; p = T q T† with T = diag(i^n), so a single real-symmetric
// eigendecomposition of q serves both quadratures.
Eigen::MatrixXcd build_continuum_hamiltonian(const ModelParams& params, const FockOperators& ops);

// Linear test Hamiltonian kappa * q, bilinear-or-lower in a, a†. The
// semiclassical propagation is exact for it, which the exactness check uses.
Eigen::MatrixXcd linear_position_hamiltonian(const FockOperators& ops, double kappa);

// Renormalized non-unitary evolution of the vacuum:
//   psi(t) = e^{-i t H} |0>  /  || e^{-i t H} |0> ||
// realized as fixed-step 4th-order integration with per-step renormalization.
// Throws GuardError when the population in the top 10% of Fock levels
// exceeds 1e-6 at any requested sample (truncation-convergence guard).
Eigen::VectorXcd evolve_quantum(const Eigen::MatrixXcd& H, double t, double dt = 0.005);

// Same propagation, snapshotting at each strictly-increasing sample time.
std::vector<Eigen::VectorXcd> evolve_quantum_series(const Eigen::MatrixXcd& H,
                                                    const std::vector<double>& sample_times,
                                                    double dt = 0.005,
                                                    bool enforce_guard = true);

// Population in the top 10% of Fock levels; the truncation guard trips
// above 1e-6.
double top_level_population(const Eigen::VectorXcd& psi);

// Husimi distribution Q(q, p) = |<z|psi>|^2 at every grid node,
// z = (q + ip)/sqrt(2). The coherent-state overlap is evaluated with a
// rescaled log-domain recurrence that stays exact for arbitrarily large
// |z|^2; nodes whose entire overlap series underflows the double range
// return exact zeros.
HusimiField quantum_husimi(const Eigen::VectorXcd& psi, const PhaseSpaceGrid& grid,
                           double time = 0.0);

// Raw second q-moment of the field, Int q^2 Q / Int Q (trapezoid).
double husimi_variance(const HusimiField& field);

// Phase-space purity Int (Q / Int Q)^2.
double purity(const HusimiField& field);

}  // namespace husimi
