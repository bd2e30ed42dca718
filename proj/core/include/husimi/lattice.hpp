#pragma once

#include <Eigen/Dense>
#include <vector>

#include "husimi/model.hpp"

namespace husimi {

// Normalized complex amplitudes over L lattice sites (L odd, center unique).
struct LatticeState {
  Eigen::VectorXcd amplitudes;
  int center_site = 0;  // (L+1)/2, 1-based
  double time = 0.0;

  int size() const { return static_cast<int>(amplitudes.size()); }
};

struct TransportRecord {
  std::vector<double> times;
  std::vector<double> sigma_sq;  // site^2 units, displacement from initial center
  double velocity_at_t = 0.0;    // sigma(t_last)/t_last
};

// L x L open-boundary Hamiltonian, site index j = 1..L:
//   ModelI      : superdiagonal J_L, subdiagonal J_R, diagonal 2V cos(2 pi beta j)
//   ModelII     : off-diagonals J, diagonal V e^{-2 pi i beta j}
//   HermitianAA : off-diagonals J, diagonal 2V cos(2 pi beta j)
// Rejects even L and L < 3.
Eigen::MatrixXcd build_lattice_hamiltonian(const ModelParams& params, int L);

// Unit-norm Gaussian packet psi_j ~ exp(-(j-(L+1)/2)^2 / 2). Rejects even L.
LatticeState coherent_initial_state(int L);

// Fixed-step 4th-order integration of i dpsi/dt = H psi with renormalization
// after every step; snapshots at `sample_times` (strictly increasing, within
// [0, t_final]). When `sample_times` is empty a single snapshot at t_final is
// returned. Throws GuardError if dt * max-row-sum(H) > 0.1.
std::vector<LatticeState> evolve_lattice(const Eigen::MatrixXcd& H, const LatticeState& state,
                                         double t_final, double dt,
                                         const std::vector<double>& sample_times = {});

// Sum_j m_j^2 |psi_j|^2 with m_j = j - (L+1)/2.
double sigma_squared_lattice(const LatticeState& state);

// sigma(t_eval) / t_eval; t_eval must be one of record.times.
double velocity(const TransportRecord& record, double t_eval);

// Probability carried by the outermost `edge_sites` sites on each side.
// The transport observables assume the packet stays far from the open
// boundaries; callers warn when this exceeds 1e-6.
double edge_mass(const LatticeState& state, int edge_sites = 20);

}  // namespace husimi
