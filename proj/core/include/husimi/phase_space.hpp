#pragma once

#include <Eigen/Dense>

namespace husimi {

// Rectangular (q, p) sampling, node-centered with endpoints included.
struct PhaseSpaceGrid {
  double q_min = -40.0, q_max = 40.0;
  double p_min = -10.0, p_max = 10.0;
  int nq = 400, np = 200;

  PhaseSpaceGrid() = default;
  PhaseSpaceGrid(double qmin, double qmax, double pmin, double pmax, int nq_, int np_);

  double dq() const { return (q_max - q_min) / (nq - 1); }
  double dp() const { return (p_max - p_min) / (np - 1); }
  double q_at(int i) const { return q_min + i * dq(); }
  double p_at(int j) const { return p_min + j * dp(); }

  // Grid scaled about its center by `factor` (node counts scaled to keep
  // spacing roughly constant); used when the boundary-mass monitor trips.
  PhaseSpaceGrid expanded(double factor) const;
};

// Non-negative field over a PhaseSpaceGrid; values(i, j) at (q_at(i), p_at(j)).
struct HusimiField {
  PhaseSpaceGrid grid;
  Eigen::MatrixXd values;  // nq x np
  double time = 0.0;
};

// Trapezoid quadrature of the field over the full grid.
double field_mass(const HusimiField& field);

// Trapezoid quadrature of q^2 * field over the full grid.
double field_q2_moment(const HusimiField& field);

// Trapezoid quadrature of field^2.
double field_square_integral(const HusimiField& field);

// Fraction of the field mass carried by the outermost node ring.
// Used as a leakage monitor: a state pressing against the grid boundary
// invalidates moments computed on it.
double boundary_mass_fraction(const HusimiField& field);

}  // namespace husimi
