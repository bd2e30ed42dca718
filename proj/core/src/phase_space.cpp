#include "husimi/phase_space.hpp"

#include <cmath>
#include <stdexcept>

namespace husimi {

PhaseSpaceGrid::PhaseSpaceGrid(double qmin, double qmax, double pmin, double pmax,
                               int nq_, int np_)
    : q_min(qmin), q_max(qmax), p_min(pmin), p_max(pmax), nq(nq_), np(np_) {
  if (nq < 2 || np < 2)
    throw std::invalid_argument("PhaseSpaceGrid: nq and np must be >= 2");
  if (!(q_max > q_min) || !(p_max > p_min))
    throw std::invalid_argument("PhaseSpaceGrid: max must exceed min on both axes");
}

PhaseSpaceGrid PhaseSpaceGrid::expanded(double factor) const {
  const double qc = 0.5 * (q_min + q_max), pc = 0.5 * (p_min + p_max);
  const double hq = 0.5 * (q_max - q_min) * factor, hp = 0.5 * (p_max - p_min) * factor;
  const int nq2 = static_cast<int>(std::lround(nq * factor));
  const int np2 = static_cast<int>(std::lround(np * factor));
  return PhaseSpaceGrid(qc - hq, qc + hq, pc - hp, pc + hp, nq2, np2);
}

namespace {

template <class F>
double trapezoid(const HusimiField& field, F&& weight) {
  const auto& g = field.grid;
  double sum = 0.0;
  for (int i = 0; i < g.nq; ++i) {
    const double wq = (i == 0 || i == g.nq - 1) ? 0.5 : 1.0;
    const double q = g.q_at(i);
    double row = 0.0;
    for (int j = 0; j < g.np; ++j) {
      const double wp = (j == 0 || j == g.np - 1) ? 0.5 : 1.0;
      row += wp * weight(q, field.values(i, j));
    }
    sum += wq * row;
  }
  return sum * g.dq() * g.dp();
}

}  // namespace

double field_mass(const HusimiField& field) {
  return trapezoid(field, [](double, double v) { return v; });
}

double field_q2_moment(const HusimiField& field) {
  return trapezoid(field, [](double q, double v) { return q * q * v; });
}

double field_square_integral(const HusimiField& field) {
  return trapezoid(field, [](double, double v) { return v * v; });
}

double boundary_mass_fraction(const HusimiField& field) {
  const auto& g = field.grid;
  double total = 0.0, edge = 0.0;
  for (int i = 0; i < g.nq; ++i) {
    for (int j = 0; j < g.np; ++j) {
      const double v = field.values(i, j);
      total += v;
      if (i == 0 || i == g.nq - 1 || j == 0 || j == g.np - 1) edge += v;
    }
  }
  return total > 0.0 ? edge / total : 0.0;
}

}  // namespace husimi
