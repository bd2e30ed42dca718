#include <doctest.h>

#include <cmath>
#include <numbers>

#include "husimi/phase_analysis.hpp"

using namespace husimi;

namespace {
constexpr double kGolden = 0.6180339887498949;
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;

ModelParams default_m1(double v) { return ModelParams::model_i(1.0, 0.5, v, kGolden); }

// Eigenvalues of the 2x2 finite-difference Jacobian of flow_field, the
// independent oracle for the closed-form lambda.
std::array<std::complex<double>, 2> fd_jacobian_eigenvalues(const ModelParams& m, PhasePoint fp) {
  const double h = 1e-6;
  auto f = [&](double q, double p) { return flow_field(m, {q, p}); };
  const double fq = (f(fp.q + h, fp.p).dq_dt - f(fp.q - h, fp.p).dq_dt) / (2 * h);
  const double fp_ = (f(fp.q, fp.p + h).dq_dt - f(fp.q, fp.p - h).dq_dt) / (2 * h);
  const double gq = (f(fp.q + h, fp.p).dp_dt - f(fp.q - h, fp.p).dp_dt) / (2 * h);
  const double gp = (f(fp.q, fp.p + h).dp_dt - f(fp.q, fp.p - h).dp_dt) / (2 * h);
  const std::complex<double> tr(fq + gp, 0.0);
  const std::complex<double> disc = tr * tr - 4.0 * std::complex<double>(fq * gp - fp_ * gq, 0.0);
  const std::complex<double> root = std::sqrt(disc);
  return {(tr + root) / 2.0, (tr - root) / 2.0};
}

const FixedPointReport* find_saddle_at_p(const std::vector<FixedPointReport>& fps, double p0) {
  for (const auto& fp : fps)
    if (fp.exists && fp.stability == Stability::Saddle && std::abs(fp.location.p - p0) < 1e-6)
      return &fp;
  return nullptr;
}

}  // namespace

TEST_CASE("fixed point enumeration and stability classes") {
  // Symmetric hopping collapses the Model I branches onto sin(2 pi beta q) = 0.
  {
    const auto m = ModelParams::model_i(1.0, 1.0, 0.4, kGolden);
    const auto fps = fixed_points(m);
    REQUIRE(!fps.empty());
    for (const auto& fp : fps) {
      REQUIRE(fp.exists);
      const double theta = kTwoPi * kGolden * fp.location.q;
      CHECK(std::abs(std::sin(theta)) < 1e-9);
      const auto u = flow_field(m, fp.location);
      CHECK(std::hypot(u.dq_dt, u.dp_dt) < 1e-9);
    }
  }

  // Default Model I portrait: every report is a genuine zero of the flow and
  // the eigenvalue structure matches its stability tag.
  {
    const auto m = default_m1(0.2);
    const auto fps = fixed_points(m);
    int saddles = 0, centers = 0;
    for (const auto& fp : fps) {
      REQUIRE(fp.exists);
      const auto u = flow_field(m, fp.location);
      CHECK(std::hypot(u.dq_dt, u.dp_dt) < 1e-9);
      if (fp.stability == Stability::Saddle) {
        ++saddles;
        CHECK(fp.eigenvalues[0].real() > 0.0);
        CHECK(fp.eigenvalues[1].real() < 0.0);
        CHECK(std::abs(fp.eigenvalues[0].imag()) < 1e-9);
      } else {
        ++centers;
        CHECK(std::abs(fp.eigenvalues[0].real()) < 1e-9);
        CHECK(fp.eigenvalues[0].imag() != 0.0);
      }
    }
    CHECK(saddles >= 2);
    CHECK(centers >= 2);
  }

  // Existence conditions.
  {
    const auto none = fixed_points(default_m1(0.01));  // 4 pi beta V < |Delta|
    REQUIRE(none.size() == 1);
    CHECK_FALSE(none.front().exists);

    const auto none2 = fixed_points(ModelParams::model_ii(1.0, 0.6, kGolden));  // pi beta V > 1
    REQUIRE(none2.size() == 1);
    CHECK_FALSE(none2.front().exists);
  }

  // Model II at the existence boundary: branches merge at p0 = +-pi/2.
  {
    const double v = 1.0 / (kPi * kGolden);
    const auto fps = fixed_points(ModelParams::model_ii(1.0, v, kGolden));
    bool merged = false;
    for (const auto& fp : fps)
      if (fp.exists && std::abs(std::abs(fp.location.p) - kPi / 2) < 1e-9) merged = true;
    CHECK(merged);
  }
}

TEST_CASE("closed-form Jacobian eigenvalues match the finite-difference oracle") {
  const std::vector<double> vs = {0.3, 0.6, 0.9};
  const std::vector<double> betas = {0.31, kGolden, 0.9};
  for (double v : vs) {
    for (double beta : betas) {
      for (auto m : {ModelParams::model_i(1.0, 0.5, v, beta),
                     ModelParams::hermitian_aa(1.0, v, beta),
                     ModelParams::model_ii(1.0, v / 3.0, beta)}) {
        const auto fps = fixed_points(m);
        for (const auto& fp : fps) {
          if (!fp.exists) continue;
          const auto closed = jacobian_eigenvalues(m, fp.location);
          const auto fd = fd_jacobian_eigenvalues(m, fp.location);
          const double scale = std::max(1.0, std::abs(closed[0]));
          // Pair by matching signs of the dominant part.
          const double err = std::min(std::abs(closed[0] - fd[0]), std::abs(closed[0] - fd[1]));
          CHECK(err / scale < 1e-6);
        }
      }
    }
  }
  CHECK_THROWS_AS(jacobian_eigenvalues(default_m1(0.4), PhasePoint{0.3, 0.7}),
                  std::invalid_argument);
}

TEST_CASE("analytic critical potentials") {
  CHECK(critical_potential(default_m1(0.5)) == doctest::Approx(0.752758077657).epsilon(1e-9));
  CHECK(critical_potential(ModelParams::model_ii(1.0, 0.5, kGolden)) ==
        doctest::Approx(0.498763760916).epsilon(1e-9));
  CHECK(critical_potential(ModelParams::hermitian_aa(1.0, 0.5, kGolden)) == 1.0);
  CHECK(critical_potential(ModelParams::hermitian_aa(1.0, 0.5, 0.123)) == 1.0);

  // Monotone decreasing in beta, limits (J_L+J_R)/2 and +infinity.
  double prev = 1e9;
  for (double beta : {0.05, 0.1, 0.3, 1.0, 5.0, 50.0}) {
    const double vc = critical_potential(ModelParams::model_i(1.0, 0.5, 0.5, beta));
    CHECK(vc < prev);
    prev = vc;
  }
  CHECK(critical_potential(ModelParams::model_i(1.0, 0.5, 0.5, 500.0)) ==
        doctest::Approx(0.75).epsilon(1e-6));
  CHECK(critical_potential(ModelParams::model_i(1.0, 0.5, 0.5, 1e-4)) > 100.0);
}

TEST_CASE("special beta closed forms") {
  const double b1 = special_beta(default_m1(0.5), 1.0);
  CHECK(b1 == doctest::Approx(1.0 / (kTwoPi * std::sqrt(7.0))).epsilon(1e-12));
  CHECK(std::abs(b1 - 0.060154914193) < 1e-9);

  const double b2 = special_beta(ModelParams::model_ii(1.0, 0.5, kGolden), 1.0);
  CHECK(b2 == doctest::Approx(std::sqrt(3.0) / kTwoPi).epsilon(1e-12));
  CHECK(std::abs(b2 - 0.275664447711) < 1e-9);

  CHECK(special_beta(ModelParams::model_ii(1.0, 0.5, kGolden), 2.0) == 0.0);

  // Consistency: plugging the solved beta back reproduces the target.
  CHECK(critical_potential(default_m1(0.5).with_beta(b1)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(critical_potential(ModelParams::model_ii(1.0, 0.5, kGolden).with_beta(b2)) ==
        doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(special_beta(default_m1(0.5), 0.7), std::invalid_argument);
  CHECK_THROWS_AS(special_beta(ModelParams::hermitian_aa(1.0, 0.5, kGolden), 1.0),
                  std::invalid_argument);
}

TEST_CASE("separatrix geometry") {
  // Hermitian AA at V = J: the unstable-eigenvector slope at the saddle
  // (0, pi) is -2 pi beta, the chord slope to the saddle (pi/(2 pi beta), 0).
  {
    const auto aa = ModelParams::hermitian_aa(1.0, 1.0, kGolden);
    const auto fps = fixed_points(aa);
    const FixedPointReport* s = nullptr;
    for (const auto& fp : fps)
      if (fp.exists && fp.stability == Stability::Saddle && std::abs(fp.location.q) < 1e-12 &&
          std::abs(fp.location.p - kPi) < 1e-12)
        s = &fp;
    REQUIRE(s != nullptr);
    const auto geo = separatrix_geometry(aa, *s);
    CHECK(geo.m1 == doctest::Approx(-kTwoPi * kGolden).epsilon(1e-12));
    CHECK(geo.v_star == doctest::Approx(1.0));
  }

  // Model I at V = V_*: m1 equals the chord slope between adjacent saddles.
  {
    const double vc = critical_potential(default_m1(0.5));
    const auto m = default_m1(vc);
    const auto fps = fixed_points(m);
    const auto* sa = find_saddle_at_p(fps, 0.0);
    const auto* sb = find_saddle_at_p(fps, kPi);
    REQUIRE(sa != nullptr);
    REQUIRE(sb != nullptr);
    const auto geo = separatrix_geometry(m, *sa);
    const double chord =
        (sb->location.p - sa->location.p) / (sb->location.q - sa->location.q);
    CHECK(std::abs(geo.m1 - chord) < 1e-8);
    CHECK(geo.v_star == doctest::Approx(vc).epsilon(1e-12));
  }

  // m2 changes sign across V_*. Model II saddles cease to exist above
  // 1.033 V_c (pi beta V = 1), so the probe stays within +-2% there.
  {
    for (auto base : {default_m1(0.5), ModelParams::model_ii(1.0, 0.3, kGolden)}) {
      const double vstar = critical_potential(base);
      const bool narrow = base.variant() == Variant::ModelII;
      double m2_below = 0.0, m2_above = 0.0;
      for (double fac : {narrow ? 0.98 : 0.95, narrow ? 1.02 : 1.05}) {
        const auto m = base.with_v(fac * vstar);
        const auto fps = fixed_points(m);
        const FixedPointReport* s = nullptr;
        for (const auto& fp : fps)
          if (fp.exists && fp.stability == Stability::Saddle) {
            s = &fp;
            break;
          }
        REQUIRE(s != nullptr);
        (fac < 1.0 ? m2_below : m2_above) = separatrix_geometry(m, *s).m2;
      }
      CHECK(m2_below * m2_above < 0.0);
    }
  }
}

TEST_CASE("separatrix chord residual vanishes exactly at V_c") {
  // Hermitian AA at V = J: the chord is an exact trajectory.
  {
    const auto aa = ModelParams::hermitian_aa(1.0, 1.0, kGolden);
    const PhasePoint a{kPi / (kTwoPi * kGolden), 0.0};
    const PhasePoint b{0.0, kPi};
    CHECK(separatrix_line_residual(aa, a, b, 64) < 1e-12);
    CHECK(separatrix_line_residual(ModelParams::hermitian_aa(1.0, 0.9, kGolden), a, b, 64) > 1e-3);
    CHECK(separatrix_line_residual(ModelParams::hermitian_aa(1.0, 1.1, kGolden), a, b, 64) > 1e-3);
  }

  // Model I: residual < 1e-8 at V_c, > 1e-3 at 0.9 and 1.1 V_c.
  {
    const double vc = critical_potential(default_m1(0.5));
    for (double fac : {1.0, 0.9, 1.1}) {
      const auto m = default_m1(fac * vc);
      const auto fps = fixed_points(m);
      const auto* sa = find_saddle_at_p(fps, 0.0);
      const auto* sb = find_saddle_at_p(fps, kPi);
      REQUIRE(sa != nullptr);
      REQUIRE(sb != nullptr);
      const double res = separatrix_line_residual(m, sa->location, sb->location, 64);
      if (fac == 1.0) CHECK(res < 1e-8);
      else CHECK(res > 1e-3);
    }
  }

  CHECK_THROWS_AS(separatrix_line_residual(default_m1(0.5), PhasePoint{1.0, 0.0},
                                           PhasePoint{1.0, 3.0}, 8),
                  std::invalid_argument);
}

TEST_CASE("saddle energy matching reproduces the critical potential") {
  // -2 + 2V = 2 - 2V at V = 1 for the Hermitian AA model.
  CHECK(saddle_energy_match(ModelParams::hermitian_aa(1.0, 0.5, kGolden)) ==
        doctest::Approx(1.0).epsilon(1e-10));

  const auto m1 = default_m1(0.5);
  CHECK(saddle_energy_match(m1) == doctest::Approx(critical_potential(m1)).epsilon(1e-10));

  const auto m2 = ModelParams::model_ii(1.0, 0.3, kGolden);
  CHECK(saddle_energy_match(m2) == doctest::Approx(critical_potential(m2)).epsilon(1e-10));

  // Gamma_I vanishes on the saddles themselves.
  const auto fps = fixed_points(default_m1(0.4));
  for (const auto& fp : fps) {
    if (!fp.exists || fp.stability != Stability::Saddle) continue;
    CHECK(std::abs(gamma_split(default_m1(0.4), fp.location).gamma_i) < 1e-12);
  }
}

TEST_CASE("trajectory integration and classification") {
  // Starting exactly on a center: stationary, classified bounded.
  {
    const auto m = default_m1(0.4);
    const auto fps = fixed_points(m);
    const FixedPointReport* center = nullptr;
    for (const auto& fp : fps)
      if (fp.exists && fp.stability == Stability::Center) center = &fp;
    REQUIRE(center != nullptr);
    const auto traj = integrate_trajectory(m, center->location, 20.0, 1e-3, 100);
    CHECK(traj.classification == TrajectoryClass::BoundedClosed);
    CHECK(std::hypot(traj.points.back().q - center->location.q,
                     traj.points.back().p - center->location.p) < 1e-6);
  }

  // Model I delocalized region: unbounded and unidirectional in q (the
  // drift direction is fixed once the transient has passed).
  {
    const auto m = default_m1(0.2);
    const auto traj = integrate_trajectory(m, {0.0, kPi / 2}, 50.0, 1e-3, 50);
    CHECK(traj.classification == TrajectoryClass::UnboundedQ);
    const double q_span = std::abs(traj.points.back().q - traj.points.front().q);
    CHECK(q_span > 3.0 / (2.0 * kGolden));
    int sign_flips = 0;
    int drift_sign = 0;
    for (size_t k = 1; k < traj.points.size(); ++k) {
      if (traj.times[k] < 5.0) continue;
      const double dq = traj.points[k].q - traj.points[k - 1].q;
      const int s = dq > 0 ? 1 : (dq < 0 ? -1 : 0);
      if (s != 0 && drift_sign != 0 && s != drift_sign) ++sign_flips;
      if (s != 0) drift_sign = s;
    }
    CHECK(sign_flips == 0);
  }

  // Model II at V = 1: q pins to (-pi/2 + 2 n pi)/(2 pi beta), p grows
  // linearly at rate 2 pi beta V.
  {
    const auto m = ModelParams::model_ii(1.0, 1.0, kGolden);
    const auto traj = integrate_trajectory(m, {0.3, 0.2}, 40.0, 1e-3, 10);
    CHECK(traj.classification == TrajectoryClass::UnboundedP);
    double qsum = 0.0;
    int count = 0;
    std::vector<double> late_t, late_p;
    for (size_t k = 0; k < traj.points.size(); ++k) {
      if (traj.times[k] < 30.0) continue;
      qsum += traj.points[k].q;
      ++count;
      late_t.push_back(traj.times[k]);
      late_p.push_back(traj.points[k].p);
    }
    const double qbar = qsum / count;
    const double pin = (-kPi / 2) / (kTwoPi * kGolden);
    double nearest = 1e9;
    for (int n = -3; n <= 3; ++n)
      nearest = std::min(nearest, std::abs(qbar - (pin + n * kPi / (kPi * kGolden))));
    CHECK(nearest < 0.05);

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t k = 0; k < late_t.size(); ++k) {
      sx += late_t[k]; sy += late_p[k];
      sxx += late_t[k] * late_t[k]; sxy += late_t[k] * late_p[k];
    }
    const double n = static_cast<double>(late_t.size());
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    // The pinning is only marginal at V = 1 (2 pi beta V barely exceeds the
    // kinetic amplitude); the tight large-V tolerance applies at V = 5.
    CHECK(slope == doctest::Approx(kTwoPi * kGolden * 1.0).epsilon(0.12));
  }
}

TEST_CASE("numeric bracketing agrees with the analytic critical potential") {
  const auto m1 = default_m1(0.5);
  const double vc1 = critical_potential(m1);
  CHECK(std::abs(bracket_critical_potential(m1, 0.4, 1.2, 0.005) - vc1) / vc1 < 0.05);

  const auto m2 = ModelParams::model_ii(1.0, 0.3, kGolden);
  const double vc2 = critical_potential(m2);
  CHECK(std::abs(bracket_critical_potential(m2, 0.25, 0.75, 0.004) - vc2) / vc2 < 0.05);

  const auto aa = ModelParams::hermitian_aa(1.0, 0.5, kGolden);
  CHECK(std::abs(bracket_critical_potential(aa, 0.5, 1.5, 0.008) - 1.0) < 0.05);

  CHECK_THROWS_AS(bracket_critical_potential(m1, 0.1, 0.2, 0.01), std::invalid_argument);
}

TEST_CASE("Hamiltonian conservation along Hermitian trajectories") {
  const auto aa = ModelParams::hermitian_aa(1.0, 0.8, kGolden);
  const auto traj = integrate_trajectory(aa, {0.4, 1.1}, 100.0, 1e-3, 1000);
  const double h0 = classical_hamiltonian(aa, traj.points.front()).real();
  for (const auto& pt : traj.points) {
    const double h = classical_hamiltonian(aa, pt).real();
    CHECK(std::abs(h - h0) / std::max(1.0, std::abs(h0)) < 1e-6);
  }
}

TEST_CASE("Ehrenfest time") {
  // Merged saddle-center branches: lambda -> 0 and t_E -> infinity.
  {
    const double v = std::abs(-0.5) / (2.0 * kTwoPi * kGolden);  // 4 pi beta V = |Delta|
    const auto m = default_m1(v);
    CHECK(std::isinf(ehrenfest_time(m)));
  }

  // Larger beta shortens the Ehrenfest window (Hermitian case), and
  // t_E scales as 1/lambda: quadrupling V doubles lambda and halves t_E.
  {
    const double t_small = ehrenfest_time(ModelParams::hermitian_aa(1.0, 0.5, 0.2));
    const double t_large = ehrenfest_time(ModelParams::hermitian_aa(1.0, 0.5, 0.4));
    CHECK(t_large < t_small);

    const double t_v = ehrenfest_time(ModelParams::hermitian_aa(1.0, 0.2, kGolden));
    const double t_4v = ehrenfest_time(ModelParams::hermitian_aa(1.0, 0.8, kGolden));
    CHECK(t_4v == doctest::Approx(0.5 * t_v).epsilon(1e-10));
  }

  CHECK_THROWS_AS(ehrenfest_time(default_m1(0.005)), std::invalid_argument);
}
