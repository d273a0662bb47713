#include <doctest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "qmprob/classical.hpp"
#include "qmprob/moments.hpp"
#include "support.hpp"

using namespace qmprob;
using cd = std::complex<double>;

namespace {

std::vector<EvaluationPoint> sample_points() {
  std::vector<EvaluationPoint> pts;
  for (int i = 1; i <= 20; ++i)
    for (int j = -10; j <= 10; ++j) pts.push_back({{0.2 * j}, 0.1 * i});
  return pts;
}

Wavefunction packet(const Grid& g, double center) {
  return testing::gaussian(g, 1.0, 0.0, center);
}

}  // namespace

TEST_SUITE("classical") {
  TEST_CASE("Hamilton-Jacobi residual of exact actions") {
    const auto pts = sample_points();
    const HJReport free = hj_residual(free_action(1.3, 2.0), pts);
    CHECK(free.max_abs < 1e-14);
    CHECK(free.scale == doctest::Approx(1.69 / 4.0));
    CHECK(hj_residual(harmonic_action(1.0, 1.0, 1.0), pts).relative < 1e-10);
    CHECK(hj_residual(harmonic_action(-0.5, 2.0, 1.5), pts).relative < 1e-10);
  }

  TEST_CASE("a missing time term leaves the kinetic energy") {
    ClassicalAction a = free_action(2.0, 1.0);
    a.time_derivative = [](const Coordinates&, double) { return 0.0; };
    const HJReport r = hj_residual(a, sample_points());
    CHECK(r.max_abs == doctest::Approx(2.0));
    CHECK(r.relative == doctest::Approx(1.0));
  }

  TEST_CASE("adding c t to the action shifts the residual by |c|") {
    for (double c : {-0.7, 0.3, 2.0}) {
      ClassicalAction a = harmonic_action(1.0, 1.0, 1.0);
      const auto base = a.time_derivative;
      a.time_derivative = [=](const Coordinates& r, double t) { return base(r, t) + c; };
      CHECK(hj_residual(a, sample_points()).max_abs == doctest::Approx(std::abs(c)).epsilon(1e-9));
    }
  }

  TEST_CASE("two coordinates with separate masses") {
    // S = p1 x1 + p2 x2 − (p1²/2m1 + p2²/2m2) t
    ClassicalAction a;
    const double p1 = 0.5, p2 = -1.5, m1 = 1.0, m2 = 3.0;
    a.action = [=](const Coordinates& r, double t) {
      return p1 * r[0] + p2 * r[1] - (p1 * p1 / (2 * m1) + p2 * p2 / (2 * m2)) * t;
    };
    a.gradient = [=](const Coordinates&, double) { return Coordinates{p1, p2}; };
    a.time_derivative = [=](const Coordinates&, double) { return -(p1 * p1 / (2 * m1) + p2 * p2 / (2 * m2)); };
    a.masses = {m1, m2};
    std::vector<EvaluationPoint> pts = {{{0.0, 1.0}, 0.5}, {{2.0, -1.0}, 1.5}};
    CHECK(hj_residual(a, pts).max_abs < 1e-14);
    a.masses = {m1, m2, 1.0};
    CHECK_THROWS_AS(hj_residual(a, pts), InvalidArgument);

    ClassicalAction broken = free_action(1.0, 1.0);
    broken.gradient = [](const Coordinates&, double) { return Coordinates{NAN}; };
    CHECK_THROWS_AS(hj_residual(broken, pts), InvalidArgument);
  }

  TEST_CASE("classical trajectories against an independent integrator") {
    const Potential1D quartic = quartic_potential();
    const auto [x, p] = classical_trajectory(quartic, 1.0, 0.3, 1.0, 2.0);
    const auto ref = oracle::classical([](double q) { return -q * q * q; }, 1.0, 0.3, 1.0, 2.0);
    CHECK(x == doctest::Approx(ref.first).epsilon(1e-9));
    CHECK(p == doctest::Approx(ref.second).epsilon(1e-9));

    const auto [xh, ph] = classical_trajectory(harmonic_potential(1.0, 2.0), 1.0, 0.0, 1.0, 0.7);
    CHECK(xh == doctest::Approx(std::cos(1.4)).epsilon(1e-10));
    CHECK(ph == doctest::Approx(-2.0 * std::sin(1.4)).epsilon(1e-10));
  }

  TEST_CASE("harmonic packets follow the classical path") {
    const std::vector<double> widths = {0.2, 0.1, 0.05};
    std::vector<double> hbars;
    for (double w : widths) hbars.push_back(w * w);
    const ConvergenceTable t = classical_limit_study(harmonic_potential(1.0, 1.0), widths, hbars);
    REQUIRE(t.rows.size() == 3);
    for (const ConvergenceRow& r : t.rows) {
      CAPTURE(r.width);
      CHECK(r.deviation < 1e-6);
      CHECK(r.imaginary_part < 1e-8);
      CHECK_FALSE(r.truncated);
    }
    CHECK(std::isnan(t.rows[0].measured_order));
  }

  TEST_CASE("quartic deviation shrinks at second order in the width") {
    const std::vector<double> widths = {0.2, 0.1, 0.05};
    std::vector<double> hbars;
    for (double w : widths) hbars.push_back(w * w);
    const ConvergenceTable t = classical_limit_study(quartic_potential(), widths, hbars);
    for (std::size_t i = 1; i < t.rows.size(); ++i) {
      CHECK(t.rows[i].deviation < t.rows[i - 1].deviation);
      CHECK(t.rows[i].measured_order >= 1.5);
      CHECK(t.rows[i].measured_order <= 2.5);
    }

    std::ostringstream csv;
    write_convergence_csv(csv, t);
    CHECK(csv.str().rfind("width,hbar,t,deviation,measured_order\n", 0) == 0);

    CHECK_THROWS_AS(classical_limit_study(quartic_potential(), {0.1, 0.2}, {0.01, 0.04}), InvalidArgument);
    CHECK_THROWS_AS(classical_limit_study(quartic_potential(), {0.1}, {0.01, 0.04}), InvalidArgument);
  }

  TEST_CASE("free packet centre moves uniformly") {
    ClassicalLimitOptions o;
    o.p0 = 0.5;
    o.x0 = -1.0;
    const ConvergenceTable t = classical_limit_study(free_potential(), {0.3, 0.15}, {0.09, 0.0225}, o);
    for (const ConvergenceRow& r : t.rows) CHECK(r.deviation < 1e-8);
  }

  TEST_CASE("two free particles evolve as a product") {
    const Grid line = testing::line(-12.0, 12.0, 241);
    const Grid plane({line.axis(0), line.axis(0)}, GridOptions{2, Quadrature::trapezoid});
    const Wavefunction a = packet(line, -1.0), b = packet(line, 2.0);
    ComplexField prod(plane.size());
    for (Index i = 0; i < line.size(); ++i)
      for (Index j = 0; j < line.size(); ++j) prod(i * line.size() + j) = a.values()(i) * b.values()(j);
    const Wavefunction psi = Wavefunction::from_samples(plane, prod);
    const double m1 = 1.0, m2 = 2.0, dt = 5e-3;
    const Index n = 100;
    const Trajectory pair = two_particle_evolve(psi, m1, m2, RealField(RealField::Zero(plane.size())), dt, n, n);
    SchrodingerOptions o;
    o.dt = dt;
    o.steps = n;
    o.save_every = n;
    const ComplexField fa = evolve_schrodinger(a, RealField(RealField::Zero(line.size())), o).frames.back();
    const ComplexField fb =
        evolve_schrodinger(Wavefunction::adopt(line, b.values(), Constants{1.0, m2, 1.0}), RealField(RealField::Zero(line.size())), o)
            .frames.back();
    double worst = 0.0;
    for (Index i = 0; i < line.size(); ++i)
      for (Index j = 0; j < line.size(); ++j)
        worst = std::max(worst, std::abs(pair.frames.back()(i * line.size() + j) - fa(i) * fb(j)));
    CHECK(worst < 1e-4);
    CHECK(std::abs(pair.norm(1) - 1.0) < 1e-8);

    CHECK_THROWS_AS(two_particle_evolve(psi, 0.0, 1.0, RealField(RealField::Zero(plane.size())), dt, 1), InvalidArgument);
    CHECK_THROWS_AS(two_particle_evolve(a, 1.0, 1.0, RealField(RealField::Zero(line.size())), dt, 1), InvalidArgument);
  }

  TEST_CASE("coupled pair: centre of mass drifts freely") {
    // The lattice Laplacian does not separate centre and relative motion exactly,
    // so the drift error must vanish at second order in h.
    auto drift_error = [](Index n) {
      const Grid line = testing::line(-10.0, 10.0, n);
      const Grid plane({line.axis(0), line.axis(0)}, GridOptions{2, Quadrature::trapezoid});
      const RealField x = line.coordinate(0);
      ComplexField v(plane.size());
      RealField u(plane.size());
      for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) {
          const double x1 = x(i) + 1.0, x2 = x(j) - 1.0;
          v(i * n + j) = std::exp(-0.5 * (x1 * x1 + x2 * x2)) * std::polar(1.0, 0.5 * (x(i) + x(j)));
          u(i * n + j) = 0.5 * (x(i) - x(j)) * (x(i) - x(j));
        }
      const Trajectory tr = two_particle_evolve(Wavefunction::from_samples(plane, v), 1.0, 1.0, u, 2e-3, 500, 500);
      const RealField rho = tr.frames.back().cwiseAbs2();
      double s = 0.0;
      for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) s += 0.5 * (x(i) + x(j)) * rho(i * n + j);
      // Total momentum 1 shared by two unit masses: centre velocity 0.5.
      return std::abs(s * line.spacing(0) * line.spacing(0) - 0.5 * tr.times.back());
    };
    const double coarse = drift_error(201), fine = drift_error(401);
    CHECK(coarse < 1e-2);
    CHECK(oracle::order(coarse, fine) >= 1.8);
  }
}
