#include "qmprob/classical.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "qmprob/moments.hpp"

namespace qmprob {

namespace {

double finite(double v, const char* what) {
  if (!std::isfinite(v)) throw InvalidArgument(std::string("hj_residual: non-finite ") + what);
  return v;
}

}  // namespace

HJReport hj_residual(const ClassicalAction& action, const std::vector<EvaluationPoint>& points) {
  if (!action.gradient || !action.time_derivative) throw InvalidArgument("hj_residual: action derivatives missing");
  if (action.masses.empty()) throw InvalidArgument("hj_residual: no masses");
  HJReport r;
  for (const EvaluationPoint& p : points) {
    const Coordinates grad = action.gradient(p.r, p.t);
    if (grad.size() != p.r.size()) throw InvalidArgument("hj_residual: gradient size mismatch");
    if (action.masses.size() != 1 && action.masses.size() != grad.size()) {
      throw InvalidArgument("hj_residual: one mass per coordinate required");
    }
    double kinetic = 0.0;
    for (std::size_t k = 0; k < grad.size(); ++k) {
      const double m = action.masses.size() == 1 ? action.masses[0] : action.masses[k];
      kinetic += finite(grad[k], "gradient") * grad[k] / (2.0 * m);
    }
    const double u = action.potential ? finite(action.potential(p.r, p.t), "potential") : 0.0;
    const double lhs = finite(action.time_derivative(p.r, p.t), "time derivative") + kinetic + action.charge * u;
    r.max_abs = std::max(r.max_abs, std::abs(lhs));
    r.scale = std::max(r.scale, std::abs(kinetic));
  }
  r.relative = r.scale > 0.0 ? r.max_abs / r.scale : r.max_abs;
  return r;
}

ClassicalAction free_action(double momentum, double mass) {
  ClassicalAction a;
  a.action = [=](const Coordinates& r, double t) { return momentum * r[0] - momentum * momentum * t / (2.0 * mass); };
  a.gradient = [=](const Coordinates&, double) { return Coordinates{momentum}; };
  a.time_derivative = [=](const Coordinates&, double) { return -momentum * momentum / (2.0 * mass); };
  a.masses = {mass};
  return a;
}

ClassicalAction harmonic_action(double x0, double mass, double omega) {
  // S = mω[(x² + x0²) cos ωt − 2 x x0] / (2 sin ωt)
  ClassicalAction a;
  a.action = [=](const Coordinates& r, double t) {
    const double x = r[0];
    return mass * omega * ((x * x + x0 * x0) * std::cos(omega * t) - 2.0 * x * x0) / (2.0 * std::sin(omega * t));
  };
  a.gradient = [=](const Coordinates& r, double t) {
    return Coordinates{mass * omega * (r[0] * std::cos(omega * t) - x0) / std::sin(omega * t)};
  };
  a.time_derivative = [=](const Coordinates& r, double t) {
    const double x = r[0];
    const double s = std::sin(omega * t);
    const double c = std::cos(omega * t);
    return -mass * omega * omega * ((x * x + x0 * x0) - 2.0 * x * x0 * c) / (2.0 * s * s);
  };
  a.potential = [=](const Coordinates& r, double) { return 0.5 * mass * omega * omega * r[0] * r[0]; };
  a.masses = {mass};
  return a;
}

Potential1D harmonic_potential(double mass, double omega) {
  return {[=](double x) { return 0.5 * mass * omega * omega * x * x; },
          [=](double x) { return mass * omega * omega * x; }};
}

Potential1D quartic_potential(double coefficient) {
  return {[=](double x) { return coefficient * x * x * x * x; },
          [=](double x) { return 4.0 * coefficient * x * x * x; }};
}

Potential1D free_potential() {
  return {[](double) { return 0.0; }, [](double) { return 0.0; }};
}

std::pair<double, double> classical_trajectory(const Potential1D& potential, double x0, double p0, double mass,
                                               double t_final, Index substeps) {
  if (substeps < 1) throw InvalidArgument("classical_trajectory: substeps must be positive");
  double x = x0;
  double p = p0;
  const double h = t_final / static_cast<double>(substeps);
  auto force = [&](double q) { return -potential.derivative(q); };
  for (Index s = 0; s < substeps; ++s) {
    const double k1x = p / mass, k1p = force(x);
    const double k2x = (p + 0.5 * h * k1p) / mass, k2p = force(x + 0.5 * h * k1x);
    const double k3x = (p + 0.5 * h * k2p) / mass, k3p = force(x + 0.5 * h * k2x);
    const double k4x = (p + h * k3p) / mass, k4p = force(x + h * k3x);
    x += h * (k1x + 2.0 * k2x + 2.0 * k3x + k4x) / 6.0;
    p += h * (k1p + 2.0 * k2p + 2.0 * k3p + k4p) / 6.0;
  }
  return {x, p};
}

ConvergenceTable classical_limit_study(const Potential1D& potential, const std::vector<double>& widths,
                                       const std::vector<double>& hbars, const ClassicalLimitOptions& options) {
  if (widths.empty() || widths.size() != hbars.size()) {
    throw InvalidArgument("classical_limit_study: need one hbar per width");
  }
  for (std::size_t i = 1; i < widths.size(); ++i) {
    if (!(widths[i] < widths[i - 1])) throw InvalidArgument("classical_limit_study: widths must decrease");
  }
  const Grid& g = options.grid;
  if (g.dims() != 1) throw InvalidArgument("classical_limit_study: one-dimensional grid required");
  const RealField x = g.coordinate(0);
  RealField u(x.size());
  for (Index i = 0; i < x.size(); ++i) u(i) = potential.value(x(i));
  const Index steps = static_cast<Index>(std::llround(options.t_final / options.dt));
  const auto [x_cl, p_cl] = classical_trajectory(potential, options.x0, options.p0, options.mass, options.t_final);

  const Index edge = std::max<Index>(2, g.size() / 20);
  ConvergenceTable table;
  for (std::size_t i = 0; i < widths.size(); ++i) {
    const double sigma = widths[i];
    Constants k;
    k.hbar = hbars[i];
    k.mass = options.mass;
    k.charge = 1.0;
    ComplexField psi(x.size());
    for (Index j = 0; j < x.size(); ++j) {
      const double d = x(j) - options.x0;
      psi(j) = std::exp(-d * d / (4.0 * sigma * sigma)) * std::polar(1.0, options.p0 * x(j) / k.hbar);
    }
    const Wavefunction psi0 = Wavefunction::from_samples(g, std::move(psi), k);
    const Trajectory tr = evolve_schrodinger_split(psi0, u, options.dt, steps, std::max<Index>(steps, 1));
    const Wavefunction last = tr.frame(tr.size() - 1);

    ConvergenceRow row;
    row.width = sigma;
    row.hbar = k.hbar;
    row.t = tr.times.back();
    row.deviation = std::abs(moment(last, 1) - x_cl);
    row.mean_momentum_deviation = std::abs(mean_momentum(last) - p_cl);
    const PolarFields polar = decompose(last);
    Index peak = 0;
    polar.rho.maxCoeff(&peak);
    row.momentum_deviation = std::abs(k.hbar * polar.grad_s1[0](peak) - p_cl);
    const ComplexField h_psi = apply_hamiltonian(last, u);
    row.imaginary_part = std::abs(integrate(ComplexField(last.values().conjugate().cwiseProduct(h_psi)), g).imag());
    const RealField rho = last.density();
    const double edge_mass = (rho.head(edge).sum() + rho.tail(edge).sum()) * g.spacing(0);
    row.truncated = edge_mass > options.boundary_tolerance;
    row.measured_order = std::numeric_limits<double>::quiet_NaN();
    if (i > 0) {
      const ConvergenceRow& prev = table.rows.back();
      row.measured_order = std::log(prev.deviation / row.deviation) / std::log(prev.width / row.width);
    }
    table.rows.push_back(row);
  }
  return table;
}

void write_convergence_csv(std::ostream& out, const ConvergenceTable& table) {
  out << "width,hbar,t,deviation,measured_order\n";
  char buf[160];
  for (const ConvergenceRow& r : table.rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", r.width, r.hbar, r.t, r.deviation,
                  r.measured_order);
    out << buf;
  }
}

}  // namespace qmprob
