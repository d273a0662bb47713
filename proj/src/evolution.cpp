#include "qmprob/evolution.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <unsupported/Eigen/FFT>

#include "qmprob/moments.hpp"

namespace qmprob {

namespace {

using cd = std::complex<double>;
using SpMat = Eigen::SparseMatrix<cd>;
using Triplets = std::vector<Eigen::Triplet<cd>>;
using SparseSolver = Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>>;

void require_stepping(double dt, Index steps, Index save_every) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("dt must be positive");
  if (steps < 0) throw InvalidArgument("steps must be non-negative");
  if (save_every < 1) throw InvalidArgument("save_every must be at least 1");
}

Index axis_index(const Grid& g, Index flat, int axis) { return (flat / g.stride(axis)) % g.points(axis); }

// Three-point kinetic term (−iħ∂ − qA)²/2m along one axis with Peierls phases.
void add_kinetic(Triplets& t, const Grid& g, int axis, double mass, double hbar, double charge,
                 const RealField* a_field, double sign) {
  const double h = g.spacing(axis);
  const double coef = sign * hbar * hbar / (2.0 * mass * h * h);
  const Index n = g.points(axis);
  const Index s = g.stride(axis);
  for (Index i = 0; i < g.size(); ++i) {
    t.emplace_back(i, i, 2.0 * coef);
    if (axis_index(g, i, axis) + 1 >= n) continue;
    const Index j = i + s;
    const double theta = a_field ? charge * 0.5 * ((*a_field)(i) + (*a_field)(j)) * h / hbar : 0.0;
    t.emplace_back(i, j, -coef * std::polar(1.0, -theta));
    t.emplace_back(j, i, -coef * std::polar(1.0, theta));
  }
}

struct HamiltonianSpec {
  std::vector<int> axes;
  std::vector<double> masses;  // per axis in `axes`
  double hbar = 1.0;
  double charge = 0.0;
  const VectorPotential* vector_potential = nullptr;
  const RealField* potential = nullptr;
  EnergyBranch branch = EnergyBranch::positive;
};

SpMat build_hamiltonian(const Grid& g, const HamiltonianSpec& spec) {
  Triplets t;
  const double sign = spec.branch == EnergyBranch::positive ? 1.0 : -1.0;
  for (std::size_t k = 0; k < spec.axes.size(); ++k) {
    const int a = spec.axes[k];
    const RealField* af = spec.vector_potential ? &(*spec.vector_potential)[static_cast<std::size_t>(a)] : nullptr;
    add_kinetic(t, g, a, spec.masses[k], spec.hbar, spec.charge, af, sign);
  }
  if (spec.potential) {
    for (Index i = 0; i < g.size(); ++i) t.emplace_back(i, i, spec.charge * (*spec.potential)(i));
  }
  SpMat h(g.size(), g.size());
  h.setFromTriplets(t.begin(), t.end());
  return h;
}

SpMat identity(Index n) {
  SpMat id(n, n);
  id.setIdentity();
  return id;
}

// Crank–Nicolson propagator (I + iτH/2ħ)⁻¹(I − iτH/2ħ).
class CrankNicolson {
 public:
  CrankNicolson(const SpMat& h, double tau, double hbar) {
    const cd a(0.0, 0.5 * tau / hbar);
    const SpMat id = identity(h.rows());
    lhs_ = id + a * h;
    rhs_ = id - a * h;
    solver_.analyzePattern(lhs_);
    solver_.factorize(lhs_);
    if (solver_.info() != Eigen::Success) throw Error("Crank-Nicolson factorization failed");
  }
  ComplexField step(const ComplexField& psi) {
    ComplexField b = rhs_ * psi;
    return solver_.solve(b);
  }

 private:
  SpMat lhs_;
  SpMat rhs_;
  SparseSolver solver_;
};

void require_vector_potential(const Grid& g, const std::optional<VectorPotential>& a) {
  if (!a) return;
  if (static_cast<int>(a->size()) != g.dims()) throw ShapeError("vector potential needs one component per axis");
  for (const RealField& f : *a) g.require_matches(f, "vector potential");
}

Trajectory empty_trajectory(const Grid& g, Constants constants, SolverMetadata meta) {
  Trajectory tr(g, constants);
  tr.metadata = std::move(meta);
  return tr;
}

}  // namespace

double Trajectory::norm(Index i) const {
  const auto k = static_cast<std::size_t>(i);
  RealField rho = frames.at(k).cwiseAbs2();
  if (metadata.scheme == "dirac_split") rho += companions.at(k).cwiseAbs2();
  return integrate(rho, grid);
}

Trajectory evolve_schrodinger(const Wavefunction& psi0, const RealField& potential, const SchrodingerOptions& options) {
  require_stepping(options.dt, options.steps, options.save_every);
  const Grid& g = psi0.grid();
  g.require_matches(potential, "potential");
  require_vector_potential(g, options.vector_potential);
  const Constants& k = psi0.constants();

  HamiltonianSpec spec;
  for (int a = 0; a < g.dims(); ++a) {
    spec.axes.push_back(a);
    spec.masses.push_back(k.mass);
  }
  spec.hbar = k.hbar;
  spec.charge = k.charge;
  spec.vector_potential = options.vector_potential ? &*options.vector_potential : nullptr;
  spec.potential = &potential;
  spec.branch = options.branch;
  CrankNicolson cn(build_hamiltonian(g, spec), options.dt, k.hbar);

  Trajectory tr = empty_trajectory(g, k, {"crank_nicolson", options.dt, g.spacing(0), 2, options.steps,
                                          options.save_every});
  tr.branch = options.branch;
  tr.vector_potential = options.vector_potential;
  ComplexField psi = psi0.values();
  tr.times.push_back(0.0);
  tr.frames.push_back(psi);
  for (Index n = 1; n <= options.steps; ++n) {
    psi = cn.step(psi);
    if (n % options.save_every == 0) {
      tr.times.push_back(static_cast<double>(n) * options.dt);
      tr.frames.push_back(psi);
    }
  }
  return tr;
}

Trajectory evolve_schrodinger(const Wavefunction& psi0, const ComplexField& potential,
                              const SchrodingerOptions& options) {
  psi0.grid().require_matches(potential, "potential");
  if (potential.imag().cwiseAbs().maxCoeff() != 0.0) throw InvalidArgument("potential must be real");
  return evolve_schrodinger(psi0, RealField(potential.real()), options);
}

ComplexField apply_hamiltonian(const Wavefunction& psi, const RealField& potential,
                               const std::optional<VectorPotential>& vector_potential) {
  const Grid& g = psi.grid();
  g.require_matches(potential, "potential");
  require_vector_potential(g, vector_potential);
  HamiltonianSpec spec;
  for (int a = 0; a < g.dims(); ++a) {
    spec.axes.push_back(a);
    spec.masses.push_back(psi.constants().mass);
  }
  spec.hbar = psi.constants().hbar;
  spec.charge = psi.constants().charge;
  spec.vector_potential = vector_potential ? &*vector_potential : nullptr;
  spec.potential = &potential;
  return build_hamiltonian(g, spec) * psi.values();
}

Trajectory evolve_schrodinger_split(const Wavefunction& psi0, const RealField& potential, double dt, Index steps,
                                    Index save_every) {
  require_stepping(dt, steps, save_every);
  const Grid& g = psi0.grid();
  if (g.dims() != 1) throw Unsupported("split-step propagator is one-dimensional");
  g.require_matches(potential, "potential");
  const Constants& k = psi0.constants();
  const Index n = g.size();
  const double h = g.spacing(0);

  std::vector<cd> half_potential(static_cast<std::size_t>(n));
  std::vector<cd> kinetic(static_cast<std::size_t>(n));
  for (Index j = 0; j < n; ++j) {
    half_potential[static_cast<std::size_t>(j)] = std::polar(1.0, -0.5 * k.charge * potential(j) * dt / k.hbar);
    const Index m = j < n / 2 ? j : j - n;
    const double wave = 2.0 * std::numbers::pi * static_cast<double>(m) / (static_cast<double>(n) * h);
    kinetic[static_cast<std::size_t>(j)] = std::polar(1.0, -k.hbar * wave * wave * dt / (2.0 * k.mass));
  }

  Eigen::FFT<double> fft;
  std::vector<cd> psi(psi0.values().data(), psi0.values().data() + n);
  std::vector<cd> spectrum(static_cast<std::size_t>(n));
  Trajectory tr = empty_trajectory(g, k, {"split_step_fourier", dt, h, 0, steps, save_every});
  tr.times.push_back(0.0);
  tr.frames.push_back(psi0.values());
  for (Index s = 1; s <= steps; ++s) {
    for (std::size_t j = 0; j < psi.size(); ++j) psi[j] *= half_potential[j];
    fft.fwd(spectrum, psi);
    for (std::size_t j = 0; j < psi.size(); ++j) spectrum[j] *= kinetic[j];
    fft.inv(psi, spectrum);
    for (std::size_t j = 0; j < psi.size(); ++j) psi[j] *= half_potential[j];
    if (s % save_every == 0) {
      tr.times.push_back(static_cast<double>(s) * dt);
      tr.frames.push_back(Eigen::Map<const ComplexField>(psi.data(), n));
    }
  }
  return tr;
}

Wavefunction ground_state(const Grid& grid, const RealField& potential, Constants constants,
                          GroundStateOptions options) {
  grid.require_matches(potential, "potential");
  if (!(options.dtau > 0.0)) throw InvalidArgument("dtau must be positive");
  Index start = 0;
  potential.minCoeff(&start);
  ComplexField psi(grid.size());
  for (Index i = 0; i < grid.size(); ++i) {
    double r2 = 0.0;
    for (int a = 0; a < grid.dims(); ++a) {
      const double d = grid.coordinate(a)(i) - grid.coordinate(a)(start);
      r2 += d * d;
    }
    psi(i) = std::exp(-0.5 * r2);
  }
  HamiltonianSpec spec;
  for (int a = 0; a < grid.dims(); ++a) {
    spec.axes.push_back(a);
    spec.masses.push_back(constants.mass);
  }
  spec.hbar = constants.hbar;
  spec.charge = constants.charge;
  spec.potential = &potential;
  const SpMat lhs = identity(grid.size()) + (options.dtau / constants.hbar) * build_hamiltonian(grid, spec);
  SparseSolver solver;
  solver.compute(lhs);
  if (solver.info() != Eigen::Success) throw Error("ground_state factorization failed");

  auto normalized = [&](ComplexField v) { return ComplexField(v / std::sqrt(integrate(RealField(v.cwiseAbs2()), grid))); };
  psi = normalized(psi);
  for (Index s = 0; s < options.max_steps; ++s) {
    ComplexField next = solver.solve(psi);
    next = normalized(next);
    const double change = (next - psi).cwiseAbs().maxCoeff();
    psi = std::move(next);
    if (change < options.tolerance) return Wavefunction::from_samples(grid, psi, constants);
  }
  throw DomainError("ground_state did not converge in " + std::to_string(options.max_steps) + " steps");
}

ComplexField klein_gordon_laplacian(const ComplexField& psi, const Grid& grid, int order) {
  if (order != 2 && order != 4) throw InvalidArgument("Klein-Gordon Laplacian order must be 2 or 4");
  ComplexField out = ComplexField::Zero(psi.size());
  for (int a = 0; a < grid.dims(); ++a) {
    const double h = grid.spacing(a);
    out += detail::along_axis<cd>(psi, grid, a, [&](const cd* in, Index si, cd* o, Index so, Index n) {
      // Odd reflection about the end points, where ψ vanishes.
      auto f = [&](Index j) -> cd {
        if (j < 0) return -in[-j * si];
        if (j > n - 1) return -in[(2 * (n - 1) - j) * si];
        return in[j * si];
      };
      o[0] = 0.0;
      o[(n - 1) * so] = 0.0;
      for (Index j = 1; j + 1 < n; ++j) {
        cd v;
        if (order == 2) {
          v = (f(j - 1) - 2.0 * f(j) + f(j + 1)) / (h * h);
        } else {
          v = (-f(j - 2) + 16.0 * f(j - 1) - 30.0 * f(j) + 16.0 * f(j + 1) - f(j + 2)) / (12.0 * h * h);
        }
        o[j * so] = v;
      }
    });
  }
  return out;
}

Trajectory evolve_klein_gordon(const Grid& grid, const ComplexField& psi0, const ComplexField& dpsi0_dt,
                               Constants constants, double c, const KleinGordonOptions& options) {
  require_stepping(options.dt, options.steps, options.save_every);
  grid.require_matches(psi0, "Klein-Gordon psi0");
  grid.require_matches(dpsi0_dt, "Klein-Gordon dpsi0/dt");
  if (!(c > 0.0)) throw InvalidArgument("c must be positive");
  const int order = options.laplacian_order;
  if (order != 2 && order != 4) throw InvalidArgument("Klein-Gordon Laplacian order must be 2 or 4");
  const double mu2 = std::pow(constants.mass * c / constants.hbar, 2);
  double lambda_max = 0.0;
  double min_h = grid.spacing(0);
  for (int a = 0; a < grid.dims(); ++a) {
    const double h = grid.spacing(a);
    min_h = std::min(min_h, h);
    lambda_max += (order == 2 ? 4.0 : 16.0 / 3.0) / (h * h);
  }
  const double cdt = c * options.dt;
  if (cdt / min_h > 1.0) {
    throw DomainError("CFL violated: c*dt/dx = " + std::to_string(cdt / min_h) + " > 1");
  }
  if (cdt * cdt * (lambda_max + mu2) > 4.0) {
    throw DomainError("CFL violated: leapfrog stability bound (c*dt)^2 (lambda_max + mu^2) = " +
                      std::to_string(cdt * cdt * (lambda_max + mu2)) + " > 4");
  }

  auto boundary_zero = [&](ComplexField v) {
    for (Index i = 0; i < v.size(); ++i)
      if (grid.on_boundary(i)) v(i) = 0.0;
    return v;
  };
  auto accel = [&](const ComplexField& v) {
    return ComplexField(cdt * cdt * (klein_gordon_laplacian(v, grid, order) - mu2 * v));
  };

  Trajectory tr = empty_trajectory(grid, constants, {"leapfrog", options.dt, grid.spacing(0), order, options.steps,
                                                     options.save_every});
  tr.c = c;
  ComplexField prev = boundary_zero(psi0);
  ComplexField cur = boundary_zero(ComplexField(prev + options.dt * dpsi0_dt + 0.5 * accel(prev)));
  tr.times.push_back(0.0);
  tr.frames.push_back(prev);
  tr.companions.push_back(boundary_zero(dpsi0_dt));
  for (Index n = 1; n <= options.steps; ++n) {
    ComplexField next = 2.0 * cur - prev + accel(cur);
    if (n % options.save_every == 0) {
      tr.times.push_back(static_cast<double>(n) * options.dt);
      tr.frames.push_back(cur);
      tr.companions.push_back((next - prev) / (2.0 * options.dt));
    }
    prev = std::move(cur);
    cur = std::move(next);
  }
  return tr;
}

double SpinorField::norm() const {
  return integrate(RealField(upper.cwiseAbs2() + lower.cwiseAbs2()), grid);
}

Trajectory evolve_dirac_1d(const SpinorField& spinor0, const DiracOptions& options) {
  require_stepping(options.dt, options.steps, options.save_every);
  const Grid& g = spinor0.grid;
  if (g.dims() != 1) throw Unsupported("Dirac evolver is one-dimensional");
  g.require_matches(spinor0.upper, "spinor upper");
  g.require_matches(spinor0.lower, "spinor lower");
  const double h = g.spacing(0);
  const double c = spinor0.c;
  if (!(c > 0.0)) throw InvalidArgument("c must be positive");
  if (c * options.dt / h > 1.0) throw DomainError("CFL violated: c*dt/dx = " + std::to_string(c * options.dt / h) + " > 1");

  const Index n = g.size();
  const bool periodic = options.boundary == Boundary::periodic;
  Triplets t;
  const double w1 = 8.0 / (12.0 * h);
  const double w2 = -1.0 / (12.0 * h);
  for (Index j = 0; j < n; ++j) {
    for (const auto& [off, w] : {std::pair<Index, double>{1, w1}, {2, w2}}) {
      Index right = j + off;
      Index left = j - off;
      if (periodic) {
        right = (right + n) % n;
        left = (left + n) % n;
      }
      if (right < n) t.emplace_back(j, right, w);
      if (left >= 0) t.emplace_back(j, left, -w);
    }
  }
  SpMat d(n, n);
  d.setFromTriplets(t.begin(), t.end());
  const SpMat id = identity(n);
  const double a = 0.5 * c * options.dt;
  // u± = (ψ₁ ± ψ₂)/√2 obey ∂u±/∂t = ∓c ∂u±/∂x.
  const SpMat plus_lhs = id + a * d;
  const SpMat plus_rhs = id - a * d;
  const SpMat minus_lhs = id - a * d;
  const SpMat minus_rhs = id + a * d;
  SparseSolver plus_solver, minus_solver;
  plus_solver.compute(plus_lhs);
  minus_solver.compute(minus_lhs);
  if (plus_solver.info() != Eigen::Success || minus_solver.info() != Eigen::Success) {
    throw Error("Dirac transport factorization failed");
  }
  const cd half_mass = std::polar(1.0, -0.5 * spinor0.mass * c * c * options.dt / spinor0.hbar);

  Constants constants;
  constants.hbar = spinor0.hbar;
  constants.mass = spinor0.mass;
  Trajectory tr = empty_trajectory(g, constants, {"dirac_split", options.dt, h, 4, options.steps, options.save_every});
  tr.c = c;
  ComplexField up = spinor0.upper;
  ComplexField lo = spinor0.lower;
  tr.times.push_back(0.0);
  tr.frames.push_back(up);
  tr.companions.push_back(lo);
  const double r = 1.0 / std::sqrt(2.0);
  for (Index s = 1; s <= options.steps; ++s) {
    up *= half_mass;
    lo *= std::conj(half_mass);
    ComplexField rhs_p = plus_rhs * ComplexField(r * (up + lo));
    ComplexField rhs_m = minus_rhs * ComplexField(r * (up - lo));
    const ComplexField p = plus_solver.solve(rhs_p);
    const ComplexField m = minus_solver.solve(rhs_m);
    up = r * (p + m);
    lo = r * (p - m);
    up *= half_mass;
    lo *= std::conj(half_mass);
    if (s % options.save_every == 0) {
      tr.times.push_back(static_cast<double>(s) * options.dt);
      tr.frames.push_back(up);
      tr.companions.push_back(lo);
    }
  }
  return tr;
}

double variational_residual(const SpaceTimeAmplitude& chi) {
  const Index nt = chi.time_points();
  if (nt < 5) throw InvalidArgument("variational_residual needs at least 5 time samples");
  const Grid& space = chi.space();
  const Grid& time = chi.time();
  const Eigen::MatrixXcd& v = chi.values();
  const int order = detail::resolve_order(time, 0);
  Eigen::MatrixXcd dtt(v.rows(), v.cols());
  for (Index r = 0; r < v.rows(); ++r) {
    stencil::second_derivative(v.data() + r, v.rows(), dtt.data() + r, dtt.rows(), nt, time.spacing(0), order);
  }
  const double c2 = chi.c() * chi.c();
  const double mu2 = std::pow(chi.constants().mass * chi.c() / chi.constants().hbar, 2);

  std::vector<Index> interior;
  for (Index i = 0; i < space.size(); ++i) {
    const auto idx = space.unflatten(i);
    bool inside = true;
    for (int a = 0; a < space.dims(); ++a) {
      const Index k = idx[static_cast<std::size_t>(a)];
      inside = inside && k >= 2 && k + 2 < space.points(a);
    }
    if (inside) interior.push_back(i);
  }
  double num = 0.0;
  double den = 0.0;
  for (Index t = 2; t + 2 < nt; ++t) {
    const ComplexField col = v.col(t);
    const ComplexField lap = laplacian(col, space);
    for (Index i : interior) {
      num += std::norm(lap(i) - dtt(i, t) / c2 - mu2 * col(i));
      den += std::norm(col(i));
    }
  }
  if (den == 0.0) throw DomainError("variational_residual: amplitude vanishes on the interior");
  return std::sqrt(num / den);
}

SpaceTimeAmplitude to_spacetime(const Trajectory& trajectory) {
  const Index nt = trajectory.size();
  if (nt < 8) throw InvalidArgument("to_spacetime needs at least 8 frames");
  const Quadrature rule = nt % 2 == 1 ? Quadrature::simpson : Quadrature::trapezoid;
  Grid time({Axis{trajectory.times.front(), trajectory.times.back(), nt}}, GridOptions{4, rule});
  Eigen::MatrixXcd values(trajectory.grid.size(), nt);
  for (Index t = 0; t < nt; ++t) values.col(t) = trajectory.frames[static_cast<std::size_t>(t)];
  return SpaceTimeAmplitude::raw(trajectory.grid, std::move(time), std::move(values), trajectory.constants,
                                 trajectory.c);
}

double continuity_residual(const Trajectory& trajectory) {
  const Index nf = trajectory.size();
  if (nf < 3) throw InvalidArgument("continuity_residual needs at least 3 frames");
  const Grid& g = trajectory.grid;
  const Constants& k = trajectory.constants;
  const Wavefunction first = trajectory.frame(0);
  const double mean = moment(first, 1, 0);
  const double variance = moment(first, 2, 0) - mean * mean;
  const double t_char = 2.0 * k.mass * variance / k.hbar;
  const double rho_max = first.density().maxCoeff();
  const double branch_sign = trajectory.branch == EnergyBranch::positive ? 1.0 : -1.0;

  double worst = 0.0;
  for (Index f = 1; f + 1 < nf; ++f) {
    const auto fi = static_cast<std::size_t>(f);
    const RealField drho = (trajectory.frames[fi + 1].cwiseAbs2() - trajectory.frames[fi - 1].cwiseAbs2()) /
                           (trajectory.times[fi + 1] - trajectory.times[fi - 1]);
    const CurrentField j = probability_current(trajectory.frame(f), trajectory.vector_potential);
    RealField div = RealField::Zero(g.size());
    for (int a = 0; a < g.dims(); ++a) div += derivative(j.components[static_cast<std::size_t>(a)], g, a);
    for (Index i = 0; i < g.size(); ++i) {
      const auto idx = g.unflatten(i);
      bool inside = true;
      for (int a = 0; a < g.dims(); ++a) {
        const Index q = idx[static_cast<std::size_t>(a)];
        inside = inside && q >= 2 && q + 2 < g.points(a);
      }
      if (inside) worst = std::max(worst, std::abs(drho(i) + branch_sign * div(i)));
    }
  }
  return worst * t_char / rho_max;
}

ConjugateState charge_conjugate(const Wavefunction& psi, EnergyBranch branch) {
  Constants k = psi.constants();
  k.charge = -k.charge;
  const EnergyBranch flipped = branch == EnergyBranch::positive ? EnergyBranch::negative : EnergyBranch::positive;
  return {Wavefunction::unchecked(psi.grid(), psi.values().conjugate(), k), k.charge, flipped};
}

SpaceTimeAmplitude charge_conjugate(const SpaceTimeAmplitude& chi) {
  Constants k = chi.constants();
  k.charge = -k.charge;
  SpaceTimeAmplitude out = SpaceTimeAmplitude::raw(chi.space(), chi.time(), chi.values().conjugate(), k, chi.c());
  if (chi.tau()) out.set_tau(*chi.tau());
  return out;
}

Trajectory two_particle_evolve(const Wavefunction& psi0, double m1, double m2, const RealField& potential, double dt,
                               Index steps, Index save_every) {
  if (!(m1 > 0.0) || !(m2 > 0.0)) throw InvalidArgument("particle masses must be positive");
  require_stepping(dt, steps, save_every);
  const Grid& g = psi0.grid();
  if (g.dims() != 2) throw InvalidArgument("two_particle_evolve needs a 2D grid, one axis per particle");
  g.require_matches(potential, "potential");
  const double hbar = psi0.constants().hbar;

  auto kinetic = [&](int axis, double mass) {
    HamiltonianSpec spec;
    spec.axes = {axis};
    spec.masses = {mass};
    spec.hbar = hbar;
    return build_hamiltonian(g, spec);
  };
  CrankNicolson first(kinetic(0, m1), 0.5 * dt, hbar);
  CrankNicolson second(kinetic(1, m2), dt, hbar);
  ComplexField half_potential(g.size());
  for (Index i = 0; i < g.size(); ++i) half_potential(i) = std::polar(1.0, -0.5 * potential(i) * dt / hbar);

  Trajectory tr = empty_trajectory(g, psi0.constants(), {"two_particle_strang_cn", dt, g.spacing(0), 2, steps,
                                                         save_every});
  ComplexField psi = psi0.values();
  tr.times.push_back(0.0);
  tr.frames.push_back(psi);
  for (Index s = 1; s <= steps; ++s) {
    psi = psi.cwiseProduct(half_potential);
    psi = first.step(psi);
    psi = second.step(psi);
    psi = first.step(psi);
    psi = psi.cwiseProduct(half_potential);
    if (s % save_every == 0) {
      tr.times.push_back(static_cast<double>(s) * dt);
      tr.frames.push_back(psi);
    }
  }
  return tr;
}

}  // namespace qmprob
