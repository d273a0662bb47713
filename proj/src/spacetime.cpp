#include "qmprob/spacetime.hpp"

#include <cmath>
#include <numbers>

namespace qmprob {

namespace {

using cd = std::complex<double>;

// Spatial integral of every column, one entry per time point.
RealField slice_integrals(const Eigen::MatrixXd& values, const Grid& space) {
  return values.transpose() * space.weights();
}

double spacetime_integral(const Eigen::MatrixXd& values, const Grid& space, const Grid& time) {
  return slice_integrals(values, space).dot(time.weights());
}

void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) throw InvalidArgument(std::string(what) + " must be positive");
}

}  // namespace

Grid make_time_grid(double t_max, Index steps, int accuracy_order) {
  require_positive(t_max, "t_max");
  if (steps < 64) throw InvalidArgument("time grid needs at least 64 steps");
  if (steps % 2 != 0) throw InvalidArgument("time grid needs an even number of steps for Simpson weights");
  return Grid({Axis{0.0, t_max, steps + 1}}, GridOptions{accuracy_order, Quadrature::simpson});
}

double DecayEnvelope::truncated_norm() const { return -std::expm1(-t_max() / tau); }

DecayEnvelope exponential_envelope(double tau, const Grid& time_grid) {
  require_positive(tau, "tau");
  if (time_grid.dims() != 1 || time_grid.axis(0).lower != 0.0) {
    throw InvalidArgument("envelope needs a one-dimensional time grid starting at 0");
  }
  const RealField t = time_grid.axis_coordinates(0);
  RealField eta = (-t.array() / (2.0 * tau)).exp() / std::sqrt(tau);
  return DecayEnvelope{DecayEnvelope::Kind::exponential, tau, time_grid, std::move(eta)};
}

SpaceTimeAmplitude::SpaceTimeAmplitude(Grid space, Grid time, Eigen::MatrixXcd values, Constants constants,
                                       double c)
    : space_(std::move(space)), time_(std::move(time)), values_(std::move(values)), constants_(constants), c_(c) {
  if (time_.dims() != 1) throw InvalidArgument("time grid must be one-dimensional");
  if (values_.rows() != space_.size() || values_.cols() != time_.size()) {
    throw ShapeError("space-time values are " + std::to_string(values_.rows()) + "x" +
                     std::to_string(values_.cols()) + ", grids need " + std::to_string(space_.size()) + "x" +
                     std::to_string(time_.size()));
  }
  require_positive(c_, "speed of light");
}

SpaceTimeAmplitude SpaceTimeAmplitude::raw(Grid space, Grid time, Eigen::MatrixXcd values, Constants constants,
                                           double c) {
  return SpaceTimeAmplitude(std::move(space), std::move(time), std::move(values), constants, c);
}

SpaceTimeAmplitude SpaceTimeAmplitude::validated(Grid space, Grid time, Eigen::MatrixXcd values, Constants constants,
                                                 double c, std::optional<double> truncation_norm,
                                                 AmplitudeTolerances tolerances) {
  if (time.size() < 65) throw InvalidArgument("space-time amplitude needs at least 64 time steps");
  SpaceTimeAmplitude chi(std::move(space), std::move(time), std::move(values), constants, c);
  const double n = chi.norm();
  if (std::abs(n - 1.0) > 1e-5) {
    if (truncation_norm && std::abs(n - *truncation_norm) <= 1e-5) {
      chi.truncation_warning_ = true;
    } else {
      throw DomainError("space-time norm is " + std::to_string(n) + ", expected 1");
    }
  }
  for (Index t = 0; t < chi.time_points(); ++t) {
    require_boundary_decay(chi.space_, chi.values_.col(t).cwiseAbs2(), tolerances.boundary);
  }
  return chi;
}

double SpaceTimeAmplitude::norm() const { return spacetime_integral(values_.cwiseAbs2(), space_, time_); }

SpaceTimeAmplitude make_chi(const std::vector<Wavefunction>& psi_of_t, const DecayEnvelope& envelope, double c) {
  if (psi_of_t.empty()) throw InvalidArgument("make_chi: no time slices");
  const Index nt = envelope.time_grid.size();
  if (static_cast<Index>(psi_of_t.size()) != nt) {
    throw ShapeError("make_chi: " + std::to_string(psi_of_t.size()) + " slices for " + std::to_string(nt) +
                     " envelope samples");
  }
  const Grid& space = psi_of_t.front().grid();
  Eigen::MatrixXcd values(space.size(), nt);
  for (Index t = 0; t < nt; ++t) {
    const Wavefunction& psi = psi_of_t[static_cast<std::size_t>(t)];
    if (!psi.grid().same_points(space)) throw ShapeError("make_chi: slices live on different grids");
    if (std::abs(psi.norm() - 1.0) > 1e-6) {
      throw DomainError("make_chi: slice " + std::to_string(t) + " is not unit-norm");
    }
    values.col(t) = psi.values() * envelope.samples(t);
  }
  SpaceTimeAmplitude chi = SpaceTimeAmplitude::validated(space, envelope.time_grid, std::move(values),
                                                         psi_of_t.front().constants(), c,
                                                         envelope.truncated_norm());
  chi.set_tau(envelope.tau);
  return chi;
}

SpaceTimeAmplitude make_chi(const Wavefunction& psi, double omega, const DecayEnvelope& envelope, double c) {
  if (envelope.time_grid.size() == 0) throw InvalidArgument("make_chi: empty time grid");
  if (std::abs(psi.norm() - 1.0) > 1e-6) throw DomainError("make_chi: slice is not unit-norm");
  const RealField t = envelope.time_grid.axis_coordinates(0);
  const Index nt = t.size();
  Eigen::MatrixXcd values(psi.grid().size(), nt);
  for (Index k = 0; k < nt; ++k) {
    values.col(k) = psi.values() * (std::polar(1.0, -omega * t(k)) * envelope.samples(k));
  }
  SpaceTimeAmplitude chi = SpaceTimeAmplitude::validated(psi.grid(), envelope.time_grid, std::move(values),
                                                         psi.constants(), c, envelope.truncated_norm());
  chi.set_tau(envelope.tau);
  return chi;
}

SpaceTimeAmplitude free_amplitude(double energy, const std::vector<double>& momentum, double alpha,
                                  const Grid& space, const DecayEnvelope& envelope, Constants constants, double c) {
  require_positive(alpha, "alpha");
  if (static_cast<int>(momentum.size()) > space.dims()) throw ShapeError("more momentum components than axes");
  ComplexField psi = ComplexField::Ones(space.size());
  for (int a = 0; a < space.dims(); ++a) {
    const double p = a < static_cast<int>(momentum.size()) ? momentum[static_cast<std::size_t>(a)] : 0.0;
    const RealField x = space.coordinate(a);
    for (Index k = 0; k < psi.size(); ++k) {
      psi(k) *= std::pow(alpha / std::numbers::pi, 0.25) * std::exp(-0.5 * alpha * x(k) * x(k)) *
                std::polar(1.0, p * x(k) / constants.hbar);
    }
  }
  return make_chi(Wavefunction::from_samples(space, std::move(psi), constants), energy / constants.hbar, envelope,
                  c);
}

Eigen::MatrixXcd time_derivative(const SpaceTimeAmplitude& chi) {
  const Grid& time = chi.time();
  const int order = detail::resolve_order(time, 0);
  const Eigen::MatrixXcd& v = chi.values();
  Eigen::MatrixXcd out(v.rows(), v.cols());
  // Column-major storage: consecutive time samples of one point are v.rows() apart.
  for (Index r = 0; r < v.rows(); ++r) {
    stencil::first_derivative(v.data() + r, v.rows(), out.data() + r, out.rows(), v.cols(), time.spacing(0), order);
  }
  return out;
}

double time_moment(const SpaceTimeAmplitude& chi, int n) {
  if (n < 0 || n > 4) throw InvalidArgument("time_moment: n must be in 0..4");
  const RealField t = chi.time().axis_coordinates(0);
  const RealField slices = slice_integrals(chi.values().cwiseAbs2(), chi.space());
  return (slices.array() * t.array().pow(n)).matrix().dot(chi.time().weights());
}

Eigen::MatrixXd time_current(const SpaceTimeAmplitude& chi) {
  if (chi.time_points() < 3) throw InvalidArgument("time_current needs at least 3 time samples");
  const Eigen::MatrixXcd dv = time_derivative(chi);
  const Eigen::MatrixXcd& v = chi.values();
  const double scale = chi.constants().hbar / chi.constants().mass;
  Eigen::MatrixXd j(v.rows(), v.cols());
  for (Index c = 0; c < v.cols(); ++c) {
    for (Index r = 0; r < v.rows(); ++r) {
      j(r, c) = -scale * (v(r, c).real() * dv(r, c).imag() - v(r, c).imag() * dv(r, c).real());
    }
  }
  return j;
}

double optimal_energy_shift(const SpaceTimeAmplitude& chi) {
  const Eigen::MatrixXcd dv = time_derivative(chi);
  // Re(χ* i ∂χ/∂t) = −Im(χ* ∂χ/∂t)
  const Eigen::MatrixXd integrand = -(chi.values().conjugate().cwiseProduct(dv)).imag();
  return spacetime_integral(integrand, chi.space(), chi.time());
}

UncertaintyReport time_energy_product(const SpaceTimeAmplitude& chi, std::optional<double> b_prime) {
  const double b = b_prime ? *b_prime : optimal_energy_shift(chi);
  const Eigen::MatrixXcd w = cd(0.0, 1.0) * time_derivative(chi) - b * chi.values();
  const double second = spacetime_integral(w.cwiseAbs2(), chi.space(), chi.time());
  UncertaintyReport r = make_report("time_energy", time_moment(chi, 2) * second, 0.25);
  r.b = b;
  return r;
}

SpaceTimeFisher spacetime_fisher(const SpaceTimeAmplitude& chi) {
  SpaceTimeFisher f;
  f.time = 4.0 * spacetime_integral(time_derivative(chi).cwiseAbs2(), chi.space(), chi.time());
  const Grid& space = chi.space();
  for (int a = 0; a < space.dims(); ++a) {
    Eigen::MatrixXd sq(chi.values().rows(), chi.values().cols());
    for (Index t = 0; t < chi.time_points(); ++t) {
      sq.col(t) = derivative(ComplexField(chi.values().col(t)), space, a).cwiseAbs2();
    }
    f.spatial.push_back(4.0 * spacetime_integral(sq, space, chi.time()));
  }
  return f;
}

double relativistic_invariant(const SpaceTimeAmplitude& chi) {
  const SpaceTimeFisher f = spacetime_fisher(chi);
  double spatial = 0.0;
  for (double v : f.spatial) spatial += v;
  return f.time / (chi.c() * chi.c()) - spatial;
}

double extrapolate_limit(const std::vector<double>& tau, const std::vector<double>& alpha,
                         const std::vector<double>& values) {
  const std::size_t n = values.size();
  if (tau.size() != n || alpha.size() != n) throw ShapeError("extrapolate_limit: length mismatch");
  if (n < 4) throw InvalidArgument("extrapolate_limit needs at least 4 runs");
  Eigen::MatrixXd design(static_cast<Index>(n), 4);
  Eigen::VectorXd rhs(static_cast<Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const Index r = static_cast<Index>(i);
    design(r, 0) = 1.0;
    design(r, 1) = 1.0 / tau[i];
    design(r, 2) = 1.0 / (tau[i] * tau[i]);
    design(r, 3) = alpha[i];
    rhs(r) = values[i];
  }
  return design.colPivHouseholderQr().solve(rhs)(0);
}

namespace {

void require_sequences(const std::vector<double>& tau_seq, const std::vector<double>& alpha_seq) {
  if (tau_seq.size() < 3 || alpha_seq.size() < 3) throw InvalidArgument("parameter sequences need length >= 3");
  for (std::size_t i = 0; i < tau_seq.size(); ++i) {
    require_positive(tau_seq[i], "tau");
    if (i > 0 && !(tau_seq[i] > tau_seq[i - 1])) throw InvalidArgument("tau sequence must increase");
  }
  for (std::size_t i = 0; i < alpha_seq.size(); ++i) {
    require_positive(alpha_seq[i], "alpha");
    if (i > 0 && !(alpha_seq[i] < alpha_seq[i - 1])) throw InvalidArgument("alpha sequence must decrease");
  }
}

std::vector<ParameterRun> parameter_runs(double energy, double momentum, Constants constants, double c,
                                         const std::vector<double>& tau_seq, const std::vector<double>& alpha_seq,
                                         const SpaceTimeResolution& res) {
  require_sequences(tau_seq, alpha_seq);
  std::vector<ParameterRun> runs;
  const double hbar2 = constants.hbar * constants.hbar;
  const double dt = std::min(res.max_dt, res.phase_step * constants.hbar / std::max(std::abs(energy), 1e-300));
  const double dx = std::min(res.max_dx, res.phase_step * constants.hbar / std::max(std::abs(momentum), 1e-300));
  for (double tau : tau_seq) {
    const double t_max = res.tmax_factor * tau;
    Index steps = static_cast<Index>(std::ceil(t_max / dt));
    steps = std::max<Index>(64, steps + steps % 2);
    const DecayEnvelope env = exponential_envelope(tau, make_time_grid(t_max, steps));
    for (double alpha : alpha_seq) {
      const double half = res.extent / std::sqrt(alpha);
      const Index n = std::max<Index>(16, static_cast<Index>(std::ceil(2.0 * half / dx)) + 1);
      const Grid space({Axis{-half, half, n}});
      const SpaceTimeAmplitude chi = free_amplitude(energy, {momentum}, alpha, space, env, constants, c);
      const SpaceTimeFisher f = spacetime_fisher(chi);
      ParameterRun run;
      run.tau = tau;
      run.alpha = alpha;
      run.invariant = f.time / (c * c) - f.spatial[0];
      run.energy_side = 0.25 * hbar2 * f.time;
      run.momentum_side = 0.25 * hbar2 * c * c * f.spatial[0];
      runs.push_back(run);
    }
  }
  return runs;
}

template <typename Value>
double extrapolate_runs(const std::vector<ParameterRun>& runs, Value value) {
  std::vector<double> tau, alpha, values;
  for (const ParameterRun& r : runs) {
    tau.push_back(r.tau);
    alpha.push_back(r.alpha);
    values.push_back(value(r));
  }
  return extrapolate_limit(tau, alpha, values);
}

}  // namespace

InvariantStudy invariant_study(double energy, double momentum, Constants constants, double c,
                               const std::vector<double>& tau_seq, const std::vector<double>& alpha_seq,
                               SpaceTimeResolution resolution) {
  InvariantStudy s;
  s.runs = parameter_runs(energy, momentum, constants, c, tau_seq, alpha_seq, resolution);
  s.extrapolated = extrapolate_runs(s.runs, [](const ParameterRun& r) { return r.invariant; });
  s.target = 4.0 * constants.mass * constants.mass * c * c / (constants.hbar * constants.hbar);
  s.relative_error = std::abs(s.extrapolated - s.target) / s.target;
  return s;
}

DispersionReport dispersion_check(double energy, double momentum, double m0, double c,
                                  const std::vector<double>& tau_seq, const std::vector<double>& alpha_seq,
                                  double hbar, bool assert_on_shell, SpaceTimeResolution resolution) {
  require_positive(m0, "m0");
  Constants constants;
  constants.hbar = hbar;
  constants.mass = m0;
  DispersionReport r;
  r.energy = energy;
  r.momentum = momentum;
  r.mass = m0;
  r.c = c;
  r.assert_on_shell = assert_on_shell;
  r.runs = parameter_runs(energy, momentum, constants, c, tau_seq, alpha_seq, resolution);
  r.extrapolated =
      extrapolate_runs(r.runs, [](const ParameterRun& run) { return run.energy_side - run.momentum_side; });
  const double rest = m0 * m0 * c * c * c * c;
  r.residual = r.extrapolated - rest;
  r.predicted_residual = energy * energy - c * c * momentum * momentum - rest;
  r.on_shell = std::abs(r.residual) < 1e-3 * rest;
  r.violation = assert_on_shell && !r.on_shell;
  return r;
}

}  // namespace qmprob
