#include "qmprob/amplitude.hpp"

#include <cmath>
#include <numbers>

#include <unsupported/Eigen/FFT>

namespace qmprob {

namespace {

const char* face_name(int axis, bool upper) {
  static const char* names[3][2] = {{"axis 0 lower", "axis 0 upper"},
                                    {"axis 1 lower", "axis 1 upper"},
                                    {"axis 2 lower", "axis 2 upper"}};
  return names[axis][upper ? 1 : 0];
}

}  // namespace

void require_boundary_decay(const Grid& grid, const RealField& density, double tolerance) {
  grid.require_matches(density, "boundary decay");
  const double peak = density.maxCoeff();
  for (int a = 0; a < grid.dims(); ++a) {
    for (bool upper : {false, true}) {
      const Index edge = upper ? grid.points(a) - 1 : 0;
      double worst = 0.0;
      for (Index flat = 0; flat < grid.size(); ++flat) {
        if ((flat / grid.stride(a)) % grid.points(a) == edge) worst = std::max(worst, density(flat));
      }
      if (worst > tolerance * peak) {
        throw DomainError("amplitude does not decay at " + std::string(face_name(a, upper)) +
                          ": boundary/peak density ratio " + std::to_string(worst / peak));
      }
    }
  }
}

double Wavefunction::norm() const { return integrate(density(), grid_); }

Wavefunction Wavefunction::from_samples(Grid grid, ComplexField values, Constants constants,
                                        AmplitudeTolerances tolerances) {
  grid.require_matches(values, "from_samples");
  if (!(constants.hbar > 0.0) || !(constants.mass > 0.0)) {
    throw InvalidArgument("hbar and mass must be positive");
  }
  const double n2 = integrate(RealField(values.cwiseAbs2()), grid);
  if (!(n2 > 0.0) || !std::isfinite(n2)) throw DomainError("amplitude has zero (or non-finite) norm");
  values /= std::sqrt(n2);
  require_boundary_decay(grid, values.cwiseAbs2(), tolerances.boundary);
  Wavefunction psi(std::move(grid), std::move(values), constants);
  psi.norm_residual_ = std::abs(psi.norm() - 1.0);
  return psi;
}

Wavefunction Wavefunction::adopt(Grid grid, ComplexField values, Constants constants,
                                 AmplitudeTolerances tolerances) {
  grid.require_matches(values, "adopt");
  if (!(constants.hbar > 0.0) || !(constants.mass > 0.0)) {
    throw InvalidArgument("hbar and mass must be positive");
  }
  Wavefunction psi(std::move(grid), std::move(values), constants);
  psi.norm_residual_ = std::abs(psi.norm() - 1.0);
  if (!(psi.norm_residual_ <= tolerances.norm)) {
    throw DomainError("amplitude norm deviates from 1 by " + std::to_string(psi.norm_residual_));
  }
  require_boundary_decay(psi.grid_, psi.density(), tolerances.boundary);
  return psi;
}

Wavefunction Wavefunction::unchecked(Grid grid, ComplexField values, Constants constants) {
  grid.require_matches(values, "unchecked");
  Wavefunction psi(std::move(grid), std::move(values), constants);
  psi.norm_residual_ = std::abs(psi.norm() - 1.0);
  return psi;
}

PolarFields decompose(const Wavefunction& psi, double rho_floor) {
  const Grid& g = psi.grid();
  PolarFields out;
  out.rho = psi.density();
  const double floor = rho_floor * out.rho.maxCoeff();
  out.mask = out.rho.array() >= floor;
  out.s2 = RealField::Zero(g.size());
  for (Index k = 0; k < g.size(); ++k) {
    if (out.mask(k)) out.s2(k) = -0.5 * std::log(out.rho(k));
  }
  const ComplexField& v = psi.values();
  for (int a = 0; a < g.dims(); ++a) {
    const ComplexField dv = derivative(v, g, a);
    RealField grad = RealField::Zero(g.size());
    for (Index k = 0; k < g.size(); ++k) {
      if (out.mask(k)) grad(k) = (v(k).real() * dv(k).imag() - v(k).imag() * dv(k).real()) / out.rho(k);
    }
    out.grad_s1.push_back(std::move(grad));
  }
  return out;
}

Wavefunction compose(const RealField& rho, const RealField& s1, const Grid& grid, Constants constants,
                     AmplitudeTolerances tolerances) {
  grid.require_matches(rho, "compose");
  grid.require_matches(s1, "compose");
  if ((rho.array() < 0.0).any()) throw DomainError("compose: density has a negative entry");
  ComplexField values(rho.size());
  for (Index k = 0; k < rho.size(); ++k) values(k) = std::polar(std::sqrt(rho(k)), s1(k));
  return Wavefunction::adopt(grid, std::move(values), constants, tolerances);
}

Wavefunction conjugate(const Wavefunction& psi) {
  return Wavefunction::unchecked(psi.grid(), psi.values().conjugate(), psi.constants());
}

ComplexField alternative_amplitude(const RealField& rho, const RealField& s1) {
  if (rho.size() != s1.size()) throw ShapeError("alternative_amplitude: rho and s1 differ in size");
  ComplexField xi(rho.size());
  for (Index k = 0; k < rho.size(); ++k) xi(k) = std::polar(std::sqrt(std::sqrt(rho(k))), 0.5 * s1(k));
  return xi;
}

double quartic_norm(const ComplexField& xi, const Grid& grid) {
  const RealField a2 = xi.cwiseAbs2();
  return integrate(RealField(a2.cwiseAbs2()), grid);
}

MomentumAmplitude momentum_representation(const Wavefunction& psi) {
  if (psi.dims() != 1) throw Unsupported("momentum representation is defined for 1D amplitudes only");
  const Grid& g = psi.grid();
  const Index n = g.size();
  const double h = g.spacing(0);
  const double hbar = psi.constants().hbar;
  const double x0 = g.axis(0).lower;

  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> in(psi.values().data(), psi.values().data() + n);
  std::vector<std::complex<double>> spectrum;
  fft.fwd(spectrum, in);

  MomentumAmplitude out;
  out.dp = 2.0 * std::numbers::pi * hbar / (static_cast<double>(n) * h);
  out.momenta.resize(n);
  out.values.resize(n);
  const Index kmin = -(n / 2);
  const double scale = h / std::sqrt(2.0 * std::numbers::pi * hbar);
  for (Index i = 0; i < n; ++i) {
    const Index k = kmin + i;
    const double p = static_cast<double>(k) * out.dp;
    const Index slot = ((k % n) + n) % n;
    out.momenta(i) = p;
    out.values(i) = scale * std::polar(1.0, -p * x0 / hbar) * spectrum[static_cast<std::size_t>(slot)];
  }
  return out;
}

double mean_momentum(const Wavefunction& psi, int axis) {
  const ComplexField dv = derivative(psi.values(), psi.grid(), axis);
  const std::complex<double> minus_i_hbar(0.0, -psi.constants().hbar);
  const ComplexField integrand = psi.values().conjugate().cwiseProduct(minus_i_hbar * dv);
  return integrate(integrand, psi.grid()).real();
}

}  // namespace qmprob
