#include "qmprob/uncertainty.hpp"

#include <cmath>

#include "qmprob/moments.hpp"

namespace qmprob {

namespace {

using cd = std::complex<double>;

void require_axis(const Wavefunction& psi, int axis) {
  if (axis < 0 || axis >= psi.dims()) throw InvalidArgument("axis " + std::to_string(axis) + " out of range");
}

double centered_variance(const Wavefunction& psi, double a, int axis) {
  const RealField x = psi.grid().coordinate(axis);
  const RealField integrand = (x.array() - a).square() * psi.density().array();
  return integrate(integrand, psi.grid());
}

// ∫|−iħ ∂ψ − f ψ|² dV for a pointwise shift f.
template <typename ShiftAt>
double shifted_momentum_norm(const Wavefunction& psi, int axis, ShiftAt shift) {
  const ComplexField& v = psi.values();
  const ComplexField dv = derivative(v, psi.grid(), axis);
  const double hbar = psi.constants().hbar;
  RealField integrand(v.size());
  for (Index k = 0; k < v.size(); ++k) {
    const cd w = cd(0.0, -hbar) * dv(k) - shift(k) * v(k);
    integrand(k) = std::norm(w);
  }
  return integrate(integrand, psi.grid());
}

}  // namespace

UncertaintyReport make_report(std::string name, double lhs, double bound) {
  UncertaintyReport r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.bound = bound;
  r.slack = lhs - bound;
  r.holds = r.slack >= -1e-9 * (1.0 + std::abs(bound));
  return r;
}

double fisher_quotient(const Wavefunction& psi, int axis, double rho_floor) {
  require_axis(psi, axis);
  const RealField rho = psi.density();
  const RealField drho = derivative(rho, psi.grid(), axis);
  const double floor = rho_floor * rho.maxCoeff();
  RealField integrand = RealField::Zero(rho.size());
  for (Index k = 0; k < rho.size(); ++k) {
    if (rho(k) >= floor && rho(k) > 0.0) integrand(k) = drho(k) * drho(k) / rho(k);
  }
  return integrate(integrand, psi.grid());
}

std::complex<double> commutator_integral(const Wavefunction& psi, int axis) {
  require_axis(psi, axis);
  const ComplexField& v = psi.values();
  const ComplexField dv = derivative(v, psi.grid(), axis);
  const RealField x = psi.grid().coordinate(axis);
  const cd minus_i(0.0, -1.0);
  ComplexField integrand(v.size());
  for (Index k = 0; k < v.size(); ++k) {
    const cd u = x(k) * v(k);
    const cd p = minus_i * dv(k);
    integrand(k) = std::conj(u) * p - std::conj(p) * u;
  }
  return integrate(integrand, psi.grid());
}

UncertaintyReport schwarz_pair(const Wavefunction& psi, int n, int axis) {
  if (n < 0 || n > 4) throw InvalidArgument("schwarz_pair: n must be in 0..4");
  require_axis(psi, axis);
  const RealField x = psi.grid().coordinate(axis);
  const RealField rho = psi.density();
  const double uu = integrate(RealField(x.array().pow(2 * n + 2) * rho.array()), psi.grid());
  const double vv = fisher_quotient(psi, axis);
  const double mn = integrate(RealField(x.array().pow(n) * rho.array()), psi.grid());
  const double np1 = static_cast<double>(n + 1);
  UncertaintyReport r = make_report("schwarz_n", uu * vv, np1 * np1 * mn * mn);
  r.n = n;
  r.axis = axis;
  return r;
}

UncertaintyReport uncertainty_product(const Wavefunction& psi, double a, double b, int axis) {
  require_axis(psi, axis);
  const double hbar = psi.constants().hbar;
  const double lhs = centered_variance(psi, a, axis) * shifted_momentum_norm(psi, axis, [b](Index) { return b; });
  UncertaintyReport r = make_report("general_ab", lhs, 0.25 * hbar * hbar);
  r.axis = axis;
  r.a = a;
  r.b = b;
  return r;
}

UncertaintyReport uncertainty_product(const Wavefunction& psi, double a, const RealField& b_field, int axis) {
  require_axis(psi, axis);
  psi.grid().require_matches(b_field, "uncertainty_product");
  const double hbar = psi.constants().hbar;
  const double lhs =
      centered_variance(psi, a, axis) * shifted_momentum_norm(psi, axis, [&](Index k) { return b_field(k); });
  UncertaintyReport r = make_report("general_ab", lhs, 0.25 * hbar * hbar);
  r.axis = axis;
  r.a = a;
  return r;
}

OptimalShifts optimal_shifts(const Wavefunction& psi, int axis) {
  require_axis(psi, axis);
  return {moment(psi, 1, axis), mean_momentum(psi, axis)};
}

UncertaintyReport heisenberg_product(const Wavefunction& psi, int axis) {
  const OptimalShifts s = optimal_shifts(psi, axis);
  UncertaintyReport r = uncertainty_product(psi, s.a, s.b, axis);
  r.name = "heisenberg";
  return r;
}

UncertaintyReport refined_product(const Wavefunction& psi, int axis) {
  const double hbar = psi.constants().hbar;
  const double mean = moment(psi, 1, axis);
  const double lhs = centered_variance(psi, mean, axis) * 0.25 * hbar * hbar * fisher_quotient(psi, axis);
  UncertaintyReport r = make_report("refined", lhs, 0.25 * hbar * hbar);
  r.axis = axis;
  r.a = mean;
  return r;
}

}  // namespace qmprob
