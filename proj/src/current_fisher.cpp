#include "qmprob/current_fisher.hpp"

#include <cmath>

#include "qmprob/moments.hpp"

namespace qmprob {

CurrentField probability_current(const Wavefunction& psi, const std::optional<VectorPotential>& vector_potential) {
  const Grid& g = psi.grid();
  const Constants& k = psi.constants();
  if (vector_potential) {
    if (static_cast<int>(vector_potential->size()) != g.dims()) {
      throw ShapeError("vector potential needs one component per axis");
    }
    for (const RealField& a : *vector_potential) g.require_matches(a, "vector potential");
  }
  const ComplexField& v = psi.values();
  const RealField rho = psi.density();
  CurrentField out;
  out.vector_potential_used = vector_potential.has_value();
  for (int a = 0; a < g.dims(); ++a) {
    const ComplexField dv = derivative(v, g, a);
    RealField j(v.size());
    for (Index i = 0; i < v.size(); ++i) {
      j(i) = (k.hbar / k.mass) * (v(i).real() * dv(i).imag() - v(i).imag() * dv(i).real());
    }
    if (vector_potential) j -= (k.charge / k.mass) * (*vector_potential)[static_cast<std::size_t>(a)].cwiseProduct(rho);
    out.components.push_back(std::move(j));
  }
  return out;
}

double fisher_information(const Wavefunction& psi, int axis) { return fisher_quotient(psi, axis); }

double fisher_information_amplitude_form(const Wavefunction& psi, int axis) {
  const RealField modulus = psi.values().cwiseAbs();
  const RealField d = derivative(modulus, psi.grid(), axis);
  return 4.0 * integrate(RealField(d.cwiseAbs2()), psi.grid());
}

FisherReport generalized_fisher(const Wavefunction& psi) {
  const Grid& g = psi.grid();
  FisherReport r;
  for (int a = 0; a < g.dims(); ++a) {
    const double fi = fisher_information(psi, a);
    const ComplexField dv = derivative(psi.values(), g, a);
    const double gi = 4.0 * integrate(RealField(dv.cwiseAbs2()), g);
    if (gi < fi - 1e-6 * (1.0 + fi)) {
      throw DomainError("generalized Fisher information below Fisher information on axis " + std::to_string(a));
    }
    r.fisher.push_back(fi);
    r.generalized_fisher.push_back(gi);
    r.total_fisher += fi;
    r.total_generalized += gi;
  }
  const Constants& k = psi.constants();
  r.kinetic_energy = k.hbar * k.hbar * r.total_generalized / (8.0 * k.mass);
  return r;
}

std::vector<UncertaintyReport> fisher_bounds(const Wavefunction& psi) {
  const FisherReport f = generalized_fisher(psi);
  std::vector<UncertaintyReport> out;
  for (int a = 0; a < psi.dims(); ++a) {
    const double ix = f.fisher[static_cast<std::size_t>(a)];
    const double ipx = f.generalized_fisher[static_cast<std::size_t>(a)];
    UncertaintyReport r = make_report("fisher_x2", moment(psi, 2, a), 1.0 / ix);
    r.axis = a;
    out.push_back(r);
    for (int n = 1; n <= 3; ++n) {
      const double np1 = static_cast<double>(n + 1);
      const double mn = moment(psi, n, a);
      UncertaintyReport rn = make_report("fisher_x2n2", moment(psi, 2 * n + 2, a), np1 * np1 * mn * mn / ix);
      rn.n = n;
      rn.axis = a;
      out.push_back(rn);
    }
    const double mean = moment(psi, 1, a);
    UncertaintyReport rv = make_report("fisher_variance", moment(psi, 2, a) - mean * mean, 1.0 / ipx);
    rv.axis = a;
    rv.a = mean;
    out.push_back(rv);
  }
  return out;
}

}  // namespace qmprob
