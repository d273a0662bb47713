#pragma once

#include <complex>
#include <string>

#include "qmprob/amplitude.hpp"

namespace qmprob {

/// One evaluated inequality lhs ≥ bound.
struct UncertaintyReport {
  std::string name;  ///< schwarz_n, general_ab, heisenberg, refined, fisher_*, time_energy
  double lhs = 0.0;
  double bound = 0.0;
  double slack = 0.0;  ///< lhs − bound
  bool holds = false;
  int n = 0;
  int axis = 0;
  double a = 0.0;
  double b = 0.0;
};

/// Fills slack and holds; holds ⇔ slack ≥ −1e-9 (1 + |bound|).
UncertaintyReport make_report(std::string name, double lhs, double bound);

/// ∫[(xψ)*(−i∂ψ/∂x) − (−i∂ψ/∂x)*(xψ)] dV, which equals i for decaying states.
std::complex<double> commutator_integral(const Wavefunction& psi, int axis = 0);

/// (u,u)(v,v) ≥ (n+1)²⟨xⁿ⟩² with (u,u) = ⟨x^{2n+2}⟩ and (v,v) the Fisher information.
UncertaintyReport schwarz_pair(const Wavefunction& psi, int n, int axis = 0);

/// ∫(x−a)²ρ dV · ∫|−iħ∂ψ/∂x − bψ|² dV ≥ ħ²/4.
UncertaintyReport uncertainty_product(const Wavefunction& psi, double a, double b, int axis = 0);

/// Same relation with the shift b replaced by a real field f(r) (vector potential q·A_x).
UncertaintyReport uncertainty_product(const Wavefunction& psi, double a, const RealField& b_field, int axis = 0);

struct OptimalShifts {
  double a = 0.0;  ///< ⟨x⟩
  double b = 0.0;  ///< ⟨−iħ ∂/∂x⟩
};

OptimalShifts optimal_shifts(const Wavefunction& psi, int axis = 0);

/// Heisenberg form: uncertainty_product at the optimal shifts.
UncertaintyReport heisenberg_product(const Wavefunction& psi, int axis = 0);

/// Variance times ∫(1/ρ)[Re(ψ* ħ∂ψ/∂x)]² dV = (ħ²/4) I_x; depends on |ψ| only.
UncertaintyReport refined_product(const Wavefunction& psi, int axis = 0);

/// Masked ∫(1/ρ)(∂ρ/∂x)² dV with ∂ρ/∂x from the grid stencil.
double fisher_quotient(const Wavefunction& psi, int axis = 0, double rho_floor = default_rho_floor);

}  // namespace qmprob
