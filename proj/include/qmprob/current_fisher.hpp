#pragma once

#include <optional>
#include <vector>

#include "qmprob/amplitude.hpp"
#include "qmprob/uncertainty.hpp"

namespace qmprob {

/// Sampled vector potential, one real field per axis.
using VectorPotential = std::vector<RealField>;

/// Probability density current j_k, one component per axis.
struct CurrentField {
  std::vector<RealField> components;
  bool vector_potential_used = false;
};

/// j_k = (ħ/m₀) Im(ψ* ∂ψ/∂x_k) − (q/m₀) A_k ρ.
CurrentField probability_current(const Wavefunction& psi, const std::optional<VectorPotential>& vector_potential = {});

/// I_x = ∫(1/ρ)(∂ρ/∂x)² dV (masked at the default density floor).
double fisher_information(const Wavefunction& psi, int axis = 0);

/// Same information in the amplitude form 4∫(∂√ρ/∂x)² dV.
double fisher_information_amplitude_form(const Wavefunction& psi, int axis = 0);

struct FisherReport {
  std::vector<double> fisher;              ///< I per axis (depends on ρ only)
  std::vector<double> generalized_fisher;  ///< I' = 4∫|∂ψ/∂x_k|² per axis
  double total_fisher = 0.0;
  double total_generalized = 0.0;
  double kinetic_energy = 0.0;  ///< T = ħ² I' / (8 m₀)
};

/// Throws DomainError if I' < I on any axis beyond 1e-6 (1 + I).
FisherReport generalized_fisher(const Wavefunction& psi);

/// ⟨x²⟩ ≥ 1/I_x, ⟨x^{2n+2}⟩ ≥ [(n+1)⟨xⁿ⟩]²/I_x for n = 1..3, and
/// ⟨(x−⟨x⟩)²⟩ ≥ 1/I'_x, for every axis.
std::vector<UncertaintyReport> fisher_bounds(const Wavefunction& psi);

}  // namespace qmprob
