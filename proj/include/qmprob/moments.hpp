#pragma once

#include "qmprob/amplitude.hpp"

namespace qmprob {

inline constexpr int max_moment_order = 8;

/// Residual above which ibp_residual is flagged as a boundary-term failure.
inline constexpr double ibp_flag_threshold = 1e-5;

struct MomentReport {
  int n = 0;
  int axis = 0;
  double value = 0.0;         ///< ⟨xⁿ⟩
  double ibp_residual = 0.0;  ///< relative residual of ∫x^{n+1} ∂ρ/∂x dV = −(n+1)⟨xⁿ⟩
  bool flagged = false;       ///< residual above ibp_flag_threshold
};

/// ⟨xⁿ⟩ = ∫ xⁿ ρ dV along `axis`; n ≤ 8.
double moment(const Wavefunction& psi, int n, int axis = 0);

/// |∫x^{n+1} ∂ρ/∂x dV + (n+1)⟨xⁿ⟩| / (1 + (n+1)|⟨xⁿ⟩|).
///
/// ∂ρ/∂x uses the grid's stencil order, so a small value certifies that
/// quadrature and stencil reproduce the integration by parts with a vanishing
/// boundary term.
double ibp_residual(const Wavefunction& psi, int n, int axis = 0);

MomentReport moment_report(const Wavefunction& psi, int n, int axis = 0);

}  // namespace qmprob
