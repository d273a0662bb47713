#pragma once

#include <vector>

#include "qmprob/grid.hpp"

namespace qmprob {

/// Physical constants carried by an amplitude.
struct Constants {
  double hbar = 1.0;
  double mass = 1.0;
  double charge = 1.0;
};

struct AmplitudeTolerances {
  double norm = 1e-6;      ///< allowed |∫|ψ|² dV − 1|
  double boundary = 1e-8;  ///< allowed boundary-to-peak density ratio
};

/// Complex probability amplitude sampled on a grid.
///
/// Every instance built through `from_samples` or `adopt` has unit norm
/// (within the stored tolerance) and a density that has decayed at the grid
/// boundary, so downstream integrations by parts may drop boundary terms.
class Wavefunction {
 public:
  /// Rescales `values` to unit norm, then validates boundary decay.
  static Wavefunction from_samples(Grid grid, ComplexField values, Constants constants = {},
                                   AmplitudeTolerances tolerances = {});
  /// Validates norm and decay without rescaling.
  static Wavefunction adopt(Grid grid, ComplexField values, Constants constants = {},
                            AmplitudeTolerances tolerances = {});
  /// No validation; used for solver frames whose norm is the quantity under test.
  static Wavefunction unchecked(Grid grid, ComplexField values, Constants constants = {});

  const Grid& grid() const { return grid_; }
  const ComplexField& values() const { return values_; }
  const Constants& constants() const { return constants_; }
  double norm_residual() const { return norm_residual_; }
  int dims() const { return grid_.dims(); }

  RealField density() const { return values_.cwiseAbs2(); }
  double norm() const;

 private:
  Wavefunction(Grid grid, ComplexField values, Constants constants)
      : grid_(std::move(grid)), values_(std::move(values)), constants_(constants) {}

  Grid grid_;
  ComplexField values_;
  Constants constants_;
  double norm_residual_ = 0.0;
};

/// Boundary decay check; throws DomainError naming the first offending face.
void require_boundary_decay(const Grid& grid, const RealField& density, double tolerance);

/// Polar decomposition ψ = exp(i s₁ − s₂) with ρ = |ψ|², s₂ = −½ ln ρ.
///
/// The phase is carried only through its gradient. Points with
/// ρ < rho_floor · max ρ are masked out: grad_s1 and s2 are zero there.
struct PolarFields {
  RealField rho;
  std::vector<RealField> grad_s1;
  RealField s2;
  Mask mask;
};

inline constexpr double default_rho_floor = 1e-12;

PolarFields decompose(const Wavefunction& psi, double rho_floor = default_rho_floor);

/// ψ = √ρ e^{i s₁} from a density and pointwise phase samples.
Wavefunction compose(const RealField& rho, const RealField& s1, const Grid& grid, Constants constants = {},
                     AmplitudeTolerances tolerances = {});

Wavefunction conjugate(const Wavefunction& psi);

/// Alternative amplitude ξ = ρ^{1/4} e^{i s₁/2}, whose normalization is ∫|ξ|⁴ dV = 1.
ComplexField alternative_amplitude(const RealField& rho, const RealField& s1);

/// ∫|ξ|⁴ dV.
double quartic_norm(const ComplexField& xi, const Grid& grid);

/// Momentum-space amplitude φ(p) of a one-dimensional state.
struct MomentumAmplitude {
  RealField momenta;  ///< ascending, spacing `dp`
  ComplexField values;
  double dp = 0.0;

  RealField density() const { return values.cwiseAbs2(); }
  double norm() const { return density().sum() * dp; }
  double mean() const { return momenta.dot(density()) * dp; }
  double second_moment() const { return momenta.cwiseAbs2().dot(density()) * dp; }
};

/// Unitary discrete Fourier transform
/// φ(p_k) = (2πħ)^{-1/2} Σ_j ψ(x_j) e^{-i p_k x_j / ħ} Δx on p_k = 2πħk / (N Δx).
MomentumAmplitude momentum_representation(const Wavefunction& psi);

/// ⟨−iħ ∂/∂x_axis⟩ evaluated in coordinate space (real part).
double mean_momentum(const Wavefunction& psi, int axis = 0);

}  // namespace qmprob
