#pragma once

#include <optional>
#include <vector>

#include "qmprob/amplitude.hpp"
#include "qmprob/uncertainty.hpp"

namespace qmprob {

/// Time grid on [0, t_max] with `steps` intervals (even, at least 64) and
/// Simpson weights.
Grid make_time_grid(double t_max, Index steps, int accuracy_order = 4);

/// Real envelope η(t) that makes space-time norms finite.
struct DecayEnvelope {
  enum class Kind { exponential };

  Kind kind = Kind::exponential;
  double tau = 1.0;
  Grid time_grid;
  RealField samples;  ///< η(tᵢ)

  double t_max() const { return time_grid.axis(0).upper; }
  /// ∫₀^{T_max} η² dt in closed form, 1 − e^{−T_max/τ}.
  double truncated_norm() const;
  /// True when T_max < 20τ, where the lost tail exceeds e^{−20}.
  bool truncated() const { return t_max() < 20.0 * tau; }
};

/// η(t) = e^{−t/(2τ)} / √τ.
DecayEnvelope exponential_envelope(double tau, const Grid& time_grid);

/// χ(r, t) sampled as one column per time index.
class SpaceTimeAmplitude {
 public:
  /// Validates the space-time norm (1 within 1e-5, or the envelope's
  /// truncated norm within 1e-5 when `truncation_norm` is given) and spatial
  /// boundary decay of every time slice.
  static SpaceTimeAmplitude validated(Grid space, Grid time, Eigen::MatrixXcd values, Constants constants,
                                      double c, std::optional<double> truncation_norm = {},
                                      AmplitudeTolerances tolerances = {});
  /// No validation; for solver output whose properties are under test.
  static SpaceTimeAmplitude raw(Grid space, Grid time, Eigen::MatrixXcd values, Constants constants, double c);

  const Grid& space() const { return space_; }
  const Grid& time() const { return time_; }
  const Eigen::MatrixXcd& values() const { return values_; }
  const Constants& constants() const { return constants_; }
  double c() const { return c_; }
  Index time_points() const { return time_.size(); }
  ComplexField slice(Index t) const { return values_.col(t); }

  /// ∫₀^{T_max}∫|χ|² dV dt.
  double norm() const;
  /// Set when validation accepted a norm short of 1 because of envelope truncation.
  bool truncation_warning() const { return truncation_warning_; }
  std::optional<double> tau() const { return tau_; }
  void set_tau(double tau) { tau_ = tau; }

 private:
  SpaceTimeAmplitude(Grid space, Grid time, Eigen::MatrixXcd values, Constants constants, double c);

  Grid space_;
  Grid time_;
  Eigen::MatrixXcd values_;
  Constants constants_;
  double c_ = 1.0;
  bool truncation_warning_ = false;
  std::optional<double> tau_;
};

/// χ(·, tᵢ) = ψ(·, tᵢ) η(tᵢ) from one unit-norm slice per time point.
SpaceTimeAmplitude make_chi(const std::vector<Wavefunction>& psi_of_t, const DecayEnvelope& envelope, double c = 1.0);

/// χ = e^{−iωt} ψ(r) η(t) for a stationary state.
SpaceTimeAmplitude make_chi(const Wavefunction& psi, double omega, const DecayEnvelope& envelope, double c = 1.0);

/// χ = e^{−i(Et − p·r)/ħ} η(t) Π_k (α/π)^{1/4} e^{−αx_k²/2}; `momentum`
/// holds one entry per spatial axis (missing entries are zero).
SpaceTimeAmplitude free_amplitude(double energy, const std::vector<double>& momentum, double alpha,
                                  const Grid& space, const DecayEnvelope& envelope, Constants constants, double c);

/// ∂χ/∂t with the time grid's stencil; one-sided at t = 0 and t = T_max.
Eigen::MatrixXcd time_derivative(const SpaceTimeAmplitude& chi);

/// ∫₀^{T_max}∫ tⁿ |χ|² dV dt, n ≤ 4.
double time_moment(const SpaceTimeAmplitude& chi, int n);

/// j_t = (ħ/2m₀)[χ* i∂χ/∂t + c.c.] = −(ħ/m₀) Im(χ* ∂χ/∂t), one column per time point.
Eigen::MatrixXd time_current(const SpaceTimeAmplitude& chi);

/// Re ∫∫ χ* i∂χ/∂t dV dt, the b′ minimizing the time–energy product.
double optimal_energy_shift(const SpaceTimeAmplitude& chi);

/// ⟨t²⟩ · ∫∫|i∂χ/∂t − b′χ|² dV dt ≥ ¼; b′ defaults to optimal_energy_shift.
UncertaintyReport time_energy_product(const SpaceTimeAmplitude& chi, std::optional<double> b_prime = {});

struct SpaceTimeFisher {
  double time = 0.0;            ///< I″_t = 4∫∫|∂χ/∂t|²
  std::vector<double> spatial;  ///< I″_k = 4∫∫|∂χ/∂x_k|²
};

SpaceTimeFisher spacetime_fisher(const SpaceTimeAmplitude& chi);

/// I″_t / c² − Σ_k I″_k; compare with 4m₀²c²/ħ².
double relativistic_invariant(const SpaceTimeAmplitude& chi);

/// Sampling used when building free amplitudes for extrapolation studies.
struct SpaceTimeResolution {
  double phase_step = 0.1;    ///< largest phase advance E·dt/ħ or p·dx/ħ per sample
  double max_dt = 0.1;
  double max_dx = 0.1;
  double extent = 6.5;        ///< spatial half-width in units of 1/√α
  double tmax_factor = 25.0;  ///< T_max = tmax_factor · τ
};

/// One finite-(τ, α) evaluation.
struct ParameterRun {
  double tau = 0.0;
  double alpha = 0.0;
  double invariant = 0.0;
  double energy_side = 0.0;    ///< ∫∫|iħ∂χ/∂t|² dV dt
  double momentum_side = 0.0;  ///< c² ∫∫|−iħ∇χ|² dV dt
};

/// Least-squares fit of c₀ + c₁/τ + c₂/τ² + c₃α over the runs; returns c₀.
double extrapolate_limit(const std::vector<double>& tau, const std::vector<double>& alpha,
                         const std::vector<double>& values);

struct InvariantStudy {
  std::vector<ParameterRun> runs;  ///< every (τ, α) pair, τ-major
  double extrapolated = 0.0;       ///< τ → ∞, α → 0
  double target = 0.0;             ///< 4m₀²c²/ħ²
  double relative_error = 0.0;
};

/// Free amplitudes on a one-dimensional spatial grid for every pair from
/// tau_seq × alpha_seq, extrapolated to τ → ∞, α → 0.
InvariantStudy invariant_study(double energy, double momentum, Constants constants, double c,
                               const std::vector<double>& tau_seq, const std::vector<double>& alpha_seq,
                               SpaceTimeResolution resolution = {});

struct DispersionReport {
  double energy = 0.0;
  double momentum = 0.0;
  double mass = 0.0;
  double c = 1.0;
  std::vector<ParameterRun> runs;
  double extrapolated = 0.0;         ///< energy side − momentum side at τ → ∞, α → 0 (E² − c²p²)
  double residual = 0.0;             ///< extrapolated − m₀²c⁴
  double predicted_residual = 0.0;   ///< E² − c²p² − m₀²c⁴ evaluated algebraically
  bool on_shell = false;             ///< |residual| < 1e-3 m₀²c⁴
  bool assert_on_shell = false;
  bool violation = false;            ///< assert_on_shell requested and the check failed
};

/// Both sides of ∫∫|iħ∂χ/∂t|² = c²∫∫|−iħ∇χ|² + m₀²c⁴ for free amplitudes.
/// Requires tau_seq increasing and alpha_seq decreasing, each of length ≥ 3.
DispersionReport dispersion_check(double energy, double momentum, double m0, double c,
                                  const std::vector<double>& tau_seq, const std::vector<double>& alpha_seq,
                                  double hbar = 1.0, bool assert_on_shell = false,
                                  SpaceTimeResolution resolution = {});

}  // namespace qmprob
