#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "qmprob/evolution.hpp"

namespace qmprob {

using Coordinates = std::vector<double>;

/// Analytic action S(r, t) with its derivatives, for one or more coordinates.
struct ClassicalAction {
  std::function<double(const Coordinates&, double)> action;
  std::function<Coordinates(const Coordinates&, double)> gradient;
  std::function<double(const Coordinates&, double)> time_derivative;
  std::function<double(const Coordinates&, double)> potential;  ///< U(r, t); empty means U = 0
  std::vector<double> masses;  ///< one per coordinate; a single entry applies to all
  double charge = 1.0;
};

struct EvaluationPoint {
  Coordinates r;
  double t = 0.0;
};

struct HJReport {
  double max_abs = 0.0;   ///< max |∂S/∂t + Σ(∂S/∂x_k)²/2m_k + qU|
  double scale = 0.0;     ///< max Σ(∂S/∂x_k)²/2m_k
  double relative = 0.0;  ///< max_abs / scale (max_abs when scale is zero)
};

/// Throws InvalidArgument on non-finite callable values or mismatched sizes.
HJReport hj_residual(const ClassicalAction& action, const std::vector<EvaluationPoint>& points);

/// Free particle S = p x − p² t / 2m₀.
ClassicalAction free_action(double momentum, double mass);

/// Harmonic oscillator action from the generating function for a path
/// starting at x0 at t = 0, valid for 0 < ωt < π.
ClassicalAction harmonic_action(double x0, double mass, double omega);

/// One-dimensional potential and its derivative.
struct Potential1D {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
};

Potential1D harmonic_potential(double mass, double omega);
Potential1D quartic_potential(double coefficient = 0.25);
Potential1D free_potential();

struct ClassicalLimitOptions {
  double x0 = 1.0;
  double p0 = 0.0;
  double mass = 1.0;
  double t_final = 1.0;
  double dt = 1e-3;
  Grid grid = Grid({Axis{-4.0, 4.0, 2048}});
  double boundary_tolerance = 1e-8;  ///< mass within 5% of either edge that flags truncation
};

struct ConvergenceRow {
  double width = 0.0;
  double hbar = 0.0;
  double t = 0.0;
  double deviation = 0.0;           ///< |⟨x⟩ − x_cl| at t
  double momentum_deviation = 0.0;  ///< |ħ ∂s₁/∂x at the density peak − p_cl|
  double mean_momentum_deviation = 0.0;  ///< |⟨p⟩ − p_cl|
  double measured_order = 0.0;      ///< against the previous row; NaN for the first
  double imaginary_part = 0.0;      ///< |Im ∫ψ* Ĥψ dV| at t, zero in exact arithmetic
  bool truncated = false;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
};

/// Evolves exp(−(x−x0)²/4σ² + i p0 x/ħ) with the split-step propagator for
/// each (σ, ħ) pair and compares the packet centre with a fourth-order
/// Runge–Kutta trajectory of m₀ẍ = −U′(x).
ConvergenceTable classical_limit_study(const Potential1D& potential, const std::vector<double>& widths,
                                       const std::vector<double>& hbars, const ClassicalLimitOptions& options = {});

/// Classical trajectory (x, p) at t_final by RK4 with `substeps` steps.
std::pair<double, double> classical_trajectory(const Potential1D& potential, double x0, double p0, double mass,
                                               double t_final, Index substeps = 20000);

void write_convergence_csv(std::ostream& out, const ConvergenceTable& table);

}  // namespace qmprob
