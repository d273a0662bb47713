#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qmprob/amplitude.hpp"
#include "qmprob/current_fisher.hpp"
#include "qmprob/spacetime.hpp"

namespace qmprob {

/// Sign of the kinetic term. The negative branch evolves with
/// H = −(−iħ∇ − qA)²/2m₀ + qU, the Hamiltonian reached by complex
/// conjugation of the positive branch.
enum class EnergyBranch { positive, negative };

enum class Boundary { dirichlet, periodic };

struct SolverMetadata {
  std::string scheme;
  double dt = 0.0;
  double dx = 0.0;  ///< spacing along axis 0
  int order = 2;    ///< spatial stencil order
  Index steps = 0;
  Index save_every = 1;
};

/// Saved frames of one run. `frames` holds ψ (Schrödinger, Klein-Gordon) or
/// the upper spinor component (Dirac); `companions` holds ∂ψ/∂t for
/// Klein-Gordon and the lower component for Dirac, and is empty otherwise.
struct Trajectory {
  Trajectory(Grid g, Constants k) : grid(std::move(g)), constants(k) {}

  Grid grid;
  Constants constants;
  double c = 1.0;
  EnergyBranch branch = EnergyBranch::positive;
  std::optional<VectorPotential> vector_potential;
  std::vector<double> times;
  std::vector<ComplexField> frames;
  std::vector<ComplexField> companions;
  SolverMetadata metadata;

  Index size() const { return static_cast<Index>(frames.size()); }
  Wavefunction frame(Index i) const {
    return Wavefunction::unchecked(grid, frames.at(static_cast<std::size_t>(i)), constants);
  }
  /// ∫|ψ|² dV of frame i, plus the lower component when present.
  double norm(Index i) const;
};

struct SchrodingerOptions {
  double dt = 1e-3;
  Index steps = 1000;
  Index save_every = 1;
  std::optional<VectorPotential> vector_potential;
  EnergyBranch branch = EnergyBranch::positive;
};

/// Crank–Nicolson with a three-point Laplacian and homogeneous Dirichlet
/// boundaries. A vector potential enters through Peierls phases
/// e^{∓iqA h/ħ} on the nearest-neighbour couplings.
Trajectory evolve_schrodinger(const Wavefunction& psi0, const RealField& potential, const SchrodingerOptions& options);

/// Throws InvalidArgument if the potential has a non-zero imaginary part.
Trajectory evolve_schrodinger(const Wavefunction& psi0, const ComplexField& potential,
                              const SchrodingerOptions& options);

/// Strang split-step Fourier propagator on a periodic one-dimensional domain
/// of period N·h. ⟨x⟩ and ⟨p⟩ follow the velocity-Verlet map exactly for
/// potentials of degree ≤ 2.
Trajectory evolve_schrodinger_split(const Wavefunction& psi0, const RealField& potential, double dt, Index steps,
                                    Index save_every = 1);

/// Discrete Hamiltonian applied to ψ, matching evolve_schrodinger's operator.
ComplexField apply_hamiltonian(const Wavefunction& psi, const RealField& potential,
                               const std::optional<VectorPotential>& vector_potential = {});

struct GroundStateOptions {
  double dtau = 0.05;
  Index max_steps = 20000;
  double tolerance = 1e-13;  ///< max |Δψ| between iterations
};

/// Lowest eigenvector of the Crank–Nicolson Hamiltonian by implicit
/// imaginary-time relaxation, starting from a Gaussian.
Wavefunction ground_state(const Grid& grid, const RealField& potential, Constants constants = {},
                          GroundStateOptions options = {});

struct KleinGordonOptions {
  double dt = 1e-3;
  Index steps = 1000;
  Index save_every = 1;
  int laplacian_order = 2;  ///< 2 or 4
};

/// Leapfrog for (Δ − c⁻²∂²_t − m₀²c²/ħ²)ψ = 0 with ψ = 0 on the boundary
/// (odd reflection supplies ghost points). Throws DomainError before
/// stepping if c·dt/dx > 1 or the scheme's stability bound
/// (c dt)²(λ_max + m₀²c²/ħ²) ≤ 4 fails.
Trajectory evolve_klein_gordon(const Grid& grid, const ComplexField& psi0, const ComplexField& dpsi0_dt,
                               Constants constants, double c, const KleinGordonOptions& options);

/// Dirichlet Laplacian used by evolve_klein_gordon.
ComplexField klein_gordon_laplacian(const ComplexField& psi, const Grid& grid, int order);

/// Two-component field for the 1+1D Dirac equation
/// iħ∂ψ/∂t = c σ_x (−iħ∂/∂x) ψ + m₀c² σ_z ψ, i.e. γ⁰ = σ_z, γ¹ = iσ_y.
struct SpinorField {
  Grid grid;
  ComplexField upper;
  ComplexField lower;
  double mass = 1.0;
  double c = 1.0;
  double hbar = 1.0;

  double norm() const;
};

struct DiracOptions {
  double dt = 1e-3;
  Index steps = 1000;
  Index save_every = 1;
  Boundary boundary = Boundary::dirichlet;  ///< periodic uses period N·h
};

/// Strang splitting: exact mass rotation for dt/2, Crank–Nicolson transport
/// of the σ_x eigencomponents with an antisymmetric fourth-order difference,
/// mass rotation for dt/2. Throws DomainError if c·dt/dx > 1.
Trajectory evolve_dirac_1d(const SpinorField& spinor0, const DiracOptions& options);

/// ‖(Δ − c⁻²∂²_t − m₀²c²/ħ²)χ‖ / ‖χ‖ over points at least two samples away
/// from every spatial and temporal edge.
double variational_residual(const SpaceTimeAmplitude& chi);

/// Frames of a trajectory as a space-time amplitude on [t₀, t_last] (no validation).
SpaceTimeAmplitude to_spacetime(const Trajectory& trajectory);

/// max |∂ρ/∂t + ∇·j| over interior points of the interior frames, times
/// t_char / max ρ with t_char = 2m₀σ²/ħ from the initial variance σ².
double continuity_residual(const Trajectory& trajectory);

struct ConjugateState {
  Wavefunction psi;
  double charge = 0.0;
  EnergyBranch branch = EnergyBranch::negative;
};

/// ψ* with charge −q and the opposite kinetic branch. Evolving the result in
/// the same U and A reproduces the conjugate of evolving ψ.
ConjugateState charge_conjugate(const Wavefunction& psi, EnergyBranch branch = EnergyBranch::positive);

/// χ* with the charge negated, which flips j_t.
SpaceTimeAmplitude charge_conjugate(const SpaceTimeAmplitude& chi);

/// Crank–Nicolson on a 2D grid with one axis per particle:
/// e^{−iUdt/2ħ} K₁(dt/2) K₂(dt) K₁(dt/2) e^{−iUdt/2ħ}.
Trajectory two_particle_evolve(const Wavefunction& psi0, double m1, double m2, const RealField& potential, double dt,
                               Index steps, Index save_every = 1);

}  // namespace qmprob
