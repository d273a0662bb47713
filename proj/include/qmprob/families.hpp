#pragma once

#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "qmprob/amplitude.hpp"

namespace qmprob {

/// Analytic test states. The family shape lives on axis 0; extra axes carry a
/// ground-state Gaussian factor with the same α.
enum class Family { gaussian, chirped_gaussian, hermite1, plane_damped, mixture2 };

struct FamilyParams {
  double alpha = 1.0;       ///< Gaussian width parameter, ρ ∝ exp(−α x²)
  double beta = 0.0;        ///< chirp, phase β(x − c)²/2
  double b = 0.0;           ///< linear phase wave number, ⟨p⟩ = ħ b
  double center = 0.0;
  double momentum = 0.0;    ///< plane_damped: momentum p, phase p x / ħ
  double separation = 3.0;  ///< mixture2: distance between the two bumps
  double weight = 0.5;      ///< mixture2: amplitude weight of the left bump
  double alpha2 = 2.0;      ///< mixture2: width parameter of the right bump
};

std::optional<Family> family_from_name(std::string_view name);
std::string_view family_name(Family family);
const std::vector<std::string>& family_names();

/// Unnormalized samples of the family on `grid`.
ComplexField sample_family(Family family, const FamilyParams& params, const Grid& grid, double hbar);

Wavefunction make_family(Family family, const FamilyParams& params, const Grid& grid, Constants constants = {});

/// Closed-form values along axis 0 (absent where no closed form exists).
struct FamilyReference {
  std::optional<double> mean_x;
  std::optional<double> variance_x;
  std::optional<double> mean_p;
  std::optional<double> variance_p;
  std::optional<double> fisher;              ///< I_x
  std::optional<double> generalized_fisher;  ///< I'_x
  std::optional<double> heisenberg;          ///< variance_x · variance_p
};

FamilyReference family_reference(Family family, const FamilyParams& params, double hbar);

/// Random superposition of two or three Gaussians with a smooth random phase
/// (linear plus quadratic, chirp magnitude at least 0.3).
Wavefunction random_mixture(std::mt19937_64& rng, const Grid& grid, Constants constants = {});

}  // namespace qmprob
