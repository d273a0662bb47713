#pragma once

#include <iosfwd>
#include <string>

#include "qmprob/amplitude.hpp"
#include "qmprob/evolution.hpp"
#include "qmprob/spacetime.hpp"

namespace qmprob {

/// Wavefunction CSV:
///
///     # dims=1
///     # axis0=-10,10,512
///     # hbar=1 mass=1 charge=1
///     0,0.0001,0
///     ...
///
/// One `index,re,im` row per point in row-major order. Values use 17
/// significant digits so a round trip is exact.
void write_wavefunction(std::ostream& out, const Wavefunction& psi);

/// Throws ParseError naming the offending line. The loaded state is
/// validated (norm and boundary decay) but not rescaled.
Wavefunction read_wavefunction(std::istream& in, AmplitudeTolerances tolerances = {});

void save_wavefunction(const std::string& path, const Wavefunction& psi);
Wavefunction load_wavefunction(const std::string& path, AmplitudeTolerances tolerances = {});

/// Wavefunction header plus `# nt=<n> dt=<v> tau=<v>` and `# c=<v>`, then
/// one block per time index introduced by `# block=<i> t=<v>`.
void write_spacetime(std::ostream& out, const SpaceTimeAmplitude& chi);
/// Rebuilds the amplitude on a Simpson time grid (odd nt) or trapezoid grid
/// (even nt) without validation.
SpaceTimeAmplitude read_spacetime(std::istream& in);

/// Wavefunction header, the manifest line
/// `# scheme=<name> dt=<v> steps=<n> save_every=<k>`, then one block per
/// saved frame introduced by `# frame=<i> t=<v>`.
void write_trajectory(std::ostream& out, const Trajectory& trajectory);

}  // namespace qmprob
