#pragma once

#include <random>
#include <vector>

#include "qmprob/families.hpp"
#include "qmprob/grid.hpp"

namespace testing {

inline qmprob::Grid line(double lo, double hi, qmprob::Index n, int order = 4,
                         qmprob::Quadrature rule = qmprob::Quadrature::trapezoid) {
  return qmprob::Grid({qmprob::Axis{lo, hi, n}}, qmprob::GridOptions{order, rule});
}

inline qmprob::Wavefunction family(qmprob::Family f, qmprob::FamilyParams p, const qmprob::Grid& g,
                                   qmprob::Constants k = {}) {
  return qmprob::make_family(f, p, g, k);
}

inline qmprob::Wavefunction gaussian(const qmprob::Grid& g, double alpha = 1.0, double b = 0.0, double center = 0.0) {
  qmprob::FamilyParams p;
  p.alpha = alpha;
  p.b = b;
  p.center = center;
  return qmprob::make_family(qmprob::Family::gaussian, p, g);
}

inline qmprob::Wavefunction chirped(const qmprob::Grid& g, double alpha, double beta, double b = 0.0) {
  qmprob::FamilyParams p;
  p.alpha = alpha;
  p.beta = beta;
  p.b = b;
  return qmprob::make_family(qmprob::Family::chirped_gaussian, p, g);
}

/// The randomized state set used by property tests.
inline std::vector<qmprob::Wavefunction> random_states(int count, const qmprob::Grid& g, unsigned seed = 2024) {
  std::vector<qmprob::Wavefunction> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    std::mt19937_64 rng(seed + static_cast<unsigned>(i));
    out.push_back(qmprob::random_mixture(rng, g));
  }
  return out;
}

}  // namespace testing
