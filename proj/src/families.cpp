#include "qmprob/families.hpp"

#include <cmath>
#include <numbers>

namespace qmprob {

namespace {

using cd = std::complex<double>;

struct NamedFamily {
  Family family;
  const char* name;
};

constexpr NamedFamily kFamilies[] = {
    {Family::gaussian, "gaussian"},       {Family::chirped_gaussian, "chirped_gaussian"},
    {Family::hermite1, "hermite1"},       {Family::plane_damped, "plane_damped"},
    {Family::mixture2, "mixture2"},
};

cd gaussian_1d(double x, double alpha, double center) {
  const double d = x - center;
  return std::pow(alpha / std::numbers::pi, 0.25) * std::exp(-0.5 * alpha * d * d);
}

cd family_1d(Family family, const FamilyParams& p, double x, double hbar) {
  const double d = x - p.center;
  switch (family) {
    case Family::gaussian:
      return gaussian_1d(x, p.alpha, p.center) * std::polar(1.0, p.b * x);
    case Family::chirped_gaussian:
      return gaussian_1d(x, p.alpha, p.center) * std::polar(1.0, p.b * x + 0.5 * p.beta * d * d);
    case Family::hermite1:
      return std::sqrt(2.0 * p.alpha) * d * gaussian_1d(x, p.alpha, p.center) * std::polar(1.0, p.b * x);
    case Family::plane_damped:
      return gaussian_1d(x, p.alpha, p.center) * std::polar(1.0, p.momentum * x / hbar);
    case Family::mixture2: {
      const double s = 0.5 * p.separation;
      return p.weight * gaussian_1d(x, p.alpha, p.center - s) +
             (1.0 - p.weight) * gaussian_1d(x, p.alpha2, p.center + s) * std::polar(1.0, p.b * x);
    }
  }
  return 0.0;
}

}  // namespace

std::optional<Family> family_from_name(std::string_view name) {
  for (const auto& f : kFamilies) {
    if (name == f.name) return f.family;
  }
  return std::nullopt;
}

std::string_view family_name(Family family) {
  for (const auto& f : kFamilies) {
    if (f.family == family) return f.name;
  }
  return "unknown";
}

const std::vector<std::string>& family_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& f : kFamilies) out.emplace_back(f.name);
    return out;
  }();
  return names;
}

ComplexField sample_family(Family family, const FamilyParams& params, const Grid& grid, double hbar) {
  ComplexField out(grid.size());
  std::vector<RealField> coords;
  for (int a = 0; a < grid.dims(); ++a) coords.push_back(grid.coordinate(a));
  for (Index k = 0; k < grid.size(); ++k) {
    cd v = family_1d(family, params, coords[0](k), hbar);
    for (int a = 1; a < grid.dims(); ++a) v *= gaussian_1d(coords[static_cast<std::size_t>(a)](k), params.alpha, 0.0);
    out(k) = v;
  }
  return out;
}

Wavefunction make_family(Family family, const FamilyParams& params, const Grid& grid, Constants constants) {
  return Wavefunction::from_samples(grid, sample_family(family, params, grid, constants.hbar), constants);
}

FamilyReference family_reference(Family family, const FamilyParams& p, double hbar) {
  FamilyReference r;
  const double a = p.alpha;
  switch (family) {
    case Family::gaussian:
    case Family::plane_damped: {
      const double b = family == Family::gaussian ? p.b : p.momentum / hbar;
      r.mean_x = p.center;
      r.variance_x = 1.0 / (2.0 * a);
      r.mean_p = hbar * b;
      r.variance_p = hbar * hbar * a / 2.0;
      r.fisher = 2.0 * a;
      r.generalized_fisher = 2.0 * a + 4.0 * b * b;
      break;
    }
    case Family::chirped_gaussian:
      r.mean_x = p.center;
      r.variance_x = 1.0 / (2.0 * a);
      r.mean_p = hbar * (p.b);
      r.variance_p = hbar * hbar * (a * a + p.beta * p.beta) / (2.0 * a);
      r.fisher = 2.0 * a;
      r.generalized_fisher = 2.0 * (a * a + p.beta * p.beta) / a + 4.0 * p.b * p.b;
      break;
    case Family::hermite1:
      r.mean_x = p.center;
      r.variance_x = 3.0 / (2.0 * a);
      r.mean_p = hbar * p.b;
      r.variance_p = 3.0 * hbar * hbar * a / 2.0;
      r.fisher = 6.0 * a;
      r.generalized_fisher = 6.0 * a + 4.0 * p.b * p.b;
      break;
    case Family::mixture2:
      break;
  }
  if (r.variance_x && r.variance_p) r.heisenberg = *r.variance_x * *r.variance_p;
  return r;
}

Wavefunction random_mixture(std::mt19937_64& rng, const Grid& grid, Constants constants) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };
  const int components = unit(rng) < 0.5 ? 2 : 3;
  struct Bump {
    double center, alpha, weight, phase;
  };
  std::vector<Bump> bumps;
  for (int c = 0; c < components; ++c) {
    bumps.push_back({uniform(-1.5, 1.5), uniform(0.6, 2.5), uniform(0.3, 1.0), uniform(0.0, 2.0 * std::numbers::pi)});
  }
  const double chirp = (unit(rng) < 0.5 ? -1.0 : 1.0) * uniform(0.3, 0.8);
  const double slope = uniform(-1.0, 1.0);

  const RealField x = grid.coordinate(0);
  std::vector<RealField> others;
  for (int a = 1; a < grid.dims(); ++a) others.push_back(grid.coordinate(a));
  ComplexField v(grid.size());
  for (Index k = 0; k < grid.size(); ++k) {
    cd sum = 0.0;
    for (const Bump& bmp : bumps) sum += bmp.weight * gaussian_1d(x(k), bmp.alpha, bmp.center) * std::polar(1.0, bmp.phase);
    sum *= std::polar(1.0, slope * x(k) + 0.5 * chirp * x(k) * x(k));
    for (const RealField& y : others) sum *= gaussian_1d(y(k), 1.0, 0.0);
    v(k) = sum;
  }
  return Wavefunction::from_samples(grid, std::move(v), constants);
}

}  // namespace qmprob
