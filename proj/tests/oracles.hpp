#pragma once

// Reference values computed without the library: closed forms, quadrature of
// analytic callables, a brute-force DFT and a separate ODE integrator.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <utility>
#include <vector>

namespace oracle {

using cd = std::complex<double>;

/// Composite Simpson rule with `n` (even) intervals.
template <typename F>
auto simpson(F f, double a, double b, int n = 40000) {
  const double h = (b - a) / n;
  auto sum = f(a) + f(b);
  for (int k = 1; k < n; ++k) sum += (k % 2 ? 4.0 : 2.0) * f(a + k * h);
  return sum * (h / 3.0);
}

inline double double_factorial(int n) {
  double r = 1.0;
  for (int k = n; k > 1; k -= 2) r *= k;
  return r;
}

/// ⟨xⁿ⟩ for ρ ∝ exp(−α(x − c)²), i.e. x = c + σZ with σ² = 1/(2α).
inline double gaussian_moment(int n, double alpha, double center = 0.0) {
  const double sigma = std::sqrt(0.5 / alpha);
  double sum = 0.0;
  double binom = 1.0;
  for (int k = 0; k <= n; ++k) {
    if (k % 2 == 0) sum += binom * std::pow(center, n - k) * std::pow(sigma, k) * double_factorial(k - 1);
    binom = binom * (n - k) / (k + 1);
  }
  return sum;
}

/// An amplitude given by closed-form ψ(x) and ψ'(x); not necessarily normalized.
struct Analytic {
  std::function<cd(double)> psi;
  std::function<cd(double)> dpsi;
  double lo = -12.0;
  double hi = 12.0;
};

inline double g0(double x, double alpha, double c) {
  return std::pow(alpha / std::numbers::pi, 0.25) * std::exp(-0.5 * alpha * (x - c) * (x - c));
}

/// (α/π)^{1/4} e^{−α(x−c)²/2} e^{i b x + i β (x−c)²/2}.
inline Analytic chirped(double alpha, double beta, double b, double c = 0.0) {
  Analytic a;
  a.psi = [=](double x) { return g0(x, alpha, c) * std::polar(1.0, b * x + 0.5 * beta * (x - c) * (x - c)); };
  a.dpsi = [=](double x) {
    const double d = x - c;
    return a.psi(x) * cd(-alpha * d, b + beta * d);
  };
  return a;
}

inline Analytic gaussian(double alpha, double b = 0.0, double c = 0.0) { return chirped(alpha, 0.0, b, c); }

/// √(2α)(x−c) times the Gaussian above (β = 0).
inline Analytic hermite1(double alpha, double b = 0.0, double c = 0.0) {
  Analytic a;
  const Analytic g = gaussian(alpha, b, c);
  a.psi = [=](double x) { return std::sqrt(2.0 * alpha) * (x - c) * g.psi(x); };
  a.dpsi = [=](double x) { return std::sqrt(2.0 * alpha) * (g.psi(x) + (x - c) * g.dpsi(x)); };
  return a;
}

/// w·G(α, c − s/2) + (1 − w)·G(α₂, c + s/2)·e^{ibx}.
inline Analytic mixture(double alpha, double alpha2, double sep, double w, double b, double c = 0.0) {
  Analytic a;
  const Analytic left = gaussian(alpha, 0.0, c - 0.5 * sep);
  const Analytic right = gaussian(alpha2, b, c + 0.5 * sep);
  a.psi = [=](double x) { return w * left.psi(x) + (1.0 - w) * right.psi(x); };
  a.dpsi = [=](double x) { return w * left.dpsi(x) + (1.0 - w) * right.dpsi(x); };
  return a;
}

inline double norm(const Analytic& a) {
  return simpson([&](double x) { return std::norm(a.psi(x)); }, a.lo, a.hi);
}

inline double moment(const Analytic& a, int n) {
  return simpson([&](double x) { return std::pow(x, n) * std::norm(a.psi(x)); }, a.lo, a.hi) / norm(a);
}

/// ∫(ρ')²/ρ with ρ' = 2 Re(ψ* ψ') evaluated in closed form.
inline double fisher(const Analytic& a) {
  return simpson(
             [&](double x) {
               const double rho = std::norm(a.psi(x));
               if (rho < 1e-300) return 0.0;
               const double drho = 2.0 * std::real(std::conj(a.psi(x)) * a.dpsi(x));
               return drho * drho / rho;
             },
             a.lo, a.hi) /
         norm(a);
}

/// 4∫|ψ'|².
inline double generalized_fisher(const Analytic& a) {
  return 4.0 * simpson([&](double x) { return std::norm(a.dpsi(x)); }, a.lo, a.hi) / norm(a);
}

/// ∫ψ*(−iħψ') (real part).
inline double mean_momentum(const Analytic& a, double hbar = 1.0) {
  return hbar * simpson([&](double x) { return std::imag(std::conj(a.psi(x)) * a.dpsi(x)); }, a.lo, a.hi) / norm(a);
}

/// variance(x) · ∫|−iħψ' − ⟨p⟩ψ|².
inline double heisenberg(const Analytic& a, double hbar = 1.0) {
  const double nrm = norm(a);
  const double mx = moment(a, 1);
  const double var = moment(a, 2) - mx * mx;
  const double p = mean_momentum(a, hbar);
  const double second = simpson([&](double x) { return std::norm(cd(0, -hbar) * a.dpsi(x) - p * a.psi(x)); },
                                a.lo, a.hi) / nrm;
  return var * second;
}

/// φ(p) = (2πħ)^{-1/2} Σ_j ψ_j e^{−i p x_j/ħ} Δx, summed directly.
inline cd dft(const std::vector<double>& x, const std::vector<cd>& psi, double p, double hbar = 1.0) {
  const double dx = x[1] - x[0];
  cd sum = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) sum += psi[j] * std::polar(1.0, -p * x[j] / hbar);
  return sum * dx / std::sqrt(2.0 * std::numbers::pi * hbar);
}

/// Free evolution of (α/π)^{1/4} e^{−αx²/2}.
inline cd free_gaussian(double x, double t, double alpha, double hbar = 1.0, double mass = 1.0) {
  const cd s = 1.0 + cd(0.0, alpha * hbar * t / mass);
  return std::pow(alpha / std::numbers::pi, 0.25) / std::sqrt(s) * std::exp(-0.5 * alpha * x * x / s);
}

inline double free_gaussian_variance(double t, double alpha, double hbar = 1.0, double mass = 1.0) {
  const double r = alpha * hbar * t / mass;
  return 0.5 / alpha * (1.0 + r * r);
}

/// Störmer–Verlet for m ẍ = F(x), returning (x, p) at t.
inline std::pair<double, double> verlet(const std::function<double(double)>& force, double x, double p, double mass,
                                        double t, int steps) {
  const double h = t / steps;
  for (int k = 0; k < steps; ++k) {
    p += 0.5 * h * force(x);
    x += h * p / mass;
    p += 0.5 * h * force(x);
  }
  return {x, p};
}

/// Verlet with Richardson extrapolation over steps and 2·steps (fourth order).
inline std::pair<double, double> classical(const std::function<double(double)>& force, double x, double p,
                                           double mass, double t, int steps = 200000) {
  const auto a = verlet(force, x, p, mass, t, steps);
  const auto b = verlet(force, x, p, mass, t, 2 * steps);
  return {(4.0 * b.first - a.first) / 3.0, (4.0 * b.second - a.second) / 3.0};
}

/// Log-ratio order estimate for errors at spacings h and h/2.
inline double order(double coarse, double fine) { return std::log2(coarse / fine); }

}  // namespace oracle
