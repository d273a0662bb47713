#include "cli.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "qmprob/classical.hpp"
#include "qmprob/current_fisher.hpp"
#include "qmprob/evolution.hpp"
#include "qmprob/families.hpp"
#include "qmprob/io.hpp"
#include "qmprob/moments.hpp"
#include "qmprob/spacetime.hpp"
#include "qmprob/uncertainty.hpp"

namespace qmprob::cli {

namespace {

using nlohmann::ordered_json;

const std::vector<std::string> commands = {"analyze", "uncertainty", "fisher", "spacetime", "evolve", "classical",
                                           "report"};
const std::vector<std::string> report_sections = {"analyze", "uncertainty", "fisher", "spacetime", "evolve",
                                                  "classical"};

double to_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw InvalidArgument("not a number: '" + s + "'");
  }
  if (used != s.size() || !std::isfinite(v)) throw InvalidArgument("not a number: '" + s + "'");
  return v;
}

long long to_integer(const std::string& s) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    throw InvalidArgument("not an integer: '" + s + "'");
  }
  if (used != s.size()) throw InvalidArgument("not an integer: '" + s + "'");
  return v;
}

bool to_bool(const std::string& s) {
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw InvalidArgument("not a boolean: '" + s + "'");
}

double positive(double v, const char* what) {
  if (!(v > 0.0)) throw InvalidArgument(std::string(what) + " must be positive");
  return v;
}

struct Setting {
  std::string key;
  std::string help;
  bool flag = false;
  std::function<void(RunConfig&, const std::string&)> set;
};

const std::vector<Setting>& settings() {
  static const std::vector<Setting> table = {
      {"family", "analytic family: gaussian, chirped_gaussian, hermite1, plane_damped, mixture2", false,
       [](RunConfig& c, const std::string& v) {
         if (!family_from_name(v)) throw InvalidArgument("unknown family '" + v + "'");
         c.family = v;
       }},
      {"input", "Wavefunction CSV file to analyze instead of a family", false,
       [](RunConfig& c, const std::string& v) { c.input = v; }},
      {"alpha", "Gaussian width parameter", false,
       [](RunConfig& c, const std::string& v) { c.alpha = positive(to_double(v), "alpha"); }},
      {"beta", "chirp parameter", false, [](RunConfig& c, const std::string& v) { c.beta = to_double(v); }},
      {"b", "linear phase wave number", false, [](RunConfig& c, const std::string& v) { c.b = to_double(v); }},
      {"center", "packet centre", false, [](RunConfig& c, const std::string& v) { c.center = to_double(v); }},
      {"p", "momentum", false, [](RunConfig& c, const std::string& v) { c.momentum = to_double(v); }},
      {"E", "energy (default m0 c^2, or on-shell with --dispersion)", false,
       [](RunConfig& c, const std::string& v) { c.energy = to_double(v); }},
      {"tau", "lifetime of the decay envelope", false,
       [](RunConfig& c, const std::string& v) { c.tau = positive(to_double(v), "tau"); }},
      {"grid", "spatial grid lo,hi,n", false, [](RunConfig& c, const std::string& v) { c.grid = v; }},
      {"hbar", "reduced Planck constant", false,
       [](RunConfig& c, const std::string& v) { c.hbar = positive(to_double(v), "hbar"); }},
      {"m0", "rest mass", false, [](RunConfig& c, const std::string& v) { c.m0 = positive(to_double(v), "m0"); }},
      {"c", "speed of light", false, [](RunConfig& c, const std::string& v) { c.c = positive(to_double(v), "c"); }},
      {"q", "charge", false, [](RunConfig& c, const std::string& v) { c.q = to_double(v); }},
      {"dispersion", "run the dispersion and invariant extrapolation (spacetime)", true,
       [](RunConfig& c, const std::string& v) { c.dispersion = to_bool(v); }},
      {"random", "number of random states added to the uncertainty suite", false,
       [](RunConfig& c, const std::string& v) {
         const long long n = to_integer(v);
         if (n < 0 || n > 100000) throw InvalidArgument("random must be in 0..100000");
         c.random = static_cast<int>(n);
       }},
      {"seed", "seed for random states", false,
       [](RunConfig& c, const std::string& v) { c.seed = static_cast<unsigned long long>(to_integer(v)); }},
      {"tol", "tolerance for comparisons with closed-form oracles", false,
       [](RunConfig& c, const std::string& v) { c.tolerance = positive(to_double(v), "tol"); }},
      {"output", "JSON report path", false, [](RunConfig& c, const std::string& v) { c.output = v; }},
      {"csv", "CSV table path", false, [](RunConfig& c, const std::string& v) { c.csv = v; }},
      {"jobs", "worker threads for sweeps", false,
       [](RunConfig& c, const std::string& v) {
         const long long n = to_integer(v);
         if (n < 1 || n > 256) throw InvalidArgument("jobs must be in 1..256");
         c.jobs = static_cast<int>(n);
       }},
  };
  return table;
}

const Setting& find_setting(const std::string& key) {
  for (const Setting& s : settings())
    if (s.key == key) return s;
  throw InvalidArgument("unknown key '" + key + "'");
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config '" + path + "'");
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(path + ": expected key=value", number);
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      find_setting(key).set(cfg, value);
    } catch (const InvalidArgument& e) {
      throw ParseError(path + ": " + e.what(), number);
    }
  }
}

Grid parse_grid(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream in(spec);
  std::string part;
  while (std::getline(in, part, ',')) parts.push_back(part);
  if (parts.size() != 3) throw InvalidArgument("grid must be lo,hi,n");
  return Grid({Axis{to_double(parts[0]), to_double(parts[1]), static_cast<Index>(to_integer(parts[2]))}});
}

// Default grids are fine enough that saturated bounds stay within the 1e-9
// relative allowance; an even point count keeps x = 0 off the grid.
std::string grid_spec(const RunConfig& cfg, const std::string& section) {
  if (cfg.grid) return *cfg.grid;
  if (section == "spacetime") return "-10,10,200";
  if (section == "evolve") return "-20,20,800";
  return "-10,10,4000";
}

Constants constants_of(const RunConfig& cfg) {
  Constants k;
  k.hbar = cfg.hbar;
  k.mass = cfg.m0;
  k.charge = cfg.q;
  return k;
}

FamilyParams params_of(const RunConfig& cfg) {
  FamilyParams p;
  p.alpha = cfg.alpha;
  p.beta = cfg.beta;
  p.b = cfg.b;
  p.center = cfg.center;
  p.momentum = cfg.momentum;
  return p;
}

Family family_of(const RunConfig& cfg) { return *family_from_name(cfg.family); }

Wavefunction load_state(const RunConfig& cfg, const Grid& grid) {
  if (cfg.input) return load_wavefunction(*cfg.input);
  return make_family(family_of(cfg), params_of(cfg), grid, constants_of(cfg));
}

std::optional<FamilyReference> reference_of(const RunConfig& cfg) {
  if (cfg.input) return std::nullopt;
  return family_reference(family_of(cfg), params_of(cfg), cfg.hbar);
}

std::string indexed(const std::string& name, const char* key, double v) {
  std::ostringstream s;
  s << name << '[' << key << '=' << v << ']';
  return s.str();
}

Check from_report(const UncertaintyReport& r, std::string name) {
  Check c;
  c.name = std::move(name);
  c.value = r.lhs;
  c.bound = r.bound;
  c.slack = r.slack;
  c.pass = r.holds;
  return c;
}

template <typename R>
std::vector<R> parallel_map(int jobs, std::size_t n, const std::function<R(std::size_t)>& f) {
  std::vector<R> out(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        out[i] = f(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::min<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), n);
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  for (const std::exception_ptr& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

void append(std::vector<Check>& to, const std::vector<Check>& from, const std::string& prefix = "") {
  for (Check c : from) {
    c.name = prefix + c.name;
    to.push_back(std::move(c));
  }
}

// ---- analyze ---------------------------------------------------------------

std::vector<Check> analyze(const RunConfig& cfg) {
  const Grid grid = parse_grid(grid_spec(cfg, "analyze"));
  const Wavefunction psi = load_state(cfg, grid);
  const auto ref = reference_of(cfg);
  std::vector<Check> out;
  out.push_back(close_to("norm", psi.norm(), 1.0, cfg.tolerance));
  const std::complex<double> ci = commutator_integral(psi);
  out.push_back(close_to("commutator_integral.re", ci.real(), 0.0, 1e-5));
  out.push_back(close_to("commutator_integral.im", ci.imag(), 1.0, 1e-5));
  for (int n = 0; n <= 4; ++n) {
    const MomentReport m = moment_report(psi, n);
    out.push_back(at_most(indexed("ibp_residual", "n", n), m.ibp_residual, ibp_flag_threshold));
  }
  if (ref && ref->mean_x) {
    out.push_back(close_to("moment[n=1]", moment(psi, 1), *ref->mean_x, cfg.tolerance * (1.0 + std::abs(*ref->mean_x))));
  }
  if (ref && ref->variance_x) {
    const double mean = moment(psi, 1);
    out.push_back(close_to("variance_x", moment(psi, 2) - mean * mean, *ref->variance_x,
                           cfg.tolerance * (1.0 + *ref->variance_x)));
  }
  const ComplexField xi = alternative_amplitude(psi.density(), RealField::Zero(psi.grid().size()));
  out.push_back(close_to("alternative_quartic_norm", quartic_norm(xi, psi.grid()), 1.0, cfg.tolerance));
  return out;
}

// ---- uncertainty -----------------------------------------------------------

std::vector<Check> uncertainty_suite(const Wavefunction& psi, const std::optional<FamilyReference>& ref,
                                     double tolerance) {
  std::vector<Check> out;
  for (int n = 0; n <= 4; ++n) out.push_back(from_report(schwarz_pair(psi, n), indexed("schwarz_n", "n", n)));
  const UncertaintyReport heis = heisenberg_product(psi);
  Check h = from_report(heis, "heisenberg");
  if (ref && ref->heisenberg) h.oracle = *ref->heisenberg;
  out.push_back(h);
  if (ref && ref->heisenberg) {
    out.push_back(close_to("heisenberg_closed_form", heis.lhs, *ref->heisenberg, tolerance * (1.0 + *ref->heisenberg)));
  }
  const UncertaintyReport refined = refined_product(psi);
  out.push_back(from_report(refined, "refined"));
  out.push_back(at_most("refined_le_heisenberg", refined.lhs, heis.lhs + 1e-9 * (1.0 + heis.lhs)));
  const OptimalShifts s = optimal_shifts(psi);
  out.push_back(from_report(uncertainty_product(psi, s.a + 0.1, s.b + 0.1), "general_ab"));
  return out;
}

std::vector<Check> uncertainty(const RunConfig& cfg) {
  const Grid grid = parse_grid(grid_spec(cfg, "uncertainty"));
  std::vector<Check> out = uncertainty_suite(load_state(cfg, grid), reference_of(cfg), cfg.tolerance);
  const auto random = parallel_map<std::vector<Check>>(cfg.jobs, static_cast<std::size_t>(cfg.random), [&](std::size_t i) {
    std::mt19937_64 rng(cfg.seed + i);
    return uncertainty_suite(random_mixture(rng, grid, constants_of(cfg)), std::nullopt, cfg.tolerance);
  });
  for (std::size_t i = 0; i < random.size(); ++i) append(out, random[i], "random[" + std::to_string(i) + "].");
  return out;
}

// ---- fisher ----------------------------------------------------------------

std::vector<Check> fisher(const RunConfig& cfg) {
  const Grid grid = parse_grid(grid_spec(cfg, "fisher"));
  const Wavefunction psi = load_state(cfg, grid);
  const auto ref = reference_of(cfg);
  const Constants& k = psi.constants();
  std::vector<Check> out;

  const CurrentField j = probability_current(psi);
  const double p_mean = mean_momentum(psi);
  out.push_back(close_to("probability_current", integrate(j.components[0], grid), p_mean / k.mass,
                         cfg.tolerance * (1.0 + std::abs(p_mean / k.mass))));

  const FisherReport f = generalized_fisher(psi);
  if (ref && ref->fisher) {
    out.push_back(close_to("fisher_information", f.fisher[0], *ref->fisher, cfg.tolerance * (1.0 + *ref->fisher)));
  }
  if (ref && ref->generalized_fisher) {
    out.push_back(close_to("generalized_fisher", f.generalized_fisher[0], *ref->generalized_fisher,
                           cfg.tolerance * (1.0 + *ref->generalized_fisher)));
  }
  out.push_back(at_least("generalized_ge_fisher", f.generalized_fisher[0],
                         f.fisher[0] - 1e-6 * (1.0 + f.fisher[0])));
  if (psi.dims() == 1) {
    const MomentumAmplitude phi = momentum_representation(psi);
    const double t_momentum = phi.second_moment() / (2.0 * k.mass);
    out.push_back(close_to("kinetic_energy", f.kinetic_energy, t_momentum, cfg.tolerance * (1.0 + t_momentum)));
  }
  for (const UncertaintyReport& r : fisher_bounds(psi)) {
    out.push_back(from_report(r, r.n > 0 ? indexed(r.name, "n", r.n) : r.name));
  }
  return out;
}

// ---- spacetime -------------------------------------------------------------

std::vector<Check> spacetime(const RunConfig& cfg) {
  const Grid space = parse_grid(grid_spec(cfg, "spacetime"));
  const Wavefunction psi = load_state(cfg, space);
  const double tau = cfg.tau;
  const DecayEnvelope env = exponential_envelope(tau, make_time_grid(25.0 * tau, 1000));
  const double energy = cfg.energy.value_or(cfg.m0 * cfg.c * cfg.c);
  const double omega = energy / cfg.hbar;
  const SpaceTimeAmplitude chi = make_chi(psi, omega, env, cfg.c);
  const Constants& k = psi.constants();
  std::vector<Check> out;

  out.push_back(close_to("space_time_norm", chi.norm(), 1.0, 1e-5));
  out.push_back(close_to("time_moment[n=1]", time_moment(chi, 1), tau, 1e-4 * tau));
  out.push_back(close_to("time_moment[n=2]", time_moment(chi, 2), 2.0 * tau * tau, 1e-3 * 2.0 * tau * tau));
  const UncertaintyReport te = time_energy_product(chi);
  Check tc = from_report(te, "time_energy");
  tc.oracle = 0.5;
  out.push_back(tc);
  out.push_back(close_to("time_energy_closed_form", te.lhs, 0.5, 1e-3 * 0.5));
  out.push_back(close_to("optimal_b_prime", te.b, omega, 1e-4 * std::max(1.0, std::abs(omega))));
  const Eigen::MatrixXd jt = time_current(chi);
  const double jt_total = (jt.transpose() * space.weights()).dot(chi.time().weights());
  out.push_back(close_to("time_current", jt_total, k.hbar * omega / k.mass,
                         1e-4 * std::max(1.0, std::abs(k.hbar * omega / k.mass))));
  const SpaceTimeFisher sf = spacetime_fisher(chi);
  const double it_oracle = 4.0 * (omega * omega + 1.0 / (4.0 * tau * tau));
  out.push_back(close_to("spacetime_fisher.time", sf.time, it_oracle, 1e-3 * it_oracle));
  for (std::size_t a = 0; a < sf.spatial.size(); ++a) {
    out.push_back(at_least("spacetime_fisher.spatial[" + std::to_string(a) + "]", sf.spatial[a], 0.0));
  }

  if (cfg.dispersion) {
    const double rest = cfg.m0 * cfg.m0 * std::pow(cfg.c, 4);
    const double e_disp = cfg.energy.value_or(std::sqrt(rest + std::pow(cfg.c * cfg.momentum, 2)));
    const DispersionReport d =
        dispersion_check(e_disp, cfg.momentum, cfg.m0, cfg.c, {2.0, 4.0, 8.0}, {0.4, 0.2, 0.1}, cfg.hbar, true);
    Check dc = at_most("dispersion_residual", std::abs(d.residual), 1e-3 * rest);
    dc.oracle = d.predicted_residual;
    out.push_back(dc);
    std::vector<double> taus, alphas, inv;
    for (const ParameterRun& r : d.runs) {
      taus.push_back(r.tau);
      alphas.push_back(r.alpha);
      inv.push_back(r.invariant);
    }
    const double target = 4.0 * cfg.m0 * cfg.m0 * cfg.c * cfg.c / (cfg.hbar * cfg.hbar);
    out.push_back(close_to("relativistic_invariant", extrapolate_limit(taus, alphas, inv), target, 1e-3 * target));
  }
  return out;
}

// ---- evolve ----------------------------------------------------------------

// Frequency ω of a(t) ≈ A e^{−iωt} from the least-squares slope of the unwrapped phase.
double fitted_frequency(const std::vector<double>& t, const std::vector<std::complex<double>>& a) {
  std::vector<double> phase(a.size());
  double offset = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double ph = std::arg(a[i]) + offset;
    if (i > 0) {
      while (ph - phase[i - 1] > std::numbers::pi) {
        ph -= 2.0 * std::numbers::pi;
        offset -= 2.0 * std::numbers::pi;
      }
      while (ph - phase[i - 1] < -std::numbers::pi) {
        ph += 2.0 * std::numbers::pi;
        offset += 2.0 * std::numbers::pi;
      }
    }
    phase[i] = ph;
  }
  double st = 0, sp = 0, stt = 0, stp = 0;
  const double n = static_cast<double>(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    st += t[i];
    sp += phase[i];
    stt += t[i] * t[i];
    stp += t[i] * phase[i];
  }
  return -(n * stp - st * sp) / (n * stt - st * st);
}

std::vector<std::complex<double>> projections(const std::vector<ComplexField>& frames, const ComplexField& mode) {
  std::vector<std::complex<double>> a;
  for (const ComplexField& f : frames) a.push_back(mode.dot(f) / mode.squaredNorm());
  return a;
}

std::vector<Check> evolve(const RunConfig& cfg) {
  const Grid grid = parse_grid(grid_spec(cfg, "evolve"));
  const Wavefunction psi = load_state(cfg, grid);
  const Constants& k = psi.constants();
  std::vector<Check> out;

  SchrodingerOptions so;
  so.dt = 1e-3;
  so.steps = 1000;
  so.save_every = 10;
  const Trajectory tr = evolve_schrodinger(psi, RealField(RealField::Zero(grid.size())), so);
  out.push_back(at_most("norm_drift", std::abs(tr.norm(tr.size() - 1) - tr.norm(0)), 1e-8));
  if (!cfg.input && cfg.family == "gaussian" && grid.dims() == 1) {
    const Wavefunction last = tr.frame(tr.size() - 1);
    const double mean = moment(last, 1);
    const double t = tr.times.back();
    const double s = k.hbar * cfg.alpha * t / k.mass;
    out.push_back(close_to("variance_law", moment(last, 2) - mean * mean, (1.0 + s * s) / (2.0 * cfg.alpha), 1e-3));
  }
  out.push_back(at_most("continuity_residual", continuity_residual(tr), 1e-2));

  // Klein-Gordon standing wave sin(kx) on [0, 8π].
  {
    const double kw = 2.0;
    const Grid g({Axis{0.0, 8.0 * std::numbers::pi, 512}});
    const RealField x = g.coordinate(0);
    const ComplexField mode = (kw * x.array()).sin().cast<std::complex<double>>().matrix();
    const double mu = cfg.m0 * cfg.c / cfg.hbar;
    const double omega = cfg.c * std::sqrt(kw * kw + mu * mu);
    KleinGordonOptions ko;
    ko.laplacian_order = 4;
    ko.dt = 0.2 * g.spacing(0) / cfg.c;
    ko.steps = static_cast<Index>(std::ceil(4.0 * std::numbers::pi / omega / ko.dt));
    ko.save_every = 4;
    const Trajectory kg =
        evolve_klein_gordon(g, mode, std::complex<double>(0.0, -omega) * mode, constants_of(cfg), cfg.c, ko);
    const double measured = fitted_frequency(kg.times, projections(kg.frames, mode));
    out.push_back(close_to("klein_gordon_phase_velocity", measured / kw, omega / kw, 1e-3 * omega / kw));
  }

  // Dirac plane wave on a periodic domain of length 16π.
  {
    const Index n = 512;
    const double period = 16.0 * std::numbers::pi;
    const double h = period / static_cast<double>(n);
    const Grid g({Axis{0.0, period - h, n}});
    const double kw = cfg.momentum != 0.0 ? cfg.momentum / cfg.hbar : 1.0;
    const double mc2 = cfg.m0 * cfg.c * cfg.c;
    const double cp = cfg.c * cfg.hbar * kw;
    const double e = std::sqrt(mc2 * mc2 + cp * cp);
    double u = mc2 + e, l = cp;
    const double norm = std::hypot(u, l);
    u /= norm;
    l /= norm;
    const RealField x = g.coordinate(0);
    ComplexField wave(n);
    for (Index i = 0; i < n; ++i) wave(i) = std::polar(1.0 / std::sqrt(period), kw * x(i));
    SpinorField s{g, u * wave, l * wave, cfg.m0, cfg.c, cfg.hbar};
    DiracOptions dopt;
    dopt.boundary = Boundary::periodic;
    dopt.dt = 0.5 * h / cfg.c;
    dopt.steps = 1000;
    dopt.save_every = 5;
    const Trajectory dr = evolve_dirac_1d(s, dopt);
    const double measured = fitted_frequency(dr.times, projections(dr.frames, wave));
    out.push_back(close_to("dirac_frequency", measured, e / cfg.hbar, 1e-3 * e / cfg.hbar));
    out.push_back(at_most("dirac_norm_drift", std::abs(dr.norm(dr.size() - 1) - dr.norm(0)), 1e-7));
  }
  return out;
}

// ---- classical -------------------------------------------------------------

std::vector<Check> classical(const RunConfig& cfg) {
  std::vector<Check> out;
  std::vector<EvaluationPoint> pts;
  for (int i = 1; i <= 20; ++i)
    for (int j = -10; j <= 10; ++j) pts.push_back({{0.2 * j}, 0.1 * i});
  const double p = cfg.momentum != 0.0 ? cfg.momentum : 1.0;
  out.push_back(at_most("hj_residual.free", hj_residual(free_action(p, cfg.m0), pts).max_abs, 1e-10));
  out.push_back(at_most("hj_residual.harmonic", hj_residual(harmonic_action(1.0, cfg.m0, 1.0), pts).relative, 1e-10));

  const std::vector<double> widths = {0.2, 0.1, 0.05};
  std::vector<double> hbars;
  for (double w : widths) hbars.push_back(w * w);
  ClassicalLimitOptions opt;
  opt.mass = cfg.m0;
  const auto tables = parallel_map<ConvergenceTable>(cfg.jobs, 2, [&](std::size_t i) {
    return classical_limit_study(i == 0 ? harmonic_potential(cfg.m0, 1.0) : quartic_potential(), widths, hbars, opt);
  });
  for (const ConvergenceRow& r : tables[0].rows) {
    out.push_back(at_most(indexed("classical_limit.harmonic", "width", r.width), r.deviation, 1e-6));
  }
  double worst = INFINITY;
  for (const ConvergenceRow& r : tables[1].rows)
    if (std::isfinite(r.measured_order)) worst = std::min(worst, r.measured_order);
  out.push_back(at_least("classical_limit.quartic_order", worst, 1.5));
  for (const auto& table : tables) {
    for (const ConvergenceRow& r : table.rows) {
      if (r.truncated) out.push_back(at_most(indexed("classical_limit.boundary", "width", r.width), 1.0, 0.0));
    }
  }
  if (cfg.csv) {
    std::ofstream f(*cfg.csv);
    if (!f) throw Error("cannot open '" + *cfg.csv + "' for writing");
    write_convergence_csv(f, tables[1]);
  }
  return out;
}

std::vector<Check> section(const RunConfig& cfg, const std::string& name) {
  if (name == "analyze") return analyze(cfg);
  if (name == "uncertainty") return uncertainty(cfg);
  if (name == "fisher") return fisher(cfg);
  if (name == "spacetime") return spacetime(cfg);
  if (name == "evolve") return evolve(cfg);
  if (name == "classical") return classical(cfg);
  throw InvalidArgument("unknown command '" + name + "'");
}

ordered_json config_json(const RunConfig& c) {
  ordered_json j;
  j["command"] = c.command;
  if (c.input) {
    j["input"] = *c.input;
  } else {
    j["family"] = c.family;
    j["alpha"] = c.alpha;
    j["beta"] = c.beta;
    j["b"] = c.b;
    j["center"] = c.center;
  }
  j["p"] = c.momentum;
  j["E"] = c.energy ? ordered_json(*c.energy) : ordered_json(nullptr);
  j["tau"] = c.tau;
  j["hbar"] = c.hbar;
  j["m0"] = c.m0;
  j["c"] = c.c;
  j["q"] = c.q;
  j["dispersion"] = c.dispersion;
  j["random"] = c.random;
  j["seed"] = c.seed;
  j["tol"] = c.tolerance;
  j["jobs"] = c.jobs;
  return j;
}

ordered_json grid_json(const RunConfig& c) {
  ordered_json j = ordered_json::object();
  const std::vector<std::string> names =
      c.command == "report" ? report_sections : std::vector<std::string>{c.command};
  for (const std::string& s : names) {
    if (s == "classical") continue;
    const Grid g = parse_grid(grid_spec(c, s));
    j[s] = {{"lower", g.axis(0).lower},
            {"upper", g.axis(0).upper},
            {"points", g.points(0)},
            {"spacing", g.spacing(0)},
            {"accuracy_order", g.accuracy_order()}};
  }
  return j;
}

std::string usage(const CLI::App& app) { return app.help(); }

}  // namespace

Check at_least(std::string name, double value, double bound) {
  Check c;
  c.name = std::move(name);
  c.value = value;
  c.bound = bound;
  c.slack = value - bound;
  c.pass = c.slack >= -1e-9 * (1.0 + std::abs(bound));
  return c;
}

Check at_most(std::string name, double value, double bound) {
  Check c;
  c.name = std::move(name);
  c.value = value;
  c.bound = bound;
  c.slack = bound - value;
  c.pass = c.slack >= 0.0;
  return c;
}

Check close_to(std::string name, double value, double oracle, double tol) {
  Check c;
  c.name = std::move(name);
  c.value = value;
  c.bound = tol;
  c.slack = tol - std::abs(value - oracle);
  c.pass = c.slack >= 0.0;
  c.oracle = oracle;
  return c;
}

std::vector<Check> run_checks(const RunConfig& config) {
  if (config.command != "report") return section(config, config.command);
  const auto parts = parallel_map<std::vector<Check>>(config.jobs, report_sections.size(), [&](std::size_t i) {
    RunConfig sub = config;
    sub.command = report_sections[i];
    sub.jobs = 1;
    if (sub.command != "classical") sub.csv.reset();
    return section(sub, sub.command);
  });
  std::vector<Check> out;
  for (std::size_t i = 0; i < parts.size(); ++i) append(out, parts[i], report_sections[i] + ".");
  return out;
}

ordered_json make_report(const RunConfig& config, const std::vector<Check>& checks, double seconds) {
  ordered_json report;
  report["schema"] = 1;
  report["tool"] = "qmprob";
  report["version"] = "0.1.0";
  report["config"] = config_json(config);
  bool pass = true;
  int failed = 0;
  ordered_json list = ordered_json::array();
  for (const Check& c : checks) {
    pass = pass && c.pass;
    failed += c.pass ? 0 : 1;
    ordered_json e;
    e["name"] = c.name;
    e["value"] = c.value;
    e["bound"] = c.bound;
    e["slack"] = c.slack;
    e["pass"] = c.pass;
    e["oracle"] = c.oracle ? ordered_json(*c.oracle) : ordered_json(nullptr);
    list.push_back(std::move(e));
  }
  report["pass"] = pass;
  report["summary"] = {{"checks", checks.size()}, {"failed", failed}};
  report["checks"] = std::move(list);
  report["grid"] = grid_json(config);
  report["timing"] = {{"seconds", seconds}};
  return report;
}

int run(const std::vector<std::string>& argv) {
  CLI::App app{"Probability-amplitude relations: moments, uncertainty and Fisher bounds, space-time checks, solvers"};
  app.name(argv.empty() ? "qmprob" : argv[0]);
  RunConfig cfg;
  std::optional<std::string> config_path;
  app.add_option("command", cfg.command, "analyze | uncertainty | fisher | spacetime | evolve | classical | report")
      ->required()
      ->check(CLI::IsMember(commands));
  app.add_option_function<std::string>("--config", [&](const std::string& v) { config_path = v; },
                                       "key=value file overriding flags");
  for (const Setting& s : settings()) {
    const std::string flag = "--" + s.key;
    if (s.flag) {
      app.add_flag_function(flag, [&cfg, &s](std::int64_t) { s.set(cfg, "true"); }, s.help);
    } else {
      app.add_option_function<std::string>(
             flag,
             [&cfg, &s](const std::string& v) {
               try {
                 s.set(cfg, v);
               } catch (const InvalidArgument& e) {
                 throw CLI::ValidationError("--" + s.key, e.what());
               }
             },
             s.help)
          ->take_last();
    }
  }
  app.set_version_flag("--version", "qmprob 0.1.0");

  std::vector<std::string> args(argv.begin() + (argv.empty() ? 0 : 1), argv.end());
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    std::cout << usage(app);
    return exit_pass;
  } catch (const CLI::CallForVersion&) {
    std::cout << "qmprob 0.1.0\n";
    return exit_pass;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n" << usage(app);
    return exit_usage;
  }

  const auto start = std::chrono::steady_clock::now();
  std::vector<Check> checks;
  try {
    if (config_path) apply_config_file(cfg, *config_path);
    checks = run_checks(cfg);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_usage;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const ordered_json report = make_report(cfg, checks, seconds);

  std::optional<std::string> path = cfg.output;
  if (!path) {
    if (const char* dir = std::getenv(output_dir_env); dir && *dir) path = std::string(dir) + "/" + cfg.command + ".json";
  }
  if (path) {
    std::ofstream f(*path);
    if (!f) {
      std::cerr << "error: cannot open '" << *path << "' for writing\n";
      return exit_usage;
    }
    f << report.dump(2) << '\n';
    int failed = 0;
    for (const Check& c : checks) failed += c.pass ? 0 : 1;
    std::cout << cfg.command << ": " << checks.size() - static_cast<std::size_t>(failed) << "/" << checks.size()
              << " checks passed; report " << *path << '\n';
  } else {
    std::cout << report.dump(2) << '\n';
  }
  return report["pass"].get<bool>() ? exit_pass : exit_check_failed;
}

int run(int argc, const char* const* argv) { return run(std::vector<std::string>(argv, argv + argc)); }

}  // namespace qmprob::cli
