#include "qmprob/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace qmprob {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_header(std::ostream& out, const Grid& g, const Constants& k) {
  out << "# dims=" << g.dims() << '\n';
  for (int a = 0; a < g.dims(); ++a) {
    const Axis& ax = g.axis(a);
    out << "# axis" << a << '=' << fmt(ax.lower) << ',' << fmt(ax.upper) << ',' << ax.points << '\n';
  }
  out << "# hbar=" << fmt(k.hbar) << " mass=" << fmt(k.mass) << " charge=" << fmt(k.charge) << '\n';
}

void write_rows(std::ostream& out, const ComplexField& v) {
  for (Index i = 0; i < v.size(); ++i) out << i << ',' << fmt(v(i).real()) << ',' << fmt(v(i).imag()) << '\n';
}

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool next(std::string& line) {
    while (std::getline(in_, line)) {
      ++number_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.find_first_not_of(" \t") != std::string::npos) return true;
    }
    return false;
  }
  std::string require(const char* what) {
    std::string line;
    if (!next(line)) throw ParseError(std::string("unexpected end of file, expected ") + what, number_ + 1);
    return line;
  }
  int number() const { return number_; }

 private:
  std::istream& in_;
  int number_ = 0;
};

double parse_double(const std::string& s, int line) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) throw ParseError("not a number: '" + s + "'", line);
  return v;
}

long long parse_int(const std::string& s, int line) {
  long long v = 0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) throw ParseError("not an integer: '" + s + "'", line);
  return v;
}

// "# a=1 b=2" → {a: 1, b: 2}
std::map<std::string, std::string> parse_comment(const std::string& line, int number) {
  if (line.rfind("#", 0) != 0) throw ParseError("expected a '#' header line", number);
  std::istringstream words(line.substr(1));
  std::map<std::string, std::string> out;
  std::string word;
  while (words >> word) {
    const auto eq = word.find('=');
    if (eq == std::string::npos || eq == 0) throw ParseError("malformed header field '" + word + "'", number);
    out[word.substr(0, eq)] = word.substr(eq + 1);
  }
  return out;
}

std::string field(const std::map<std::string, std::string>& m, const std::string& key, int line) {
  const auto it = m.find(key);
  if (it == m.end()) throw ParseError("missing header field '" + key + "'", line);
  return it->second;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

struct Header {
  Grid grid;
  Constants constants;
};

Header read_header(LineReader& r) {
  std::string line = r.require("'# dims=' header");
  const auto dims_field = parse_comment(line, r.number());
  const long long dims = parse_int(field(dims_field, "dims", r.number()), r.number());
  if (dims < 1 || dims > 3) throw ParseError("dims must be 1, 2 or 3", r.number());
  std::vector<Axis> axes;
  for (long long a = 0; a < dims; ++a) {
    line = r.require("axis header");
    const auto f = parse_comment(line, r.number());
    const std::string key = "axis" + std::to_string(a);
    const auto parts = split(field(f, key, r.number()), ',');
    if (parts.size() != 3) throw ParseError(key + " needs lo,hi,n", r.number());
    axes.push_back(Axis{parse_double(parts[0], r.number()), parse_double(parts[1], r.number()),
                        static_cast<Index>(parse_int(parts[2], r.number()))});
  }
  line = r.require("constants header");
  const auto kf = parse_comment(line, r.number());
  Constants k;
  k.hbar = parse_double(field(kf, "hbar", r.number()), r.number());
  k.mass = parse_double(field(kf, "mass", r.number()), r.number());
  k.charge = parse_double(field(kf, "charge", r.number()), r.number());
  const int header_line = r.number();
  try {
    return {Grid(std::move(axes)), k};
  } catch (const Error& e) {
    throw ParseError(std::string("invalid grid: ") + e.what(), header_line);
  }
}

ComplexField read_rows(LineReader& r, Index count) {
  ComplexField v(count);
  for (Index i = 0; i < count; ++i) {
    const std::string line = r.require("data row");
    const auto parts = split(line, ',');
    if (parts.size() != 3) throw ParseError("expected index,re,im", r.number());
    if (parse_int(parts[0], r.number()) != i) throw ParseError("expected index " + std::to_string(i), r.number());
    v(i) = {parse_double(parts[1], r.number()), parse_double(parts[2], r.number())};
  }
  return v;
}

void require_end(LineReader& r) {
  std::string line;
  if (r.next(line)) throw ParseError("unexpected trailing content", r.number());
}

}  // namespace

void write_wavefunction(std::ostream& out, const Wavefunction& psi) {
  write_header(out, psi.grid(), psi.constants());
  write_rows(out, psi.values());
}

Wavefunction read_wavefunction(std::istream& in, AmplitudeTolerances tolerances) {
  LineReader r(in);
  Header h = read_header(r);
  ComplexField v = read_rows(r, h.grid.size());
  require_end(r);
  return Wavefunction::adopt(std::move(h.grid), std::move(v), h.constants, tolerances);
}

void save_wavefunction(const std::string& path, const Wavefunction& psi) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  write_wavefunction(out, psi);
  if (!out) throw Error("write to '" + path + "' failed");
}

Wavefunction load_wavefunction(const std::string& path, AmplitudeTolerances tolerances) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return read_wavefunction(in, tolerances);
}

void write_spacetime(std::ostream& out, const SpaceTimeAmplitude& chi) {
  write_header(out, chi.space(), chi.constants());
  out << "# nt=" << chi.time_points() << " dt=" << fmt(chi.time().spacing(0))
      << " tau=" << fmt(chi.tau().value_or(0.0)) << '\n';
  out << "# c=" << fmt(chi.c()) << '\n';
  const RealField t = chi.time().axis_coordinates(0);
  for (Index k = 0; k < chi.time_points(); ++k) {
    out << "# block=" << k << " t=" << fmt(t(k)) << '\n';
    write_rows(out, chi.values().col(k));
  }
}

SpaceTimeAmplitude read_spacetime(std::istream& in) {
  LineReader r(in);
  Header h = read_header(r);
  std::string line = r.require("'# nt=' header");
  const auto tf = parse_comment(line, r.number());
  const int time_line = r.number();
  const long long nt = parse_int(field(tf, "nt", time_line), time_line);
  const double dt = parse_double(field(tf, "dt", time_line), time_line);
  const double tau = parse_double(field(tf, "tau", time_line), time_line);
  if (nt < 8 || !(dt > 0.0)) throw ParseError("nt must be at least 8 and dt positive", time_line);
  line = r.require("'# c=' header");
  const double c = parse_double(field(parse_comment(line, r.number()), "c", r.number()), r.number());

  Eigen::MatrixXcd values(h.grid.size(), nt);
  double t0 = 0.0;
  for (long long k = 0; k < nt; ++k) {
    line = r.require("block header");
    const auto bf = parse_comment(line, r.number());
    if (parse_int(field(bf, "block", r.number()), r.number()) != k) {
      throw ParseError("expected block " + std::to_string(k), r.number());
    }
    const double t = parse_double(field(bf, "t", r.number()), r.number());
    if (k == 0) t0 = t;
    values.col(static_cast<Index>(k)) = read_rows(r, h.grid.size());
  }
  require_end(r);
  const Quadrature rule = nt % 2 == 1 ? Quadrature::simpson : Quadrature::trapezoid;
  Grid time({Axis{t0, t0 + dt * static_cast<double>(nt - 1), static_cast<Index>(nt)}}, GridOptions{4, rule});
  SpaceTimeAmplitude chi = SpaceTimeAmplitude::raw(std::move(h.grid), std::move(time), std::move(values),
                                                   h.constants, c);
  if (tau > 0.0) chi.set_tau(tau);
  return chi;
}

void write_trajectory(std::ostream& out, const Trajectory& trajectory) {
  write_header(out, trajectory.grid, trajectory.constants);
  const SolverMetadata& m = trajectory.metadata;
  out << "# scheme=" << m.scheme << " dt=" << fmt(m.dt) << " steps=" << m.steps << " save_every=" << m.save_every
      << '\n';
  for (std::size_t k = 0; k < trajectory.frames.size(); ++k) {
    out << "# frame=" << k << " t=" << fmt(trajectory.times[k]) << '\n';
    write_rows(out, trajectory.frames[k]);
  }
}

}  // namespace qmprob
