#include "qmprob/moments.hpp"

#include <cmath>

namespace qmprob {

namespace {

void require_axis(const Wavefunction& psi, int axis) {
  if (axis < 0 || axis >= psi.dims()) throw InvalidArgument("axis " + std::to_string(axis) + " out of range");
}

}  // namespace

double moment(const Wavefunction& psi, int n, int axis) {
  require_axis(psi, axis);
  if (n < 0 || n > max_moment_order) {
    throw InvalidArgument("moment order " + std::to_string(n) + " outside 0.." + std::to_string(max_moment_order));
  }
  const RealField x = psi.grid().coordinate(axis);
  const RealField integrand = x.array().pow(n) * psi.density().array();
  return integrate(integrand, psi.grid());
}

double ibp_residual(const Wavefunction& psi, int n, int axis) {
  const double mn = moment(psi, n, axis);
  const RealField x = psi.grid().coordinate(axis);
  const RealField drho = derivative(psi.density(), psi.grid(), axis);
  const RealField integrand = x.array().pow(n + 1) * drho.array();
  const double lhs = integrate(integrand, psi.grid());
  const double np1 = static_cast<double>(n + 1);
  return std::abs(lhs + np1 * mn) / (1.0 + np1 * std::abs(mn));
}

MomentReport moment_report(const Wavefunction& psi, int n, int axis) {
  MomentReport r;
  r.n = n;
  r.axis = axis;
  r.value = moment(psi, n, axis);
  r.ibp_residual = ibp_residual(psi, n, axis);
  r.flagged = r.ibp_residual > ibp_flag_threshold;
  return r;
}

}  // namespace qmprob
