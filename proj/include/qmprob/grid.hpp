#pragma once

#include <array>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qmprob/error.hpp"

namespace qmprob {

using Eigen::Index;

template <typename Scalar>
using Field = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using RealField = Field<double>;
using ComplexField = Field<std::complex<double>>;
using Mask = Eigen::Array<bool, Eigen::Dynamic, 1>;

enum class Quadrature { trapezoid, simpson };

struct Axis {
  double lower = 0.0;
  double upper = 1.0;
  Index points = 0;
};

struct GridOptions {
  int accuracy_order = 4;  ///< stencil order used when callers pass order 0
  Quadrature quadrature = Quadrature::trapezoid;
};

/// Uniform tensor-product grid in one to three dimensions.
///
/// Points include both end points of every axis. Fields are flattened in
/// row-major order with axis 0 varying slowest, so a 2D point (i, j) lives at
/// `i * points(1) + j`.
class Grid {
 public:
  Grid(std::vector<Axis> axes, GridOptions options = {});

  int dims() const { return static_cast<int>(axes_.size()); }
  const Axis& axis(int a) const { return axes_.at(static_cast<std::size_t>(a)); }
  const std::vector<Axis>& axes() const { return axes_; }
  Index points(int a) const { return axis(a).points; }
  double spacing(int a) const { return spacing_.at(static_cast<std::size_t>(a)); }
  Index stride(int a) const { return stride_.at(static_cast<std::size_t>(a)); }
  Index size() const { return size_; }
  double volume() const;

  int accuracy_order() const { return options_.accuracy_order; }
  Quadrature quadrature() const { return options_.quadrature; }
  const GridOptions& options() const { return options_; }

  const RealField& weights() const { return weights_; }

  /// Coordinates of every axis-`a` grid line (length points(a)).
  RealField axis_coordinates(int a) const;
  /// Coordinate along axis `a` of every flattened point.
  RealField coordinate(int a) const;

  std::array<Index, 3> unflatten(Index flat) const;
  bool on_boundary(Index flat) const;

  /// Same axes and spacing; stencil and quadrature options may differ.
  bool same_points(const Grid& other) const;

  template <typename Derived>
  void require_matches(const Eigen::DenseBase<Derived>& field, const char* what) const {
    if (field.size() != size_) {
      throw ShapeError(std::string(what) + ": field has " + std::to_string(field.size()) +
                       " samples, grid has " + std::to_string(size_));
    }
  }

 private:
  std::vector<Axis> axes_;
  GridOptions options_;
  std::vector<double> spacing_;
  std::vector<Index> stride_;
  Index size_ = 0;
  RealField weights_;
};

Grid make_grid(std::vector<Axis> axes, GridOptions options = {});

/// One-dimensional quadrature weights for `points` samples with spacing `h`.
RealField quadrature_weights(Index points, double h, Quadrature rule);

template <typename Derived>
typename Derived::Scalar integrate(const Eigen::MatrixBase<Derived>& field, const Grid& grid) {
  grid.require_matches(field, "integrate");
  return (field.array() * grid.weights().array().template cast<typename Derived::Scalar>()).sum();
}

namespace stencil {

/// First derivative of a strided line of `n` samples with central differences
/// in the interior and one-sided differences of the same order at the ends.
template <typename Scalar>
void first_derivative(const Scalar* in, Index in_stride, Scalar* out, Index out_stride, Index n,
                      double h, int order) {
  auto f = [&](Index k) { return in[k * in_stride]; };
  auto put = [&](Index k, Scalar v) { out[k * out_stride] = v; };
  if (order == 2) {
    const double c = 1.0 / (2.0 * h);
    put(0, (-3.0 * f(0) + 4.0 * f(1) - f(2)) * c);
    for (Index k = 1; k + 1 < n; ++k) put(k, (f(k + 1) - f(k - 1)) * c);
    put(n - 1, (3.0 * f(n - 1) - 4.0 * f(n - 2) + f(n - 3)) * c);
    return;
  }
  if (order != 4) throw InvalidArgument("derivative: unsupported accuracy order " + std::to_string(order));
  const double c = 1.0 / (12.0 * h);
  put(0, (-25.0 * f(0) + 48.0 * f(1) - 36.0 * f(2) + 16.0 * f(3) - 3.0 * f(4)) * c);
  put(1, (-3.0 * f(0) - 10.0 * f(1) + 18.0 * f(2) - 6.0 * f(3) + f(4)) * c);
  for (Index k = 2; k + 2 < n; ++k) put(k, (f(k - 2) - 8.0 * f(k - 1) + 8.0 * f(k + 1) - f(k + 2)) * c);
  put(n - 2, (3.0 * f(n - 1) + 10.0 * f(n - 2) - 18.0 * f(n - 3) + 6.0 * f(n - 4) - f(n - 5)) * c);
  put(n - 1, (25.0 * f(n - 1) - 48.0 * f(n - 2) + 36.0 * f(n - 3) - 16.0 * f(n - 4) + 3.0 * f(n - 5)) * c);
}

/// Second derivative with the same interior/boundary layout as first_derivative.
template <typename Scalar>
void second_derivative(const Scalar* in, Index in_stride, Scalar* out, Index out_stride, Index n,
                       double h, int order) {
  auto f = [&](Index k) { return in[k * in_stride]; };
  auto put = [&](Index k, Scalar v) { out[k * out_stride] = v; };
  if (order == 2) {
    const double c = 1.0 / (h * h);
    put(0, (2.0 * f(0) - 5.0 * f(1) + 4.0 * f(2) - f(3)) * c);
    for (Index k = 1; k + 1 < n; ++k) put(k, (f(k - 1) - 2.0 * f(k) + f(k + 1)) * c);
    put(n - 1, (2.0 * f(n - 1) - 5.0 * f(n - 2) + 4.0 * f(n - 3) - f(n - 4)) * c);
    return;
  }
  if (order != 4) throw InvalidArgument("second derivative: unsupported accuracy order " + std::to_string(order));
  const double c = 1.0 / (12.0 * h * h);
  put(0, (45.0 * f(0) - 154.0 * f(1) + 214.0 * f(2) - 156.0 * f(3) + 61.0 * f(4) - 10.0 * f(5)) * c);
  put(1, (10.0 * f(0) - 15.0 * f(1) - 4.0 * f(2) + 14.0 * f(3) - 6.0 * f(4) + f(5)) * c);
  for (Index k = 2; k + 2 < n; ++k)
    put(k, (-f(k - 2) + 16.0 * f(k - 1) - 30.0 * f(k) + 16.0 * f(k + 1) - f(k + 2)) * c);
  put(n - 2, (10.0 * f(n - 1) - 15.0 * f(n - 2) - 4.0 * f(n - 3) + 14.0 * f(n - 4) - 6.0 * f(n - 5) + f(n - 6)) * c);
  put(n - 1, (45.0 * f(n - 1) - 154.0 * f(n - 2) + 214.0 * f(n - 3) - 156.0 * f(n - 4) + 61.0 * f(n - 5) -
              10.0 * f(n - 6)) * c);
}

}  // namespace stencil

namespace detail {

inline void require_axis(const Grid& grid, int axis) {
  if (axis < 0 || axis >= grid.dims()) throw InvalidArgument("axis " + std::to_string(axis) + " out of range");
}

inline int resolve_order(const Grid& grid, int order) {
  const int o = order == 0 ? grid.accuracy_order() : order;
  if (o != 2 && o != 4) throw InvalidArgument("unsupported accuracy order " + std::to_string(o));
  return o;
}

template <typename Scalar, typename LineOp>
Field<Scalar> along_axis(const Field<Scalar>& field, const Grid& grid, int axis, LineOp op) {
  require_axis(grid, axis);
  grid.require_matches(field, "derivative");
  Field<Scalar> out(field.size());
  const Index n = grid.points(axis);
  const Index s = grid.stride(axis);
  const Index outer = grid.size() / (n * s);
  for (Index o = 0; o < outer; ++o) {
    for (Index i = 0; i < s; ++i) {
      const Index base = o * n * s + i;
      op(field.data() + base, s, out.data() + base, s, n);
    }
  }
  return out;
}

}  // namespace detail

/// Finite-difference d/dx_axis. `order` 0 selects the grid's configured order.
template <typename Scalar>
Field<Scalar> derivative(const Field<Scalar>& field, const Grid& grid, int axis, int order = 0) {
  detail::require_axis(grid, axis);
  const int o = detail::resolve_order(grid, order);
  const double h = grid.spacing(axis);
  return detail::along_axis<Scalar>(field, grid, axis,
                                    [&](const Scalar* in, Index si, Scalar* out, Index so, Index n) {
                                      stencil::first_derivative(in, si, out, so, n, h, o);
                                    });
}

template <typename Scalar>
Field<Scalar> second_derivative(const Field<Scalar>& field, const Grid& grid, int axis, int order = 0) {
  detail::require_axis(grid, axis);
  const int o = detail::resolve_order(grid, order);
  const double h = grid.spacing(axis);
  return detail::along_axis<Scalar>(field, grid, axis,
                                    [&](const Scalar* in, Index si, Scalar* out, Index so, Index n) {
                                      stencil::second_derivative(in, si, out, so, n, h, o);
                                    });
}

template <typename Scalar>
Field<Scalar> laplacian(const Field<Scalar>& field, const Grid& grid, int order = 0) {
  Field<Scalar> out = second_derivative(field, grid, 0, order);
  for (int a = 1; a < grid.dims(); ++a) out += second_derivative(field, grid, a, order);
  return out;
}

}  // namespace qmprob
