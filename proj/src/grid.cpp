#include "qmprob/grid.hpp"

#include <cmath>

namespace qmprob {

RealField quadrature_weights(Index points, double h, Quadrature rule) {
  RealField w = RealField::Constant(points, h);
  if (rule == Quadrature::trapezoid) {
    w(0) = w(points - 1) = 0.5 * h;
    return w;
  }
  if (points % 2 == 0) {
    throw InvalidArgument("Simpson quadrature needs an odd point count, got " + std::to_string(points));
  }
  for (Index k = 0; k < points; ++k) w(k) = (k % 2 == 1 ? 4.0 : 2.0) * h / 3.0;
  w(0) = w(points - 1) = h / 3.0;
  return w;
}

Grid::Grid(std::vector<Axis> axes, GridOptions options) : axes_(std::move(axes)), options_(options) {
  if (axes_.empty() || axes_.size() > 3) {
    throw InvalidArgument("grid needs 1 to 3 axes, got " + std::to_string(axes_.size()));
  }
  if (options_.accuracy_order != 2 && options_.accuracy_order != 4) {
    throw InvalidArgument("grid accuracy order must be 2 or 4");
  }
  size_ = 1;
  for (std::size_t a = 0; a < axes_.size(); ++a) {
    const Axis& ax = axes_[a];
    if (ax.points < 8) {
      throw InvalidArgument("axis " + std::to_string(a) + " has " + std::to_string(ax.points) +
                            " points; at least 8 are required");
    }
    if (!std::isfinite(ax.lower) || !std::isfinite(ax.upper) || !(ax.upper > ax.lower)) {
      throw InvalidArgument("axis " + std::to_string(a) + " bounds must be finite and increasing");
    }
    spacing_.push_back((ax.upper - ax.lower) / static_cast<double>(ax.points - 1));
    size_ *= ax.points;
  }
  stride_.assign(axes_.size(), 1);
  for (int a = dims() - 2; a >= 0; --a) stride_[a] = stride_[a + 1] * axes_[a + 1].points;

  weights_ = RealField::Ones(size_);
  for (int a = 0; a < dims(); ++a) {
    const RealField w1 = quadrature_weights(points(a), spacing(a), options_.quadrature);
    const Index n = points(a);
    const Index s = stride(a);
    for (Index flat = 0; flat < size_; ++flat) weights_(flat) *= w1((flat / s) % n);
  }
}

double Grid::volume() const {
  double v = 1.0;
  for (const Axis& ax : axes_) v *= ax.upper - ax.lower;
  return v;
}

RealField Grid::axis_coordinates(int a) const {
  const Axis& ax = axis(a);
  RealField x(ax.points);
  for (Index k = 0; k < ax.points; ++k) x(k) = ax.lower + static_cast<double>(k) * spacing(a);
  x(ax.points - 1) = ax.upper;
  return x;
}

RealField Grid::coordinate(int a) const {
  const RealField line = axis_coordinates(a);
  const Index n = points(a);
  const Index s = stride(a);
  RealField x(size_);
  for (Index flat = 0; flat < size_; ++flat) x(flat) = line((flat / s) % n);
  return x;
}

std::array<Index, 3> Grid::unflatten(Index flat) const {
  std::array<Index, 3> idx{0, 0, 0};
  for (int a = 0; a < dims(); ++a) idx[static_cast<std::size_t>(a)] = (flat / stride(a)) % points(a);
  return idx;
}

bool Grid::on_boundary(Index flat) const {
  const auto idx = unflatten(flat);
  for (int a = 0; a < dims(); ++a) {
    const Index k = idx[static_cast<std::size_t>(a)];
    if (k == 0 || k == points(a) - 1) return true;
  }
  return false;
}

bool Grid::same_points(const Grid& other) const {
  if (dims() != other.dims()) return false;
  for (int a = 0; a < dims(); ++a) {
    const Axis& x = axis(a);
    const Axis& y = other.axis(a);
    if (x.points != y.points || x.lower != y.lower || x.upper != y.upper) return false;
  }
  return true;
}

Grid make_grid(std::vector<Axis> axes, GridOptions options) { return Grid(std::move(axes), options); }

}  // namespace qmprob
