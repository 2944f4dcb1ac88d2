#include "rta/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "rta/errors.hpp"

namespace rta {

Mesh1D::Mesh1D(double x_min, double x_max, std::size_t n_cells)
    : x_min_(x_min), x_max_(x_max), n_cells_(n_cells), dx_(0.0) {
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_max > x_min)) {
    throw InvalidArgument("mesh: degenerate domain [" + std::to_string(x_min) + ", " +
                          std::to_string(x_max) + "]");
  }
  if (n_cells < 2) {
    throw InvalidArgument("mesh: need at least 2 cells, got " + std::to_string(n_cells));
  }
  dx_ = (x_max - x_min) / static_cast<double>(n_cells);
}

double Mesh1D::face(std::size_t j) const {
  if (j >= n_cells_) return x_max_;
  return x_min_ + static_cast<double>(j) * dx_;
}

double Mesh1D::center(std::size_t j) const {
  return x_min_ + (static_cast<double>(j) + 0.5) * dx_;
}

Mesh1D build_mesh(double x_min, double x_max, std::size_t n_cells) {
  return Mesh1D(x_min, x_max, n_cells);
}

CellField::CellField(Mesh1D mesh, std::vector<double> values)
    : mesh_(mesh), values_(std::move(values)) {
  if (values_.size() != mesh_.n_cells()) {
    throw InvalidArgument("cell field: " + std::to_string(values_.size()) +
                          " values for a mesh of " + std::to_string(mesh_.n_cells()) + " cells");
  }
  for (std::size_t j = 0; j < values_.size(); ++j) {
    if (!std::isfinite(values_[j])) {
      throw InvalidArgument("cell field: non-finite value at cell " + std::to_string(j));
    }
  }
}

CellField::CellField(Mesh1D mesh, double value)
    : CellField(mesh, std::vector<double>(mesh.n_cells(), value)) {}

double CellField::sum() const { return std::accumulate(values_.begin(), values_.end(), 0.0); }

double CellField::min() const { return *std::min_element(values_.begin(), values_.end()); }

double CellField::max() const { return *std::max_element(values_.begin(), values_.end()); }

void validate(const PiecewiseConstant& ic, const Mesh1D& mesh) {
  if (ic.values.size() != ic.breakpoints.size() + 1) {
    throw InvalidArgument("piecewise-constant IC: expected " +
                          std::to_string(ic.breakpoints.size() + 1) + " values for " +
                          std::to_string(ic.breakpoints.size()) + " breakpoints, got " +
                          std::to_string(ic.values.size()));
  }
  for (std::size_t i = 0; i < ic.breakpoints.size(); ++i) {
    const double b = ic.breakpoints[i];
    if (!std::isfinite(b) || b < mesh.x_min() || b > mesh.x_max()) {
      throw InvalidArgument("piecewise-constant IC: breakpoint " + std::to_string(b) +
                            " outside the domain");
    }
    if (i > 0 && !(b > ic.breakpoints[i - 1])) {
      throw InvalidArgument("piecewise-constant IC: breakpoints must be strictly increasing");
    }
  }
  for (double v : ic.values) {
    if (!std::isfinite(v)) throw InvalidArgument("piecewise-constant IC: non-finite value");
  }
}

namespace {

CellField project(const PiecewiseConstant& ic, const Mesh1D& mesh) {
  validate(ic, mesh);
  const std::size_t n = mesh.n_cells();
  const std::size_t pieces = ic.values.size();
  auto piece_lo = [&](std::size_t i) { return i == 0 ? mesh.x_min() : ic.breakpoints[i - 1]; };
  auto piece_hi = [&](std::size_t i) { return i + 1 == pieces ? mesh.x_max() : ic.breakpoints[i]; };

  std::vector<double> out(n);
  std::size_t first = 0;  // first piece that can still overlap the current cell
  for (std::size_t j = 0; j < n; ++j) {
    const double a = mesh.face(j);
    const double b = mesh.face(j + 1);
    while (first + 1 < pieces && piece_hi(first) <= a) ++first;

    double integral = 0.0;
    double covered = 0.0;
    std::size_t touched = 0;
    std::size_t last = first;
    for (std::size_t i = first; i < pieces; ++i) {
      const double lo = std::max(a, piece_lo(i));
      const double hi = std::min(b, piece_hi(i));
      if (piece_lo(i) >= b) break;
      if (hi > lo) {
        integral += ic.values[i] * (hi - lo);
        covered += hi - lo;
        ++touched;
        last = i;
      }
    }
    // A cell inside a single piece takes that value exactly.
    out[j] = touched == 1 ? ic.values[last] : integral / covered;
  }
  return CellField(mesh, std::move(out));
}

CellField project(const Sampled& ic, const Mesh1D& mesh) {
  if (!ic.fn) throw InvalidArgument("sampled IC: empty function");
  const std::size_t m = std::max<std::size_t>(ic.samples_per_cell, 1);
  std::vector<double> out(mesh.n_cells());
  const double h = mesh.dx() / static_cast<double>(m);
  for (std::size_t j = 0; j < mesh.n_cells(); ++j) {
    double acc = 0.0;
    for (std::size_t q = 0; q < m; ++q) {
      acc += ic.fn(mesh.face(j) + (static_cast<double>(q) + 0.5) * h);
    }
    out[j] = acc / static_cast<double>(m);
  }
  return CellField(mesh, std::move(out));
}

}  // namespace

CellField project_initial(const InitialCondition& ic, const Mesh1D& mesh) {
  return std::visit([&](const auto& v) { return project(v, mesh); }, ic);
}

double integrate(const PiecewiseConstant& ic, const Mesh1D& mesh) {
  validate(ic, mesh);
  double total = 0.0;
  for (std::size_t i = 0; i < ic.values.size(); ++i) {
    const double lo = i == 0 ? mesh.x_min() : ic.breakpoints[i - 1];
    const double hi = i + 1 == ic.values.size() ? mesh.x_max() : ic.breakpoints[i];
    total += ic.values[i] * (hi - lo);
  }
  return total;
}

}  // namespace rta
