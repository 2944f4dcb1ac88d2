#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <variant>
#include <vector>

namespace rta {

/// Uniform periodic 1-D mesh on [x_min, x_max] with n_cells cells.
///
/// Cells are stored 0-based: cell j spans [x_min + j*dx, x_min + (j+1)*dx].
/// The last cell's right face is x_max (not x_min + n*dx, which may differ
/// by roundoff).
class Mesh1D {
 public:
  Mesh1D(double x_min, double x_max, std::size_t n_cells);

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  std::size_t n_cells() const { return n_cells_; }
  double dx() const { return dx_; }
  double length() const { return x_max_ - x_min_; }

  /// Left face of cell j (j = n_cells gives x_max).
  double face(std::size_t j) const;
  double center(std::size_t j) const;

  friend bool operator==(const Mesh1D&, const Mesh1D&) = default;

 private:
  double x_min_;
  double x_max_;
  std::size_t n_cells_;
  double dx_;
};

Mesh1D build_mesh(double x_min, double x_max, std::size_t n_cells);

/// Cell averages of one scalar quantity at one time level.
class CellField {
 public:
  CellField(Mesh1D mesh, std::vector<double> values);
  /// Constant field.
  CellField(Mesh1D mesh, double value);

  const Mesh1D& mesh() const { return mesh_; }
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t j) const { return values_[j]; }

  double sum() const;
  double min() const;
  double max() const;

  friend bool operator==(const CellField&, const CellField&) = default;

 private:
  Mesh1D mesh_;
  std::vector<double> values_;
};

/// Piecewise-constant function: values[0] on [x_min, breakpoints[0]),
/// values[i] on [breakpoints[i-1], breakpoints[i]), values.back() up to x_max.
struct PiecewiseConstant {
  std::vector<double> breakpoints;
  std::vector<double> values;
};

/// Pointwise-evaluable function, averaged with a composite midpoint rule.
struct Sampled {
  std::function<double(double)> fn;
  std::size_t samples_per_cell = 16;
};

using InitialCondition = std::variant<PiecewiseConstant, Sampled>;

/// Throws InvalidArgument if the breakpoints are not strictly increasing
/// inside [x_min, x_max] or the value count does not match.
void validate(const PiecewiseConstant& ic, const Mesh1D& mesh);

/// Cell-average projection of the initial data onto the mesh.
CellField project_initial(const InitialCondition& ic, const Mesh1D& mesh);

/// Integral of a piecewise-constant function over [x_min, x_max].
double integrate(const PiecewiseConstant& ic, const Mesh1D& mesh);

}  // namespace rta
