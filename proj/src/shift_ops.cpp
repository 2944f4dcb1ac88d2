#include "rta/shift_ops.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "rta/errors.hpp"

namespace rta {

std::size_t wrap_index(std::int64_t a, std::size_t n) {
  const auto sn = static_cast<std::int64_t>(n);
  std::int64_t r = a % sn;
  if (r < 0) r += sn;
  return static_cast<std::size_t>(r);
}

CellField apply_L_power(const CellField& field, std::int64_t m) {
  const std::size_t n = field.size();
  const std::size_t shift = wrap_index(m, n);
  const auto in = field.values();
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    out[j] = in[j >= shift ? j - shift : j + n - shift];
  }
  return CellField(field.mesh(), std::move(out));
}

CellField apply_K(const CellField& field, double omega) {
  if (!(omega >= 0.0 && omega <= 1.0)) {
    throw InvalidArgument("K(omega) is defined for omega in [0, 1], got " + std::to_string(omega));
  }
  return apply_split_shift(field, 0, omega);
}

ShiftIndex decompose_shift(double s, std::size_t n_cells) {
  if (!std::isfinite(s)) throw InvalidArgument("decompose_shift: non-finite shift");
  if (n_cells == 0) throw InvalidArgument("decompose_shift: empty mesh");
  const double fl = std::floor(s);
  if (std::abs(fl) > 9.0e15) throw InvalidArgument("decompose_shift: shift too large");
  ShiftIndex idx;
  idx.whole = static_cast<std::int64_t>(fl);
  idx.theta = s - fl;  // exact in binary floating point
  idx.p = wrap_index(idx.whole + 1, n_cells);
  return idx;
}

CellField apply_split_shift(const CellField& field, std::int64_t whole, double theta) {
  const std::size_t n = field.size();
  const auto in = field.values();
  const std::size_t shift = wrap_index(whole, n);
  const double keep = 1.0 - theta;
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    // in[j - shift] and its left neighbour in[j - shift - 1], periodically.
    const std::size_t src = j >= shift ? j - shift : j + n - shift;
    const std::size_t left = src == 0 ? n - 1 : src - 1;
    if (theta == 0.0) {
      out[j] = in[src];
    } else if (theta == 1.0) {
      out[j] = in[left];
    } else {
      out[j] = keep * in[src] + theta * in[left];
    }
  }
  return CellField(field.mesh(), std::move(out));
}

CellField apply_generalized_shift(const CellField& field, double s) {
  const ShiftIndex idx = decompose_shift(s, field.size());
  return apply_split_shift(field, idx.whole, idx.theta);
}

}  // namespace rta
