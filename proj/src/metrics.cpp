#include "rta/metrics.hpp"

#include <cmath>
#include <string>

#include "rta/errors.hpp"

namespace rta {

namespace {

void require_same_mesh(const CellField& a, const CellField& b) {
  if (!(a.mesh() == b.mesh())) {
    throw IncompatibleDiscretization("error norms need both fields on the same mesh");
  }
}

double abs_diff_sum(const CellField& a, const CellField& b) {
  double acc = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) acc += std::abs(a[j] - b[j]);
  return acc;
}

}  // namespace

double total_variation(const CellField& field) {
  const auto u = field.values();
  double tv = std::abs(u.front() - u.back());
  for (std::size_t j = 0; j + 1 < u.size(); ++j) tv += std::abs(u[j + 1] - u[j]);
  return tv;
}

double l1_abs_error(const CellField& a, const CellField& b) {
  require_same_mesh(a, b);
  return a.mesh().dx() * abs_diff_sum(a, b);
}

double l1_rel_error(const CellField& a, const CellField& b) {
  require_same_mesh(a, b);
  double norm = 0.0;
  for (double v : b.values()) norm += std::abs(v);
  if (norm == 0.0) throw DegenerateDivision("relative L1 error against a zero reference");
  return abs_diff_sum(a, b) / norm;
}

double projection_error_l1(const CellField& snapshot, double theta) {
  return 2.0 * snapshot.mesh().dx() * (1.0 - theta) * theta * total_variation(snapshot);
}

ErrorReport make_error_report(const CellField& approx, const CellField& reference, std::size_t k,
                              double mu, double mu_i, double theta, std::size_t p) {
  ErrorReport r;
  r.e_abs = l1_abs_error(approx, reference);
  r.e_rel = l1_rel_error(approx, reference);
  r.tv = total_variation(approx);
  r.k = k;
  r.mu = mu;
  r.mu_i = mu_i;
  r.theta = theta;
  r.p = p;
  return r;
}

RateFit fit_convergence_rate(std::span<const std::pair<double, double>> points) {
  if (points.size() < 2) {
    throw InvalidArgument("rate fit needs at least 2 points, got " + std::to_string(points.size()));
  }
  double sx = 0.0, sy = 0.0;
  for (const auto& [dx, err] : points) {
    if (!(dx > 0.0) || !(err > 0.0) || !std::isfinite(dx) || !std::isfinite(err)) {
      throw InvalidArgument("rate fit needs strictly positive dx and error");
    }
    sx += std::log(dx);
    sy += std::log(err);
  }
  const double n = static_cast<double>(points.size());
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [dx, err] : points) {
    const double x = std::log(dx) - mx;
    sxx += x * x;
    sxy += x * (std::log(err) - my);
  }
  if (sxx == 0.0) throw InvalidArgument("rate fit needs at least two distinct dx values");
  RateFit fit;
  fit.rate = sxy / sxx;
  fit.constant = std::exp(my - fit.rate * mx);
  return fit;
}

}  // namespace rta
