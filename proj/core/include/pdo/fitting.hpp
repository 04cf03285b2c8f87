#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace pdo {

struct LineFit {
  double slope = 0;
  double intercept = 0;
  int npoints = 0;
};

inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit_line: need >= 2 matching points");
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  double mx = sx / x.size(), my = sy / y.size();
  double num = 0, den = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    num += (x[i] - mx) * (y[i] - my);
    den += (x[i] - mx) * (x[i] - mx);
  }
  if (den == 0) throw std::invalid_argument("fit_line: degenerate abscissae");
  return LineFit{num / den, my - (num / den) * mx, static_cast<int>(x.size())};
}

// Least squares of log2(values) against x, dropping points below a relative
// floor (and below 1e-300 absolute).
inline LineFit fit_log2(const std::vector<double>& x, const std::vector<double>& values,
                        double floor_rel = 1e-14) {
  if (x.size() != values.size())
    throw std::invalid_argument("fit_log2: size mismatch");
  double mx = 0;
  for (double v : values) mx = std::max(mx, v);
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (values[i] <= floor_rel * mx || values[i] < 1e-300) continue;
    xs.push_back(x[i]);
    ys.push_back(std::log2(values[i]));
  }
  if (xs.size() < 2) throw std::invalid_argument("fit_log2: fewer than 2 usable points");
  return fit_line(xs, ys);
}

}  // namespace pdo
