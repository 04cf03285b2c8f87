#include "pdo/cutoffs.hpp"

#include <cmath>
#include <stdexcept>

namespace pdo {

namespace {
double glue(double s) { return s > 0 ? std::exp(-1.0 / s) : 0.0; }
double glue_deriv(double s) { return s > 0 ? std::exp(-1.0 / s) / (s * s) : 0.0; }
}  // namespace

double smooth_step(double s) {
  if (s <= 0) return 0.0;
  if (s >= 1) return 1.0;
  double a = glue(s), b = glue(1.0 - s);
  return a / (a + b);
}

double smooth_step_deriv(double s) {
  if (s <= 0 || s >= 1) return 0.0;
  double a = glue(s), b = glue(1.0 - s);
  double ap = glue_deriv(s), bp = -glue_deriv(1.0 - s);
  double den = a + b;
  return (ap * den - a * (ap + bp)) / (den * den);
}

RadialProfile::RadialProfile(double s1, double p1, double p2, double s2)
    : s1_(s1), p1_(p1), p2_(p2), s2_(s2) {
  if (!(0 <= s1 && s1 <= p1 && p1 <= p2 && p2 < s2))
    throw std::invalid_argument("RadialProfile: need 0 <= s1 <= p1 <= p2 < s2");
}

double RadialProfile::at(double t) const {
  t = std::fabs(t);
  double up = (p1_ > s1_) ? smooth_step((t - s1_) / (p1_ - s1_)) : 1.0;
  double down = smooth_step((s2_ - t) / (s2_ - p2_));
  return up * down;
}

double RadialProfile::deriv(double t) const {
  t = std::fabs(t);
  double up = 1.0, dup = 0.0;
  if (p1_ > s1_) {
    up = smooth_step((t - s1_) / (p1_ - s1_));
    dup = smooth_step_deriv((t - s1_) / (p1_ - s1_)) / (p1_ - s1_);
  }
  double down = smooth_step((s2_ - t) / (s2_ - p2_));
  double ddown = -smooth_step_deriv((s2_ - t) / (s2_ - p2_)) / (s2_ - p2_);
  return dup * down + up * ddown;
}

RadialCutoff::RadialCutoff(double r, double R)
    : r_(r), R_(R), profile_(0.0, 0.0, r, R) {
  if (!(0 < r && r < R)) throw std::invalid_argument("RadialCutoff: need 0 < r < R");
  if (R < 1.0) throw std::invalid_argument("RadialCutoff: need R >= 1");
}

RadialCutoff make_modulation(double r, double R) { return RadialCutoff(r, R); }

double corona_at(const RadialCutoff& psi, double t) {
  return psi.at(t) - psi.at(2.0 * t);
}

RadialFilter dilated(const RadialCutoff& c, int k) {
  double scale = std::ldexp(1.0, -k);
  return [c, scale](double t) { return c.at(t * scale); };
}

RadialFilter corona_dilated(const RadialCutoff& c, int k) {
  double scale = std::ldexp(1.0, -k);
  return [c, scale](double t) { return corona_at(c, t * scale); };
}

std::vector<double> lp_partition_weights(const RadialCutoff& psi, int J, double t) {
  if (J < 0) throw std::invalid_argument("lp_partition_weights: J >= 0 required");
  std::vector<double> w;
  w.reserve(J + 1);
  w.push_back(psi.at(t));
  for (int k = 1; k <= J; ++k) w.push_back(corona_at(psi, std::ldexp(t, -k)));
  return w;
}

// A(t) = 0 on [0,1], 1 on [2,inf);  B(t) = 1 on [0,1], 0 on [2,inf).
namespace {
double ramp_A(double t) { return smooth_step(t - 1.0); }
double ramp_A_deriv(double t) { return smooth_step_deriv(t - 1.0); }
double ramp_B(double t) { return smooth_step(2.0 - t); }
double ramp_B_deriv(double t) { return -smooth_step_deriv(2.0 - t); }
}  // namespace

TwistedCutoff::TwistedCutoff() = default;

double TwistedCutoff::at(double abs_xi, double abs_eta) const {
  abs_xi = std::fabs(abs_xi);
  abs_eta = std::fabs(abs_eta);
  if (abs_eta <= 1.0) return 0.0;
  return ramp_A(abs_eta) * ramp_B(2.0 * abs_xi / abs_eta);
}

double TwistedCutoff::d_xi(double xi, double eta) const {
  double ae = std::fabs(eta);
  if (ae <= 1.0) return 0.0;
  double sgn = xi >= 0 ? 1.0 : -1.0;
  return ramp_A(ae) * ramp_B_deriv(2.0 * std::fabs(xi) / ae) * 2.0 * sgn / ae;
}

double TwistedCutoff::d_eta(double xi, double eta) const {
  double ae = std::fabs(eta), ax = std::fabs(xi);
  if (ae <= 1.0) return 0.0;
  double sgn = eta >= 0 ? 1.0 : -1.0;
  double t = 2.0 * ax / ae;
  return sgn * (ramp_A_deriv(ae) * ramp_B(t) - ramp_A(ae) * ramp_B_deriv(t) * t / ae);
}

TwistedCutoff make_twisted_cutoff() { return TwistedCutoff(); }

}  // namespace pdo
