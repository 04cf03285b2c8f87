#pragma once

// Smooth radial cutoffs built from the exponential glue
//   f(s) = exp(-1/s) for s>0 (else 0),   step(s) = f(s) / (f(s) + f(1-s)),
// which is exactly 0 for s<=0 and exactly 1 for s>=1.  All profiles here are
// C^inf with genuinely super-polynomial Fourier tail decay, and they attain
// their plateau/support boundary values exactly, so lattice support checks
// are exact rather than approximate.

#include <functional>
#include <vector>

namespace pdo {

double smooth_step(double s);        // 0 for s<=0, 1 for s>=1
double smooth_step_deriv(double s);

// Radial profile: 1 on [p1,p2], 0 outside (s1,s2), smooth ramps between.
// A ball profile has s1 = p1 = 0.
class RadialProfile {
 public:
  RadialProfile(double s1, double p1, double p2, double s2);
  double at(double t) const;     // t = |xi| >= 0
  double deriv(double t) const;  // d/dt
  double support_lo() const { return s1_; }
  double plateau_lo() const { return p1_; }
  double plateau_hi() const { return p2_; }
  double support_hi() const { return s2_; }

 private:
  double s1_, p1_, p2_, s2_;
};

// Modulation function psi: radial, psi = 1 for |xi| <= r, 0 for |xi| >= R.
class RadialCutoff {
 public:
  RadialCutoff(double r, double R);
  double r() const { return r_; }
  double R() const { return R_; }
  double at(double t) const { return profile_.at(t); }
  double deriv(double t) const { return profile_.deriv(t); }

 private:
  double r_, R_;
  RadialProfile profile_;
};

RadialCutoff make_modulation(double r = 1.0, double R = 2.0);

// phi(t) = psi(t) - psi(2t), supported in the corona r/2 <= t <= R.
double corona_at(const RadialCutoff& psi, double t);

// Scalar filters acting on |xi|; nullptr-like empty function means identity.
using RadialFilter = std::function<double(double)>;

RadialFilter dilated(const RadialCutoff& c, int k);     // t -> psi(2^-k t)
RadialFilter corona_dilated(const RadialCutoff& c, int k);  // t -> phi(2^-k t)

// Littlewood-Paley weights at a point: [psi(t), phi(t/2), ..., phi(t/2^J)].
std::vector<double> lp_partition_weights(const RadialCutoff& psi, int J, double t);

// Twisted-diagonal cutoff chi(xi,eta) = A(|eta|) * B(2|xi|/|eta|) with
// A = 0 on [0,1], 1 on [2,inf) and B = 1 on [0,1], 0 on [2,inf).  Then
//   chi(t xi, t eta) = chi(xi, eta)   for t >= 1, |eta| >= 2,
//   supp chi  c  {1 <= |eta|, |xi| <= |eta|},
//   chi = 1   on  {2 <= |eta|, 2|xi| <= |eta|}.
class TwistedCutoff {
 public:
  TwistedCutoff();
  double at(double abs_xi, double abs_eta) const;
  // Partial derivatives in the signed scalar arguments (n = 1).
  double d_xi(double xi, double eta) const;
  double d_eta(double xi, double eta) const;
};

TwistedCutoff make_twisted_cutoff();

}  // namespace pdo
