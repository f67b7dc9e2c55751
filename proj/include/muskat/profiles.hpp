#pragma once

#include "muskat/jet.hpp"

namespace muskat {

// Contour-height profile c and cutoff pair (lambda0, lambda).
//   c(a) = delta_c a^2 on [0, delta/32], tapered to zero by delta/8, c >= 0;
//   lambda0 = 1 on |a| <= delta, 0 beyond 2 delta;
//   lambda  = 1 on |a| <= 10 delta, 0 beyond 20 delta.
// The taper is the exponential smooth step (C^infinity), so every derivative the
// modified-equation assembly needs exists in closed form via jet evaluation.
class ProfileSet {
 public:
  // taper_order p selects the C^p polynomial step used outside the quadratic core
  ProfileSet(double delta, double delta_c, int taper_order = 101);

  double delta() const { return delta_; }
  double delta_c() const { return delta_c_; }

  double c(double a) const;
  double c_prime(double a) const;
  Jet c_jet(double a, int order) const;

  double lambda0(double a) const;
  Jet lambda0_jet(double a, int order) const;

  double lambda(double a) const;

  int taper_order() const { return taper_order_; }

  // smooth step: 1 for x <= 0, 0 for x >= 1; C^p across the endpoints
  static double smoothstep(double x, int p = 101);
  static Jet smoothstep_jet(double x, int order, int p = 101);

 private:
  double delta_;
  double delta_c_;
  int taper_order_;
};

}  // namespace muskat
