#pragma once

#include "sbwehrl/gaussian_moments.hpp"
#include "sbwehrl/sbs_state.hpp"

namespace sbwehrl {

// A phase-space point.  For one-mode densities only (u1, v1) are read.
struct PhasePoint {
  double u1 = 0.0;
  double v1 = 0.0;
  double u2 = 0.0;
  double v2 = 0.0;
};

// A Husimi density
//   F(x) = exp(log_prefactor) * poly(x) * exp(-x^T Q x),
// nonnegative by construction (poly is a |polynomial|^2 expansion), with x in
// the module coordinate order (u1, u2, v1, v2) for two modes or (u, v) for
// one.
struct HusimiDensity {
  int dim_modes;
  RealPolynomial poly;
  GaussianForm form;
  double log_prefactor;

  double value(const PhasePoint& p) const;
  // log F, evaluated as log_prefactor + log(poly) - x^T Q x (never through
  // exp), with poly clamped away from zero so tails stay finite.
  double log_value(const PhasePoint& p) const;
};

// Husimi density of a normalized state: |f|^2 e^{-|z|^2} / pi^2.
// Throws std::invalid_argument if the state is not normalized to 1e-8.
HusimiDensity husimi_of(const SBState& state);

// Integrate out the other mode analytically (Schur complement on Q plus
// moment-shifting of the polynomial); returns a one-mode density over the
// kept mode's (u, v).
HusimiDensity marginal(const HusimiDensity& density, int keep);

// tr(rho^2) = (2 pi)^{dim_modes} \int density^2, evaluated exactly (the
// squared density is again polynomial x Gaussian).
double purity(const HusimiDensity& density);

// Unnormalized section of a two-mode density at a fixed mode-2 point,
// callable over (u1, v1); used for grid emission.
class SliceFunction {
 public:
  SliceFunction(HusimiDensity density, double fix_u2, double fix_v2)
      : density_(std::move(density)), fix_u2_(fix_u2), fix_v2_(fix_v2) {}

  double operator()(double u1, double v1) const {
    return density_.value({u1, v1, fix_u2_, fix_v2_});
  }

  double fix_u2() const { return fix_u2_; }
  double fix_v2() const { return fix_v2_; }

  // Default half-width of the emission grid: displaced maxima (at ~tau *
  // fixed point) stay in frame.
  double half_width(double tau) const {
    return 4.0 + std::abs(tau) * std::max(std::abs(fix_u2_), std::abs(fix_v2_));
  }

 private:
  HusimiDensity density_;
  double fix_u2_;
  double fix_v2_;
};

SliceFunction slice(const HusimiDensity& density, double fix_u2, double fix_v2);

}  // namespace sbwehrl
