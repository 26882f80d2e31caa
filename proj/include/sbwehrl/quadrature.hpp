#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "sbwehrl/gaussian_moments.hpp"

namespace sbwehrl {

struct QuadratureSpec {
  int base_order = 24;
  int max_order = 192;
  double rel_tol = 1e-9;
  double abs_tol = 1e-11;
};

struct McSpec {
  long long samples = 1'000'000;
  std::uint64_t seed = 0x5eedULL;
  long long chunk = 65536;
};

struct IntegralResult {
  double value = 0.0;
  double est_err = 0.0;
  bool converged = false;
};

struct McResult {
  double value = 0.0;
  double std_error = 0.0;
};

using Integrand = std::function<double(std::span<const double>)>;

// Gauss-Hermite rule for weight exp(-t^2): sum_i w_i f(t_i) ~ int f e^{-t^2} dt.
// Nodes symmetric about zero, weights positive.  1 <= order <= 200.
std::pair<std::vector<double>, std::vector<double>> gh_nodes(int order);

// Normalized Gaussian expectation E[fn] under weight exp(-x^T Q x):
// whitened tensor Gauss-Hermite, doubling the per-axis order from
// spec.base_order until successive values agree to tolerance or
// spec.max_order is reached (best value + converged=false in that case).
// Throws std::domain_error on a non-finite integrand evaluation.
IntegralResult integrate_gaussian(const Integrand& fn, const GaussianForm& form,
                                  const QuadratureSpec& spec);

// Same expectation for dim-2 forms via whitened polar coordinates:
// trapezoid in the angle, exp-sinh double-exponential rule in t = rho^2.
// Converges fast even when fn has logarithmic singularities at the whitened
// origin (entropy integrands of excited states), where the tensor rule
// degrades to algebraic convergence.  Levels are refined (angle doubled,
// radial step halved) under the same stopping policy as integrate_gaussian.
IntegralResult integrate_gaussian_polar(const Integrand& fn, const GaussianForm& form,
                                        const QuadratureSpec& spec);

// Importance sampling from the exact Gaussian: E[fn] estimate and standard
// error.  Chunk c draws from its own generator seeded by (seed, c), and chunk
// results are combined in index order, so the result is bit-identical for a
// fixed spec regardless of scheduling or worker count.
McResult mc_integrate(const Integrand& fn, const GaussianForm& form, const McSpec& spec);

}  // namespace sbwehrl
