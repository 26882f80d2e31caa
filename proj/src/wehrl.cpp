#include "sbwehrl/wehrl.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sbwehrl {

namespace {

double log_cosh_stable(double eta) {
  const double a = std::abs(eta);
  return a + std::log1p(std::exp(-2.0 * a)) - M_LN2;
}

double log_factorial(int n) {
  double acc = 0.0;
  for (int k = 2; k <= n; ++k) acc += std::log(double(k));
  return acc;
}

void check_excitation(int n) {
  if (n < 0 || n > kExcitationMax)
    throw std::invalid_argument("wehrl: excitation index outside [0, kExcitationMax]");
}

// Continued fraction for e^x Gamma(0, x), x > 1 (modified Lentz).
double gamma0_cf(double x) {
  constexpr double kTiny = 1e-300;
  constexpr double kEps = 1e-16;
  double b = x + 1.0;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 200; ++i) {
    const double a = -double(i) * double(i);
    b += 2.0;
    d = a * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + a / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  return h;
}

// Series for Gamma(0, x), x <= 1: -gamma - ln x + sum (-1)^{k+1} x^k / (k k!).
double gamma0_series(double x) {
  double sum = 0.0;
  double term = 1.0;
  for (int k = 1; k <= 60; ++k) {
    term *= x / k;
    const double add = (k % 2 == 1 ? term : -term) / k;
    sum += add;
    if (std::abs(add) < 1e-17 * std::max(1.0, std::abs(sum))) break;
  }
  return -kEulerGamma - std::log(x) + sum;
}

// tanh^2(eta) e^{csch^2 eta} Gamma(0, csch^2 eta), the excited-state
// correction of section-4 partial entropies; only valid for eta != 0.
double excited_gamma_term(double eta) {
  const double sh = std::sinh(eta);
  const double x = 1.0 / (sh * sh);
  const double tau = std::tanh(eta);
  return tau * tau * gamma0_scaled(x);
}

struct LnPolyTerm {
  double value = 0.0;
  double est_err = 0.0;
  bool converged = true;
};

double ln_clamped_product(double p) {
  if (p <= 1e-300) return 0.0;  // 0 ln 0 := 0
  return p * std::log(p);
}

// E_F[ln poly] for a density whose polynomial is not constant, via
// quadrature: polar rule in two dimensions, tensor Gauss-Hermite in four.
LnPolyTerm ln_poly_expectation(const HusimiDensity& density, const QuadratureSpec& spec) {
  const double scale = std::exp(density.log_prefactor + density.form.log_norm());
  const double norm = scale * polynomial_expectation(density.form, density.poly);

  const auto fn = [&density](std::span<const double> x) {
    return ln_clamped_product(density.poly.evaluate(x));
  };

  const IntegralResult res = density.form.dim() == 2
                                 ? integrate_gaussian_polar(fn, density.form, spec)
                                 : integrate_gaussian(fn, density.form, spec);
  LnPolyTerm out;
  out.value = scale * res.value / norm;
  out.est_err = scale * res.est_err / std::abs(norm);
  out.converged = res.converged;
  return out;
}

// Restrict a 4-coordinate polynomial active on one mode to the marginal's
// 2-coordinate indexing.
RealPolynomial restrict_to_mode(const RealPolynomial& poly, int keep) {
  const int u_slot = keep == 1 ? 0 : 1;
  const int v_slot = keep == 1 ? 2 : 3;
  RealPolynomial out;
  for (const auto& [m, c] : poly.terms)
    out.add({m[static_cast<std::size_t>(u_slot)], m[static_cast<std::size_t>(v_slot)], 0, 0}, c);
  return out;
}

std::optional<std::string> flag_of(const char* what, const WehrlNumeric& v) {
  if (v.converged) return std::nullopt;
  return std::string(what) + ": quadrature not converged (est_err=" + std::to_string(v.est_err) +
         ")";
}

}  // namespace

double harmonic(int n) {
  check_excitation(n);
  long long num = 0;
  long long den = 1;
  for (int k = 1; k <= n; ++k) {
    num = num * k + den;
    den *= k;
    const long long g = std::gcd(num, den);
    num /= g;
    den /= g;
  }
  return double(num) / double(den);
}

double gamma0(double x) {
  if (!(x > 0.0)) throw std::invalid_argument("gamma0: requires x > 0");
  if (x <= 1.0) return gamma0_series(x);
  return std::exp(-x) * gamma0_cf(x);
}

double gamma0_scaled(double x) {
  if (!(x > 0.0)) throw std::invalid_argument("gamma0_scaled: requires x > 0");
  if (x <= 1.0) return std::exp(x) * gamma0_series(x);
  return gamma0_cf(x);
}

double s_total_ground(double eta) {
  return 2.0 + 2.0 * std::log(M_PI) + 2.0 * log_cosh_stable(eta);
}

double s_partial_ground(double eta) {
  return 1.0 + std::log(M_PI) + 2.0 * log_cosh_stable(eta);
}

double mutual_info_ground(double eta) { return 2.0 * log_cosh_stable(eta); }

double s_total_excited(double eta, int n) {
  check_excitation(n);
  return 2.0 * (1.0 + std::log(M_PI) + log_cosh_stable(eta)) +
         n * (1.0 + kEulerGamma - harmonic(n)) + log_factorial(n);
}

double s_partial_excited_same(double eta, int n) {
  check_excitation(n);
  return 1.0 + std::log(M_PI) + 2.0 * log_cosh_stable(eta) +
         n * (1.0 + kEulerGamma - harmonic(n)) + log_factorial(n);
}

double s_partial_other_first_excited(double eta) {
  // The gamma term vanishes as sinh^4 near eta = 0; below the crossover the
  // closed form would evaluate Gamma(0, x) at x ~ 1e12 for nothing.
  if (std::abs(eta) < 1e-6) return 1.0 + std::log(M_PI) + 4.0 * log_cosh_stable(eta);
  return 1.0 + std::log(M_PI) + 4.0 * log_cosh_stable(eta) - excited_gamma_term(eta);
}

double mutual_info_first_excited(double eta) {
  if (std::abs(eta) < 1e-6) return 4.0 * log_cosh_stable(eta);
  return 4.0 * log_cosh_stable(eta) - excited_gamma_term(eta);
}

WehrlNumeric wehrl_numeric(const HusimiDensity& density, const QuadratureSpec& spec) {
  const double scale = std::exp(density.log_prefactor + density.form.log_norm());
  const double norm = scale * polynomial_expectation(density.form, density.poly);
  if (!(std::abs(norm - 1.0) < 1e-6))
    throw std::invalid_argument("wehrl_numeric: density is not normalized");

  const double e_quad = scale *
                        polynomial_expectation(density.form,
                                               density.poly * density.form.quadratic_polynomial()) /
                        norm;

  LnPolyTerm ln_term;
  if (density.poly.is_constant()) {
    const double c = density.poly.constant_value();
    if (!(c > 0.0)) throw std::invalid_argument("wehrl_numeric: degenerate density");
    ln_term.value = std::log(c);
  } else if (density.form.dim() == 4) {
    const unsigned mask = density.poly.active_mask();
    if ((mask & ~0b0101u) == 0) {  // only u1, v1 slots active
      HusimiDensity m = marginal(density, 1);
      m.poly = restrict_to_mode(density.poly, 1);
      ln_term = ln_poly_expectation(m, spec);
    } else if ((mask & ~0b1010u) == 0) {  // only u2, v2 slots active
      HusimiDensity m = marginal(density, 2);
      m.poly = restrict_to_mode(density.poly, 2);
      ln_term = ln_poly_expectation(m, spec);
    } else {
      ln_term = ln_poly_expectation(density, spec);
    }
  } else {
    ln_term = ln_poly_expectation(density, spec);
  }

  WehrlNumeric out;
  out.value = -density.log_prefactor + e_quad - ln_term.value;
  out.est_err = ln_term.est_err;
  out.converged = ln_term.converged;
  return out;
}

EntropyReport report(double eta, int n1, int n2, const QuadratureSpec& spec) {
  check_excitation(n1);
  check_excitation(n2);
  const Coupling coupling(eta);
  const SBState state = excited_state(coupling, n1, n2);
  const HusimiDensity density = husimi_of(state);
  const HusimiDensity m1 = marginal(density, 1);
  const HusimiDensity m2 = marginal(density, 2);

  // Both-mode excitations fall back to 4-D tensor quadrature; cap the grid so
  // a single report stays tractable (the result carries its own error flag).
  QuadratureSpec total_spec = spec;
  if (n1 > 0 && n2 > 0) total_spec.max_order = std::min(spec.max_order, 64);

  const WehrlNumeric tot = wehrl_numeric(density, total_spec);
  const WehrlNumeric p1 = wehrl_numeric(m1, spec);
  const WehrlNumeric p2 = wehrl_numeric(m2, spec);

  EntropyReport r;
  r.eta = eta;
  r.n1 = n1;
  r.n2 = n2;
  r.s_total = {std::nullopt, tot.value, tot.est_err};
  r.s_partial_1 = {std::nullopt, p1.value, p1.est_err};
  r.s_partial_2 = {std::nullopt, p2.value, p2.est_err};
  r.mutual_info = {std::nullopt, p1.value + p2.value - tot.value,
                   tot.est_err + p1.est_err + p2.est_err};

  if (n1 == 0 && n2 == 0) {
    r.s_total.analytic = s_total_ground(eta);
    r.s_partial_1.analytic = s_partial_ground(eta);
    r.s_partial_2.analytic = s_partial_ground(eta);
    r.mutual_info.analytic = mutual_info_ground(eta);
  } else if (n2 == 0) {
    r.s_total.analytic = s_total_excited(eta, n1);
    r.s_partial_1.analytic = s_partial_excited_same(eta, n1);
    if (n1 == 1) {
      r.s_partial_2.analytic = s_partial_other_first_excited(eta);
      r.mutual_info.analytic = mutual_info_first_excited(eta);
    }
  } else if (n1 == 0) {
    r.s_total.analytic = s_total_excited(eta, n2);
    r.s_partial_2.analytic = s_partial_excited_same(eta, n2);
    if (n2 == 1) {
      r.s_partial_1.analytic = s_partial_other_first_excited(eta);
      r.mutual_info.analytic = mutual_info_first_excited(eta);
    }
  }

  if (auto f = flag_of("s_total", tot)) r.flags.push_back(*f);
  if (auto f = flag_of("s_partial_1", p1)) r.flags.push_back(*f);
  if (auto f = flag_of("s_partial_2", p2)) r.flags.push_back(*f);
  return r;
}

void to_json(nlohmann::json& j, const WehrlValue& v) {
  j = nlohmann::json{{"analytic", nullptr}, {"numeric", v.numeric}, {"err", v.err}};
  if (v.analytic) j["analytic"] = *v.analytic;
}

void to_json(nlohmann::json& j, const EntropyReport& r) {
  j = nlohmann::json{{"eta", r.eta},
                     {"state", {r.n1, r.n2}},
                     {"s_total", r.s_total},
                     {"s_partial_1", r.s_partial_1},
                     {"s_partial_2", r.s_partial_2},
                     {"mutual_info", r.mutual_info},
                     {"flags", r.flags}};
}

}  // namespace sbwehrl
