#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "sbwehrl/husimi.hpp"
#include "sbwehrl/quadrature.hpp"

namespace sbwehrl {

// ---- special values ---------------------------------------------------

// Euler-Mascheroni constant, 20 significant digits.
inline constexpr double kEulerGamma = 0.57721566490153286061;

// n-th harmonic number, summed as an exact rational for n <= kExcitationMax.
double harmonic(int n);

// Incomplete gamma Gamma(0, x) = E1(x) = int_x^inf e^{-t}/t dt for x > 0:
// series for x <= 1, continued fraction above, relative error <= 1e-12.
double gamma0(double x);

// exp(x) * Gamma(0, x), stable for large x where gamma0 itself underflows.
double gamma0_scaled(double x);

// ---- closed forms (total and partial Wehrl entropies, mutual info) ----

// S^W of the ground state: 2 + 2 ln pi + 2 ln cosh eta.
double s_total_ground(double eta);

// Marginal entropy of either ground-state subsystem:
// 1 + ln pi + 2 ln cosh eta.
double s_partial_ground(double eta);

// I^W of the ground state: 2 ln cosh eta.
double mutual_info_ground(double eta);

// S^W of the (n,0) state:
// 2 [1 + ln pi + ln cosh eta] + n (1 + gamma - H_n) + ln n!.
double s_total_excited(double eta, int n);

// Marginal entropy of the excited subsystem of (n,0):
// 1 + ln pi + 2 ln cosh eta + n (1 + gamma - H_n) + ln n!.
double s_partial_excited_same(double eta, int n);

// Marginal entropy of the non-excited subsystem of (1,0):
// 1 + ln pi + 4 ln cosh eta - tanh^2(eta) e^{csch^2 eta} Gamma(0, csch^2 eta),
// with the documented limit 1 + ln pi at eta -> 0 (explicit branch below
// |eta| < 1e-6).
double s_partial_other_first_excited(double eta);

// I^W of the (1,0) state:
// 4 ln cosh eta - tanh^2(eta) e^{csch^2 eta} Gamma(0, csch^2 eta).
double mutual_info_first_excited(double eta);

// ---- numeric entropies -------------------------------------------------

struct WehrlNumeric {
  double value = 0.0;
  double est_err = 0.0;
  bool converged = true;
};

// S^W = -int F ln F via the fast-path decomposition
//   S = -log_prefactor + E_F[x^T Q x] - E_F[ln poly]:
// the first two terms come from the moment engine; E_F[ln poly] is zero for
// constant polynomials, reduces to the kept-mode marginal when poly involves
// a single mode, and otherwise goes through quadrature (polar rule in 2-D,
// tensor Gauss-Hermite in 4-D).
WehrlNumeric wehrl_numeric(const HusimiDensity& density, const QuadratureSpec& spec);

struct WehrlValue {
  std::optional<double> analytic;
  double numeric = 0.0;
  double err = 0.0;  // quadrature error estimate
};

struct EntropyReport {
  double eta = 0.0;
  int n1 = 0;
  int n2 = 0;
  WehrlValue s_total;
  WehrlValue s_partial_1;
  WehrlValue s_partial_2;
  WehrlValue mutual_info;  // numeric slot = s1 + s2 - s_total by construction
  std::vector<std::string> flags;
};

// Full analytic/numeric report for the (n1, n2) state.  Analytic slots are
// present exactly where the closed forms above apply.
EntropyReport report(double eta, int n1, int n2, const QuadratureSpec& spec);

void to_json(nlohmann::json& j, const WehrlValue& v);
void to_json(nlohmann::json& j, const EntropyReport& r);

}  // namespace sbwehrl
