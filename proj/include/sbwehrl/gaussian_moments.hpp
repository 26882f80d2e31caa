#pragma once

#include <array>
#include <map>
#include <span>

#include <Eigen/Dense>

#include "sbwehrl/coupling.hpp"

namespace sbwehrl {

// Coordinate order is the ABI of this module:
//   dim 4: (u1, u2, v1, v2), the real and imaginary parts of z1, z2;
//   dim 2: (u, v) of the kept mode.
// Trailing slots of a MonomialIndex are zero for dim-2 forms.
using MonomialIndex = std::array<int, 4>;

inline int total_degree(const MonomialIndex& m) { return m[0] + m[1] + m[2] + m[3]; }

// Pairing recursion refuses monomials above this total degree.
inline constexpr int kMomentDegreeCap = 52;

// Sparse real polynomial over the coordinates above.  std::map keeps term
// order canonical so summation order (and emitted output) is reproducible.
struct RealPolynomial {
  std::map<MonomialIndex, double> terms;

  void add(const MonomialIndex& m, double c) {
    if (c == 0.0) return;
    auto [it, fresh] = terms.emplace(m, c);
    if (!fresh) {
      it->second += c;
      if (it->second == 0.0) terms.erase(it);
    }
  }

  bool is_constant() const {
    if (terms.empty()) return true;
    return terms.size() == 1 && total_degree(terms.begin()->first) == 0;
  }

  double constant_value() const {
    if (terms.empty()) return 0.0;
    auto it = terms.find(MonomialIndex{0, 0, 0, 0});
    return it == terms.end() ? 0.0 : it->second;
  }

  // Bitmask of coordinates with a nonzero exponent somewhere.
  unsigned active_mask() const {
    unsigned mask = 0;
    for (const auto& [m, c] : terms)
      for (int k = 0; k < 4; ++k)
        if (m[k] > 0) mask |= 1u << k;
    return mask;
  }

  int degree() const {
    int d = 0;
    for (const auto& [m, c] : terms) d = std::max(d, total_degree(m));
    return d;
  }

  double evaluate(std::span<const double> x) const {
    double acc = 0.0;
    for (const auto& [m, c] : terms) {
      double t = c;
      for (int k = 0; k < 4; ++k)
        for (int p = 0; p < m[k]; ++p) t *= x[k];
      acc += t;
    }
    return acc;
  }

  RealPolynomial operator*(const RealPolynomial& rhs) const {
    RealPolynomial out;
    for (const auto& [ma, ca] : terms)
      for (const auto& [mb, cb] : rhs.terms)
        out.add({ma[0] + mb[0], ma[1] + mb[1], ma[2] + mb[2], ma[3] + mb[3]}, ca * cb);
    return out;
  }
};

// Symmetric positive-definite quadratic form Q with weight exp(-x^T Q x),
// its covariance C = Q^{-1}/2, the whitening transform x = T y mapping the
// weight to exp(-|y|^2), and log of the partition integral.
class GaussianForm {
 public:
  explicit GaussianForm(const Eigen::MatrixXd& q);

  int dim() const { return dim_; }
  const Eigen::MatrixXd& qmatrix() const { return q_; }
  const Eigen::MatrixXd& covariance() const { return covariance_; }
  const Eigen::MatrixXd& x_from_y() const { return x_from_y_; }
  // log of \int exp(-x^T Q x) dx
  double log_norm() const { return log_norm_; }

  GaussianForm scaled(double factor) const { return GaussianForm(factor * q_); }

  // Q as a polynomial, for expectation values of x^T Q x.
  RealPolynomial quadratic_polynomial() const;

 private:
  int dim_;
  Eigen::MatrixXd q_;
  Eigen::MatrixXd covariance_;
  Eigen::MatrixXd x_from_y_;
  double log_norm_;
};

// The coupled 4-variable form of the two-mode system: diagonal ones,
// -tau between u1 u2 and +tau between v1 v2.  det Q = (1 - tau^2)^2.
GaussianForm coupled_form(const Coupling& coupling);

// Normalized Gaussian moment E[x^m] under weight exp(-x^T Q x), by Isserlis
// pairing over the covariance.  Zero for odd total degree.
double moment(const GaussianForm& form, const MonomialIndex& idx);

// Linear extension of moment() over a sparse polynomial (one shared pairing
// cache across all terms).
double polynomial_expectation(const GaussianForm& form, const RealPolynomial& poly);

struct ObservableValue {
  double analytic = 0.0;
  double numeric = 0.0;
  double discrepancy() const { return std::abs(analytic - numeric); }
};

// Ground-state observables, each evaluated both from the closed form and
// from the moment engine.
struct ObservableReport {
  double eta = 0.0;
  ObservableValue occupation;        // <N_{z1}> = sinh^2 eta
  ObservableValue corr_z12;          // C(z1,z2) = sinh(2 eta)/2
  ObservableValue corr_x12;          // C(x1,x2) = sinh eta cosh eta
  ObservableValue corr_p12;          // C(p1,p2) = -sinh eta cosh eta
  ObservableValue uncertainty_x1p1;  // Delta x1 Delta p1 = 1/2 + sinh^2 eta
  ObservableValue purity;            // tr rho^2 = sech^2 eta
};

ObservableReport observable_report(const Coupling& coupling);

}  // namespace sbwehrl
