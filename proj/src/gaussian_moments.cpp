#include "sbwehrl/gaussian_moments.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>

namespace sbwehrl {

namespace {

constexpr double kSpdTolerance = 1e-12;

std::uint32_t pack_counts(const MonomialIndex& m) {
  return static_cast<std::uint32_t>(m[0]) | static_cast<std::uint32_t>(m[1]) << 8 |
         static_cast<std::uint32_t>(m[2]) << 16 | static_cast<std::uint32_t>(m[3]) << 24;
}

using MomentCache = std::unordered_map<std::uint32_t, double>;

// E[x^counts] by recursive Isserlis pairing: the first remaining factor is
// paired with every partner, weighted by the partner multiplicity and the
// covariance entry.
double pairing_moment(MonomialIndex counts, const Eigen::MatrixXd& cov, MomentCache& cache) {
  int first = -1;
  for (int k = 0; k < 4; ++k) {
    if (counts[k] > 0) {
      first = k;
      break;
    }
  }
  if (first < 0) return 1.0;

  const std::uint32_t key = pack_counts(counts);
  if (auto it = cache.find(key); it != cache.end()) return it->second;

  --counts[first];
  double acc = 0.0;
  for (int j = 0; j < 4; ++j) {
    if (counts[j] == 0) continue;
    const double c = cov(first, j);
    if (c == 0.0) continue;
    const int mult = counts[j];
    --counts[j];
    acc += c * mult * pairing_moment(counts, cov, cache);
    ++counts[j];
  }
  ++counts[first];

  cache.emplace(key, acc);
  return acc;
}

void check_index(const GaussianForm& form, const MonomialIndex& idx) {
  for (int k = 0; k < 4; ++k) {
    if (idx[k] < 0) throw std::invalid_argument("moment: negative exponent");
    if (k >= form.dim() && idx[k] != 0)
      throw std::invalid_argument("moment: exponent outside form dimension");
  }
  if (total_degree(idx) > kMomentDegreeCap) throw std::domain_error("moment: degree cap exceeded");
}

double expectation_with_cache(const GaussianForm& form, const RealPolynomial& poly,
                              MomentCache& cache) {
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(4, 4);
  cov.topLeftCorner(form.dim(), form.dim()) = form.covariance();
  double acc = 0.0;
  for (const auto& [m, c] : poly.terms) {
    check_index(form, m);
    if (total_degree(m) % 2 != 0) continue;
    acc += c * pairing_moment(m, cov, cache);
  }
  return acc;
}

}  // namespace

GaussianForm::GaussianForm(const Eigen::MatrixXd& q) : dim_(static_cast<int>(q.rows())), q_(q) {
  if (q.rows() != q.cols() || (dim_ != 2 && dim_ != 4))
    throw std::invalid_argument("GaussianForm: expected a 2x2 or 4x4 matrix");
  if (!q.isApprox(q.transpose(), kSpdTolerance))
    throw std::invalid_argument("GaussianForm: matrix not symmetric");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(q);
  const Eigen::VectorXd evals = solver.eigenvalues();
  if (evals.minCoeff() <= 0.0)
    throw std::invalid_argument("GaussianForm: matrix not positive definite");

  covariance_ = solver.eigenvectors() * evals.cwiseInverse().asDiagonal() *
                solver.eigenvectors().transpose() / 2.0;
  x_from_y_ = solver.eigenvectors() * evals.cwiseSqrt().cwiseInverse().asDiagonal();
  log_norm_ = 0.5 * dim_ * std::log(M_PI) - 0.5 * evals.array().log().sum();
}

RealPolynomial GaussianForm::quadratic_polynomial() const {
  RealPolynomial p;
  for (int i = 0; i < dim_; ++i) {
    for (int j = i; j < dim_; ++j) {
      const double c = (i == j) ? q_(i, i) : 2.0 * q_(i, j);
      if (c == 0.0) continue;
      MonomialIndex m{0, 0, 0, 0};
      ++m[i];
      ++m[j];
      p.add(m, c);
    }
  }
  return p;
}

GaussianForm coupled_form(const Coupling& coupling) {
  const double tau = coupling.tau();
  Eigen::MatrixXd q = Eigen::MatrixXd::Identity(4, 4);
  q(0, 1) = q(1, 0) = -tau;
  q(2, 3) = q(3, 2) = tau;
  return GaussianForm(q);
}

double moment(const GaussianForm& form, const MonomialIndex& idx) {
  check_index(form, idx);
  if (total_degree(idx) % 2 != 0) return 0.0;
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(4, 4);
  cov.topLeftCorner(form.dim(), form.dim()) = form.covariance();
  MomentCache cache;
  return pairing_moment(idx, cov, cache);
}

double polynomial_expectation(const GaussianForm& form, const RealPolynomial& poly) {
  MomentCache cache;
  return expectation_with_cache(form, poly, cache);
}

ObservableReport observable_report(const Coupling& coupling) {
  const double eta = coupling.eta();
  const double tau = coupling.tau();
  const double sh = coupling.sinh();
  const double ch = coupling.cosh();

  const GaussianForm form = coupled_form(coupling);
  MomentCache cache;

  auto mono = [](int u1, int u2, int v1, int v2) {
    RealPolynomial p;
    p.add({u1, u2, v1, v2}, 1.0);
    return p;
  };
  auto E = [&](const RealPolynomial& p) { return expectation_with_cache(form, p, cache); };

  // Re<z1 z2>, Re<z1^2>, Re<z2^2> and the first moments of the ground state,
  // assembled from real-coordinate Gaussian moments.  The state normalization
  // |N|^2 Z_Q / pi^2 equals one, so normalized form moments are expectation
  // values directly.
  const double e_z1z2 = E(mono(1, 1, 0, 0)) - E(mono(0, 0, 1, 1));
  const double e_z1sq = E(mono(2, 0, 0, 0)) - E(mono(0, 0, 2, 0));
  const double e_z2sq = E(mono(0, 2, 0, 0)) - E(mono(0, 0, 0, 2));
  const double e_u1 = E(mono(1, 0, 0, 0));
  const double e_u2 = E(mono(0, 1, 0, 0));
  const double e_v1 = E(mono(0, 0, 1, 0));
  const double e_v2 = E(mono(0, 0, 0, 1));

  ObservableReport r;
  r.eta = eta;

  r.occupation.analytic = sh * sh;
  r.occupation.numeric = tau * e_z1z2;  // <z1 d1> = tau <z1 z2>

  // <z_i> vanishes (odd moments), so the correlator is the plain product term.
  r.corr_z12.analytic = 0.5 * std::sinh(2.0 * eta);
  r.corr_z12.numeric = e_z1z2 - (e_u1 * e_u2);

  // x1 x2 on the ground state: ((1 + tau^2) z1 z2 + tau (z1^2 + z2^2) + tau)/2.
  const double mean_x1 = (e_u1 + tau * e_u2) / std::sqrt(2.0);
  const double mean_x2 = (e_u2 + tau * e_u1) / std::sqrt(2.0);
  r.corr_x12.analytic = sh * ch;
  r.corr_x12.numeric =
      0.5 * ((1.0 + tau * tau) * e_z1z2 + tau * (e_z1sq + e_z2sq) + tau) - mean_x1 * mean_x2;

  r.corr_p12.analytic = -sh * ch;
  r.corr_p12.numeric = -0.5 * ((1.0 + tau * tau) * e_z1z2 - tau * (e_z1sq + e_z2sq) + tau);

  // Variances from x1^2 = (z1^2 + tau^2 z2^2 + 2 tau z1 z2 + 1)/2 and the
  // matching momentum form.
  const double x1_sq = 0.5 * (e_z1sq + tau * tau * e_z2sq + 2.0 * tau * e_z1z2 + 1.0);
  const double p1_sq = -0.5 * (e_z1sq + tau * tau * e_z2sq - 2.0 * tau * e_z1z2 - 1.0);
  const double mean_p1 = -(e_v1 - tau * e_v2) / std::sqrt(2.0);
  r.uncertainty_x1p1.analytic = 0.5 + sh * sh;
  r.uncertainty_x1p1.numeric =
      std::sqrt(x1_sq - mean_x1 * mean_x1) * std::sqrt(p1_sq - mean_p1 * mean_p1);

  // tr(rho^2) = (2 pi)^2 |N|^4 / pi^4 * \int exp(-2 x^T Q x) dx.
  const double log_pref = 2.0 * std::log(coupling.sech()) - 2.0 * std::log(M_PI);
  r.purity.analytic = coupling.sech() * coupling.sech();
  r.purity.numeric = std::exp(2.0 * std::log(2.0 * M_PI) + 2.0 * log_pref +
                              form.scaled(2.0).log_norm());

  return r;
}

}  // namespace sbwehrl
