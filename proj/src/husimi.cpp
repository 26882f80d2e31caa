#include "sbwehrl/husimi.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace sbwehrl {

namespace {

constexpr double kNormalizationTol = 1e-8;
constexpr double kDensityFloor = 1e-300;

std::array<double, 4> to_coords(const HusimiDensity& d, const PhasePoint& p) {
  if (d.dim_modes == 2) return {p.u1, p.u2, p.v1, p.v2};
  return {p.u1, p.v1, 0.0, 0.0};
}

double quadratic_value(const GaussianForm& form, std::span<const double> x) {
  double acc = 0.0;
  for (int i = 0; i < form.dim(); ++i)
    for (int j = 0; j < form.dim(); ++j)
      acc += x[static_cast<std::size_t>(i)] * form.qmatrix()(i, j) * x[static_cast<std::size_t>(j)];
  return acc;
}

}  // namespace

double HusimiDensity::value(const PhasePoint& p) const {
  const auto x = to_coords(*this, p);
  const std::span<const double> xs(x.data(), static_cast<std::size_t>(form.dim()));
  return std::exp(log_prefactor - quadratic_value(form, xs)) * poly.evaluate(xs);
}

double HusimiDensity::log_value(const PhasePoint& p) const {
  const auto x = to_coords(*this, p);
  const std::span<const double> xs(x.data(), static_cast<std::size_t>(form.dim()));
  const double pv = std::max(poly.evaluate(xs), kDensityFloor);
  return log_prefactor + std::log(pv) - quadratic_value(form, xs);
}

HusimiDensity husimi_of(const SBState& state) {
  const Complex norm = inner_product(state, state);
  if (std::abs(norm - Complex{1.0, 0.0}) > kNormalizationTol)
    throw std::invalid_argument("husimi_of: state is not normalized");

  HusimiDensity d{2, density_polynomial(state), coupled_form(state.coupling()),
                  2.0 * std::log(std::abs(state.prefactor())) - 2.0 * std::log(M_PI)};
  return d;
}

HusimiDensity marginal(const HusimiDensity& density, int keep) {
  if (density.dim_modes != 2) throw std::invalid_argument("marginal: density must be two-mode");
  if (keep != 1 && keep != 2) throw std::invalid_argument("marginal: keep must be 1 or 2");

  // Coordinate order is (u1, u2, v1, v2): mode 1 lives on slots {0, 2},
  // mode 2 on slots {1, 3}.
  const std::array<int, 2> kept = keep == 1 ? std::array{0, 2} : std::array{1, 3};
  const std::array<int, 2> dropped = keep == 1 ? std::array{1, 3} : std::array{0, 2};

  const Eigen::MatrixXd& q = density.form.qmatrix();
  Eigen::Matrix2d a;
  Eigen::Matrix2d b;
  Eigen::Matrix2d dblock;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      a(i, j) = q(kept[static_cast<std::size_t>(i)], kept[static_cast<std::size_t>(j)]);
      b(i, j) = q(kept[static_cast<std::size_t>(i)], dropped[static_cast<std::size_t>(j)]);
      dblock(i, j) = q(dropped[static_cast<std::size_t>(i)], dropped[static_cast<std::size_t>(j)]);
    }
  }

  // Completing the square in the dropped block: weight splits into the Schur
  // complement on the kept block and a Gaussian centered at m = L x_kept.
  const Eigen::Matrix2d d_inv = dblock.inverse();
  const Eigen::Matrix2d schur = a - b * d_inv * b.transpose();
  const Eigen::Matrix2d shift = -(d_inv * b.transpose());  // m = shift * x_kept

  const GaussianForm dropped_form{Eigen::MatrixXd(dblock)};

  // Linear forms m_0, m_1 over the kept coordinates as tiny polynomials.
  std::array<RealPolynomial, 2> mlin;
  for (int j = 0; j < 2; ++j) {
    if (shift(j, 0) != 0.0) mlin[static_cast<std::size_t>(j)].add({1, 0, 0, 0}, shift(j, 0));
    if (shift(j, 1) != 0.0) mlin[static_cast<std::size_t>(j)].add({0, 1, 0, 0}, shift(j, 1));
  }
  std::array<std::vector<RealPolynomial>, 2> mlin_powers;
  auto mlin_power = [&](int j, int p) -> const RealPolynomial& {
    auto& cache = mlin_powers[static_cast<std::size_t>(j)];
    if (cache.empty()) {
      RealPolynomial one;
      one.add({0, 0, 0, 0}, 1.0);
      cache.push_back(std::move(one));
    }
    while (static_cast<int>(cache.size()) <= p)
      cache.push_back(cache.back() * mlin[static_cast<std::size_t>(j)]);
    return cache[static_cast<std::size_t>(p)];
  };

  // E[(m0 + delta0)^{o0} (m1 + delta1)^{o1}] with delta the centered Gaussian
  // of the dropped block; binomial expansion plus central moments.
  RealPolynomial out_poly;
  for (const auto& [m, c] : density.poly.terms) {
    const int k0 = m[static_cast<std::size_t>(kept[0])];
    const int k1 = m[static_cast<std::size_t>(kept[1])];
    const int o0 = m[static_cast<std::size_t>(dropped[0])];
    const int o1 = m[static_cast<std::size_t>(dropped[1])];

    RealPolynomial shifted;
    for (int j0 = 0; j0 <= o0; ++j0) {
      for (int j1 = 0; j1 <= o1; ++j1) {
        if ((j0 + j1) % 2 != 0) continue;
        const double central = moment(dropped_form, {j0, j1, 0, 0});
        if (central == 0.0) continue;
        double binom = central;
        for (int k = 0; k < j0; ++k) binom *= double(o0 - k) / double(k + 1);
        for (int k = 0; k < j1; ++k) binom *= double(o1 - k) / double(k + 1);
        const RealPolynomial prod = mlin_power(0, o0 - j0) * mlin_power(1, o1 - j1);
        for (const auto& [pm, pc] : prod.terms) shifted.add(pm, pc * binom);
      }
    }
    for (const auto& [pm, pc] : shifted.terms)
      out_poly.add({pm[0] + k0, pm[1] + k1, 0, 0}, pc * c);
  }

  HusimiDensity out{1, std::move(out_poly), GaussianForm{Eigen::MatrixXd(schur)},
                    density.log_prefactor + std::log(M_PI) - 0.5 * std::log(dblock.determinant())};
  return out;
}

double purity(const HusimiDensity& density) {
  const GaussianForm doubled = density.form.scaled(2.0);
  const double integral = polynomial_expectation(doubled, density.poly * density.poly);
  return std::exp(density.dim_modes * std::log(2.0 * M_PI) + 2.0 * density.log_prefactor +
                  doubled.log_norm()) *
         integral;
}

SliceFunction slice(const HusimiDensity& density, double fix_u2, double fix_v2) {
  if (density.dim_modes != 2) throw std::invalid_argument("slice: density must be two-mode");
  return SliceFunction(density, fix_u2, fix_v2);
}

}  // namespace sbwehrl
