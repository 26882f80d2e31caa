#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "doctest.h"
#include "frozen_values.hpp"

#include "sbwehrl/quadrature.hpp"
#include "sbwehrl/sbs_state.hpp"

using namespace sbwehrl;

namespace {

SBState random_poly_state(const Coupling& c, std::mt19937& rng) {
  std::uniform_int_distribution<int> deg(0, 4);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  SBState::PolyMap poly;
  const int terms = 1 + deg(rng);
  for (int t = 0; t < terms; ++t)
    poly[{deg(rng), deg(rng)}] = Complex{coef(rng), coef(rng)};
  return SBState(c, std::move(poly), Complex{1.0, 0.0});
}

double max_coeff_delta(const SBState& a, const SBState& b) {
  double worst = 0.0;
  auto both = a.poly();
  for (const auto& [k, v] : b.poly()) both[k] -= v;
  for (const auto& [k, v] : both) worst = std::max(worst, std::abs(v));
  return worst;
}

}  // namespace

TEST_CASE("coupling caches and invariants") {
  for (double eta : {-5.0, -1.2, 0.0, 0.3, 2.0, 5.0}) {
    const Coupling c(eta);
    CHECK(c.tau() == doctest::Approx(std::tanh(eta)).epsilon(1e-15));
    CHECK(std::abs(c.tau()) < 1.0);
    CHECK(c.sech() * c.sech() + c.tau() * c.tau() == doctest::Approx(1.0).epsilon(1e-14));
    // Bogoliubov constraint cosh^2 - sinh^2 = 1, as a relative residual (the
    // absolute one amplifies cosh/sinh rounding by 2 cosh^2 eta).
    const double ch2 = c.cosh() * c.cosh();
    CHECK(std::abs(ch2 - c.sinh() * c.sinh() - 1.0) / ch2 < 1e-12);
  }
  CHECK_THROWS_AS(Coupling(20.5), std::invalid_argument);
  CHECK_THROWS_AS(Coupling(-25.0), std::invalid_argument);
}

TEST_CASE("hamiltonian params metadata") {
  const Coupling c(0.8);
  const auto p = hamiltonian_params(c, 2.0, 0.5);
  CHECK(p.lambda == doctest::Approx(-2.0 * std::tanh(1.6)).epsilon(1e-14));
  CHECK(p.omega_prime() == doctest::Approx(2.0 / std::cosh(1.6)).epsilon(1e-14));
  CHECK(p.h0_prime() == doctest::Approx(p.omega_prime() - 2.0 + 0.5).epsilon(1e-14));
  CHECK_THROWS_AS(hamiltonian_params(c, -1.0), std::invalid_argument);
}

TEST_CASE("ground state structure") {
  const SBState g0 = ground_state(Coupling(0.0));
  CHECK(g0.prefactor() == Complex{1.0, 0.0});
  CHECK(g0.poly().size() == 1);
  CHECK(g0.coupling().tau() == 0.0);

  const SBState g1 = ground_state(Coupling(1.0));
  CHECK(g1.prefactor().real() == doctest::Approx(frozen::kSech1).epsilon(1e-14));
  CHECK(g1.coupling().tau() == doctest::Approx(frozen::kTanh1).epsilon(1e-14));
}

TEST_CASE("ground state is normalized for any eta") {
  for (double eta : {-3.0, -0.5, 0.0, 0.25, 1.0, 2.5, 5.0}) {
    const SBState g = ground_state(Coupling(eta));
    CHECK(inner_product(g, g).real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(inner_product(g, g).imag()) < 1e-14);
  }
}

TEST_CASE("z creation shifts exponents") {
  const Coupling c(0.6);
  SBState::PolyMap poly;
  poly[{2, 0}] = Complex{1.0, 0.0};
  const SBState s(c, poly, {1.0, 0.0});

  const SBState up = apply_z_creation(s, 1);
  REQUIRE(up.poly().size() == 1);
  CHECK(up.poly().begin()->first == std::pair{3, 0});

  const SBState g = ground_state(c);
  const SBState two_one = apply_z_creation(apply_z_creation(apply_z_creation(g, 1), 1), 2);
  REQUIRE(two_one.poly().size() == 1);
  CHECK(two_one.poly().begin()->first == std::pair{2, 1});
  CHECK(two_one.poly().begin()->second == Complex{1.0, 0.0});
  CHECK(two_one.prefactor() == g.prefactor());
}

TEST_CASE("z annihilation: derivative plus kernel term") {
  const Coupling c(1.0);
  const SBState g = ground_state(c);

  // d1 Omega = tau z2 Omega.
  const SBState d1 = apply_z_annihilation(g, 1);
  REQUIRE(d1.poly().size() == 1);
  CHECK(d1.poly().begin()->first == std::pair{0, 1});
  CHECK(d1.poly().begin()->second.real() == doctest::Approx(c.tau()).epsilon(1e-15));

  // Plain power rule at tau = 0.
  const Coupling c0(0.0);
  SBState::PolyMap poly;
  poly[{4, 0}] = Complex{1.0, 0.0};
  const SBState zn(c0, poly, {1.0, 0.0});
  const SBState dz = apply_z_annihilation(zn, 1);
  REQUIRE(dz.poly().size() == 1);
  CHECK(dz.poly().begin()->first == std::pair{3, 0});
  CHECK(dz.poly().begin()->second.real() == doctest::Approx(4.0).epsilon(1e-15));
}

TEST_CASE("mixed partial derivatives commute") {
  std::mt19937 rng(3);
  const Coupling c(0.9);
  for (int k = 0; k < 10; ++k) {
    const SBState f = random_poly_state(c, rng);
    const SBState ab = apply_z_annihilation(apply_z_annihilation(f, 1), 2);
    const SBState ba = apply_z_annihilation(apply_z_annihilation(f, 2), 1);
    CHECK(max_coeff_delta(ab, ba) < 1e-14);
  }
}

TEST_CASE("CCR: (d_i z_j - z_j d_i) f = delta_ij f on random states") {
  std::mt19937 rng(41);
  for (double eta : {0.0, 0.7, 1.5}) {
    const Coupling c(eta);
    for (int k = 0; k < 50; ++k) {
      const SBState f = random_poly_state(c, rng);
      for (int i = 1; i <= 2; ++i) {
        for (int j = 1; j <= 2; ++j) {
          const SBState left = apply_z_annihilation(apply_z_creation(f, j), i);
          const SBState right = apply_z_creation(apply_z_annihilation(f, i), j);
          SBState::PolyMap diff = left.poly();
          for (const auto& [key, v] : right.poly()) diff[key] -= v;
          if (i == j) {
            for (const auto& [key, v] : f.poly()) diff[key] -= v;
          }
          double worst = 0.0;
          for (const auto& [key, v] : diff) worst = std::max(worst, std::abs(v));
          CHECK(worst < 1e-13);
        }
      }
    }
  }
}

TEST_CASE("wbar annihilates the vacuum across the eta grid") {
  for (double eta = -5.0; eta <= 5.0; eta += 0.5) {
    const SBState g = ground_state(Coupling(eta));
    CHECK(apply_w_annihilation(g, 1).is_zero());
    CHECK(apply_w_annihilation(g, 2).is_zero());
  }
}

TEST_CASE("wbar at eta = 0 reduces to the plain derivative") {
  std::mt19937 rng(8);
  const Coupling c(0.0);
  for (int k = 0; k < 5; ++k) {
    const SBState f = random_poly_state(c, rng);
    CHECK(max_coeff_delta(apply_w_annihilation(f, 1), apply_z_annihilation(f, 1)) < 1e-15);
  }
}

TEST_CASE("excited state (n, 0) has the closed-form coefficients") {
  for (double eta : {0.4, 1.0, 2.0}) {
    const Coupling c(eta);
    for (int n : {1, 2, 5}) {
      const SBState f = excited_state(c, n, 0);
      REQUIRE(f.poly().size() == 1);
      CHECK(f.poly().begin()->first == std::pair{n, 0});
      // poly {(n,0) -> cosh^{-n}} times prefactor sech/sqrt(n!) equals the
      // quoted sech^{n+1}/sqrt(n!) z1^n overall factor.
      double fact = 1.0;
      for (int k = 2; k <= n; ++k) fact *= k;
      const double overall = (f.poly().begin()->second * f.prefactor()).real();
      CHECK(overall ==
            doctest::Approx(std::pow(c.sech(), n + 1) / std::sqrt(fact)).epsilon(1e-13));
    }
  }
}

TEST_CASE("excited state edge cases") {
  const Coupling c(0.8);
  const SBState f00 = excited_state(c, 0, 0);
  const SBState g = ground_state(c);
  CHECK(max_coeff_delta(f00, g) < 1e-15);
  CHECK(f00.prefactor() == g.prefactor());

  const SBState f11 = excited_state(Coupling(0.0), 1, 1);
  REQUIRE(f11.poly().size() == 1);
  CHECK(f11.poly().begin()->first == std::pair{1, 1});
  CHECK((f11.poly().begin()->second * f11.prefactor()).real() ==
        doctest::Approx(1.0).epsilon(1e-15));

  CHECK_THROWS_AS(excited_state(c, 13, 0), std::invalid_argument);
  CHECK_THROWS_AS(excited_state(c, 0, -1), std::invalid_argument);
}

TEST_CASE("excited states are normalized") {
  for (double eta : {0.0, 0.8, 1.5}) {
    const Coupling c(eta);
    for (auto [n1, n2] : std::vector<std::pair<int, int>>{
             {1, 0}, {3, 0}, {12, 0}, {2, 2}, {4, 4}, {6, 6}}) {
      const SBState f = excited_state(c, n1, n2);
      CHECK(inner_product(f, f).real() == doctest::Approx(1.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("swap symmetry: (n,0) with swapped indices equals (0,n)") {
  for (double eta : {0.5, 1.5}) {
    const Coupling c(eta);
    for (int n : {1, 2, 3}) {
      const SBState a = excited_state(c, n, 0);
      const SBState b = excited_state(c, 0, n);
      CHECK(a.prefactor() == b.prefactor());
      REQUIRE(a.poly().size() == b.poly().size());
      for (const auto& [key, v] : a.poly()) {
        const auto it = b.poly().find({key.second, key.first});
        REQUIRE(it != b.poly().end());
        CHECK(std::abs(it->second - v) == 0.0);
      }
    }
  }
}

TEST_CASE("orthonormality up to (3,3)") {
  for (double eta : {0.0, 0.5, 1.5}) {
    const Coupling c(eta);
    std::vector<SBState> states;
    for (int n1 = 0; n1 <= 3; ++n1)
      for (int n2 = 0; n2 <= 3; ++n2) states.push_back(excited_state(c, n1, n2));
    for (std::size_t i = 0; i < states.size(); ++i) {
      for (std::size_t j = 0; j < states.size(); ++j) {
        const Complex v = inner_product(states[i], states[j]);
        const double expected = i == j ? 1.0 : 0.0;
        CHECK(std::abs(v - Complex{expected, 0.0}) < 1e-10);
      }
    }
  }
}

TEST_CASE("monomial states are orthogonal at tau = 0 with norm n!") {
  const Coupling c(0.0);
  auto monomial_state = [&](int n) {
    SBState s = ground_state(c);
    for (int k = 0; k < n; ++k) s = apply_z_creation(s, 1);
    double fact = 1.0;
    for (int k = 2; k <= n; ++k) fact *= k;
    return s.scaled(Complex{1.0 / std::sqrt(fact), 0.0});
  };
  for (int n = 0; n <= 5; ++n) {
    for (int m = 0; m <= 5; ++m) {
      const Complex v = inner_product(monomial_state(n), monomial_state(m));
      CHECK(std::abs(v - Complex{n == m ? 1.0 : 0.0, 0.0}) < 1e-12);
    }
  }
}

TEST_CASE("first moments vanish on the ground state") {
  const SBState g = ground_state(Coupling(1.2));
  CHECK(std::abs(inner_product(g, apply_z_creation(g, 1))) < 1e-13);
  CHECK(std::abs(inner_product(g, apply_z_creation(g, 2))) < 1e-13);
}

TEST_CASE("inner product rejects coupling mismatch") {
  const SBState a = ground_state(Coupling(0.5));
  const SBState b = ground_state(Coupling(0.6));
  CHECK_THROWS_AS(inner_product(a, b), std::invalid_argument);
}

TEST_CASE("expectation values on the ground state") {
  for (double eta : {0.5, 1.0}) {
    const Coupling c(eta);
    const SBState g = ground_state(c);

    const LadderOp number[] = {LadderOp::Z1, LadderOp::D1};
    CHECK(expectation(g, number).real() ==
          doctest::Approx(c.sinh() * c.sinh()).epsilon(1e-12));

    const LadderOp pair[] = {LadderOp::Z1, LadderOp::Z2};
    CHECK(expectation(g, pair).real() ==
          doctest::Approx(0.5 * std::sinh(2.0 * eta)).epsilon(1e-12));

    const LadderOp square[] = {LadderOp::Z1, LadderOp::Z1};
    CHECK(std::abs(expectation(g, square)) < 1e-13);
  }
}

TEST_CASE("operator words act right-to-left") {
  const Coupling c(0.7);
  const SBState g = ground_state(c);
  // z1 d1 vs d1 z1 differ by the identity on any normalized state.
  const LadderOp normal[] = {LadderOp::Z1, LadderOp::D1};
  const LadderOp reversed[] = {LadderOp::D1, LadderOp::Z1};
  const Complex delta = expectation(g, reversed) - expectation(g, normal);
  CHECK(delta.real() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(delta.imag()) < 1e-13);
}

TEST_CASE("uncertainty product equals 1/2 + sinh^2 from operator words") {
  for (double eta : {0.0, 0.6, 1.3}) {
    const Coupling c(eta);
    const SBState g = ground_state(c);
    // x1^2 = (z1^2 + d1^2 + 2 z1 d1 + 1)/2, p1^2 = -(z1^2 + d1^2 - 2 z1 d1 - 1)/2.
    const LadderOp zz[] = {LadderOp::Z1, LadderOp::Z1};
    const LadderOp dd[] = {LadderOp::D1, LadderOp::D1};
    const LadderOp zd[] = {LadderOp::Z1, LadderOp::D1};
    const LadderOp z[] = {LadderOp::Z1};
    const LadderOp d[] = {LadderOp::D1};
    const Complex ezz = expectation(g, zz);
    const Complex edd = expectation(g, dd);
    const Complex ezd = expectation(g, zd);
    const Complex mean_x = (expectation(g, z) + expectation(g, d)) / std::sqrt(2.0);
    const double x2 = 0.5 * (ezz + edd + 2.0 * ezd + Complex{1.0, 0.0}).real();
    const double p2 = -0.5 * (ezz + edd - 2.0 * ezd - Complex{1.0, 0.0}).real();
    const double dx = std::sqrt(x2 - std::norm(mean_x));
    const double dp = std::sqrt(p2 - std::norm(mean_x));
    CHECK(dx * dp == doctest::Approx(0.5 + c.sinh() * c.sinh()).epsilon(1e-10));
  }
}

TEST_CASE("kernel point values") {
  CHECK(kernel_eval({0, 0}, {0, 0}, {0, 0}, {0, 0}) == Complex{1.0, 0.0});
  CHECK(kernel_eval({1, 0}, {0, 0}, {1, 0}, {0, 0}).real() ==
        doctest::Approx(std::exp(1.0)).epsilon(1e-15));
}

TEST_CASE("kernel reproducing property for F(z) = z1^2 by quadrature") {
  // F(z) = int K(z, w) F(w) mu(w) dw with mu the decoupled Gaussian measure.
  const GaussianForm f = coupled_form(Coupling(0.0));
  QuadratureSpec spec;
  spec.base_order = 32;
  for (const Complex z1 : {Complex{0.5, 0.2}, Complex{-0.3, 0.6}}) {
    const Complex z2{0.1, -0.4};
    Complex integral{0.0, 0.0};
    for (int part = 0; part < 2; ++part) {
      const auto res = integrate_gaussian(
          [&](std::span<const double> x) {
            const Complex w1{x[0], x[2]};
            const Complex w2{x[1], x[3]};
            const Complex val = kernel_eval(z1, z2, w1, w2) * w1 * w1;
            return part == 0 ? val.real() : val.imag();
          },
          f, spec);
      REQUIRE(res.converged);
      if (part == 0)
        integral += Complex{res.value, 0.0};
      else
        integral += Complex{0.0, res.value};
    }
    CHECK(std::abs(integral - z1 * z1) < 1e-9);
  }
}

TEST_CASE("density polynomial of excited states is real and nonnegative-shaped") {
  const Coupling c(1.0);
  const SBState f = excited_state(c, 2, 0);
  const RealPolynomial d = density_polynomial(f);
  // |z1^2 ...|^2 = (u1^2 + v1^2)^2 up to the cosh^{-2n} coefficient scale.
  const double at_point = d.evaluate(std::array<double, 4>{0.7, -0.3, 0.4, 0.9});
  const double r2 = 0.7 * 0.7 + 0.4 * 0.4;
  const double scale = std::pow(c.cosh(), -4.0);
  CHECK(at_point == doctest::Approx(scale * r2 * r2).epsilon(1e-12));
}

TEST_CASE("mode arguments are validated") {
  const SBState g = ground_state(Coupling(0.2));
  CHECK_THROWS_AS(apply_z_creation(g, 0), std::invalid_argument);
  CHECK_THROWS_AS(apply_z_annihilation(g, 3), std::invalid_argument);
  CHECK_THROWS_AS(apply_w_annihilation(g, -1), std::invalid_argument);
}
