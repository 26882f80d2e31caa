#include "verify_suite.hpp"

#include <cmath>
#include <random>

#include "sbwehrl/husimi.hpp"
#include "sbwehrl/quadrature.hpp"
#include "sbwehrl/sbs_state.hpp"
#include "sbwehrl/wehrl.hpp"

namespace sbwehrl::verify {

namespace {

double pick(double override_value, double fallback) {
  return override_value > 0.0 ? override_value : fallback;
}

CheckResult make(const std::string& name, double discrepancy, double tolerance) {
  return {name, discrepancy <= tolerance, discrepancy, tolerance};
}

SBState random_poly_state(const Coupling& c, std::mt19937& rng) {
  std::uniform_int_distribution<int> deg(0, 4);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  SBState::PolyMap poly;
  const int terms = 1 + deg(rng);
  for (int t = 0; t < terms; ++t) poly[{deg(rng), deg(rng)}] = Complex{coef(rng), coef(rng)};
  return SBState(c, std::move(poly), Complex{1.0, 0.0});
}

CheckResult check_ccr(double tol) {
  std::mt19937 rng(12345);
  double worst = 0.0;
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
          if (i == j)
            for (const auto& [key, v] : f.poly()) diff[key] -= v;
          for (const auto& [key, v] : diff) worst = std::max(worst, std::abs(v));
        }
      }
    }
  }
  return make("ccr_identity", worst, tol);
}

CheckResult check_vacuum_annihilation(double tol) {
  double worst = 0.0;
  for (double eta = -5.0; eta <= 5.0; eta += 0.25) {
    for (int mode : {1, 2}) {
      const SBState r = apply_w_annihilation(ground_state(Coupling(eta)), mode);
      for (const auto& [key, v] : r.poly()) worst = std::max(worst, std::abs(v));
    }
  }
  return make("vacuum_annihilation", worst, tol);
}

CheckResult check_bogoliubov(double tol) {
  // Relative residual: the absolute form amplifies the rounding of cosh/sinh
  // by 2 cosh^2(eta) (~2.4e-12 at eta = 5), so it is scaled back out.
  double worst = 0.0;
  for (double eta = -5.0; eta <= 5.0; eta += 0.25) {
    const Coupling c(eta);
    const double ch2 = c.cosh() * c.cosh();
    worst = std::max(worst, std::abs(ch2 - c.sinh() * c.sinh() - 1.0) / ch2);
  }
  return make("bogoliubov_constraint", worst, tol);
}

CheckResult check_orthonormality(double tol) {
  double worst = 0.0;
  for (double eta : {0.0, 0.5, 1.5}) {
    const Coupling c(eta);
    std::vector<SBState> states;
    for (int n1 = 0; n1 <= 3; ++n1)
      for (int n2 = 0; n2 <= 3; ++n2) states.push_back(excited_state(c, n1, n2));
    for (std::size_t i = 0; i < states.size(); ++i) {
      for (std::size_t j = i; j < states.size(); ++j) {
        const Complex v = inner_product(states[i], states[j]);
        const double expected = i == j ? 1.0 : 0.0;
        worst = std::max(worst, std::abs(v - Complex{expected, 0.0}));
      }
    }
  }
  return make("orthonormality_up_to_3_3", worst, tol);
}

CheckResult check_swap_symmetry(double tol) {
  double worst = 0.0;
  for (double eta : {0.5, 1.5}) {
    const Coupling c(eta);
    for (int n : {1, 2, 3}) {
      const SBState a = excited_state(c, n, 0);
      const SBState b = excited_state(c, 0, n);
      for (const auto& [key, v] : a.poly()) {
        const auto it = b.poly().find({key.second, key.first});
        if (it == b.poly().end()) {
          worst = std::max(worst, std::abs(v));
          continue;
        }
        worst = std::max(worst, std::abs(it->second - v));
      }
    }
  }
  return make("swap_symmetry", worst, tol);
}

CheckResult check_uncertainty(double tol) {
  double worst = 0.0;
  for (double eta = -2.0; eta <= 2.0; eta += 0.5) {
    const Coupling c(eta);
    const SBState g = ground_state(c);
    const LadderOp zz[] = {LadderOp::Z1, LadderOp::Z1};
    const LadderOp dd[] = {LadderOp::D1, LadderOp::D1};
    const LadderOp zd[] = {LadderOp::Z1, LadderOp::D1};
    const double ezz = expectation(g, zz).real();
    const double edd = expectation(g, dd).real();
    const double ezd = expectation(g, zd).real();
    const double x2 = 0.5 * (ezz + edd + 2.0 * ezd + 1.0);
    const double p2 = -0.5 * (ezz + edd - 2.0 * ezd - 1.0);
    const double product = std::sqrt(x2) * std::sqrt(p2);
    worst = std::max(worst, std::abs(product - (0.5 + c.sinh() * c.sinh())));
  }
  return make("uncertainty_product", worst, tol);
}

CheckResult check_observables(double tol) {
  double worst = 0.0;
  for (int i = 0; i <= 10; ++i) {
    const ObservableReport r = observable_report(Coupling(-2.0 + 0.4 * i));
    worst = std::max({worst, r.occupation.discrepancy(), r.corr_z12.discrepancy(),
                      r.corr_x12.discrepancy(), r.corr_p12.discrepancy(),
                      r.uncertainty_x1p1.discrepancy(), r.purity.discrepancy()});
  }
  return make("observable_closed_forms", worst, tol);
}

CheckResult check_husimi_normalization(const QuadratureSpec& spec, double tol) {
  double worst = 0.0;
  for (double eta : {0.0, 1.0}) {
    const Coupling c(eta);
    for (auto [n1, n2] : std::vector<std::pair<int, int>>{{0, 0}, {1, 0}, {2, 2}}) {
      const HusimiDensity d = husimi_of(excited_state(c, n1, n2));
      const auto res = integrate_gaussian(
          [&d](std::span<const double> x) { return d.poly.evaluate(x); }, d.form, spec);
      const double norm = std::exp(d.log_prefactor + d.form.log_norm()) * res.value;
      worst = std::max(worst, std::abs(norm - 1.0));
    }
  }
  return make("husimi_normalization", worst, tol);
}

CheckResult check_ground_entropy(const QuadratureSpec& spec, double tol) {
  double worst = 0.0;
  for (double eta : {0.0, 0.25, 0.5, 1.0, 1.5, 2.0}) {
    const auto num = wehrl_numeric(husimi_of(ground_state(Coupling(eta))), spec);
    worst = std::max(worst, std::abs(num.value - s_total_ground(eta)));
  }
  return make("ground_entropy_agreement", worst, tol);
}

CheckResult check_ground_partials(const QuadratureSpec& spec, double tol) {
  double worst = 0.0;
  for (double eta : {0.0, 0.5, 1.0, 2.0}) {
    const HusimiDensity d = husimi_of(ground_state(Coupling(eta)));
    const auto p1 = wehrl_numeric(marginal(d, 1), spec);
    const auto p2 = wehrl_numeric(marginal(d, 2), spec);
    const auto tot = wehrl_numeric(d, spec);
    worst = std::max(worst, std::abs(p1.value - s_partial_ground(eta)));
    worst = std::max(worst, std::abs(p2.value - s_partial_ground(eta)));
    const double mi = p1.value + p2.value - tot.value;
    worst = std::max(worst, std::abs(mi - mutual_info_ground(eta)));
  }
  return make("ground_partial_and_mutual_agreement", worst, tol);
}

CheckResult check_excited_totals(const QuadratureSpec& spec, double tol) {
  double worst = 0.0;
  for (double eta : {0.5, 1.0, 2.0}) {
    for (int n : {1, 2, 3}) {
      const auto num = wehrl_numeric(husimi_of(excited_state(Coupling(eta), n, 0)), spec);
      worst = std::max(worst, std::abs(num.value - s_total_excited(eta, n)));
    }
  }
  return make("excited_total_agreement", worst, tol);
}

CheckResult check_first_excited_partials(const QuadratureSpec& spec, double tol) {
  double worst = 0.0;
  for (double eta : {0.5, 1.0, 2.0}) {
    const HusimiDensity d = husimi_of(excited_state(Coupling(eta), 1, 0));
    const auto same = wehrl_numeric(marginal(d, 1), spec);
    const auto other = wehrl_numeric(marginal(d, 2), spec);
    worst = std::max(worst, std::abs(same.value - s_partial_excited_same(eta, 1)));
    worst = std::max(worst, std::abs(other.value - s_partial_other_first_excited(eta)));
  }
  return make("first_excited_partial_agreement", worst, tol);
}

CheckResult check_gh_vs_mc_polynomials(const Options& opts, const QuadratureSpec& spec,
                                       double sigma) {
  std::mt19937 rng(777);
  std::uniform_int_distribution<int> deg(0, 3);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  const GaussianForm form = coupled_form(Coupling(0.9));
  McSpec mc;
  mc.samples = opts.mc_samples;
  mc.seed = opts.seed;
  double worst = 0.0;
  for (int k = 0; k < 10; ++k) {
    std::array<std::array<int, 4>, 3> exps{};
    std::array<double, 3> cs{};
    for (int t = 0; t < 3; ++t) {
      // Random term with total degree <= 6.
      do {
        for (int j = 0; j < 4; ++j)
          exps[static_cast<std::size_t>(t)][static_cast<std::size_t>(j)] = deg(rng);
      } while (exps[static_cast<std::size_t>(t)][0] + exps[static_cast<std::size_t>(t)][1] +
                   exps[static_cast<std::size_t>(t)][2] + exps[static_cast<std::size_t>(t)][3] >
               6);
      cs[static_cast<std::size_t>(t)] = coef(rng);
    }
    const auto fn = [&](std::span<const double> x) {
      double acc = 0.0;
      for (int t = 0; t < 3; ++t) {
        double v = cs[static_cast<std::size_t>(t)];
        for (int j = 0; j < 4; ++j)
          for (int p = 0; p < exps[static_cast<std::size_t>(t)][static_cast<std::size_t>(j)]; ++p)
            v *= x[static_cast<std::size_t>(j)];
        acc += v;
      }
      return acc;
    };
    const auto gh = integrate_gaussian(fn, form, spec);
    const auto est = mc_integrate(fn, form, mc);
    if (est.std_error > 0.0)
      worst = std::max(worst, std::abs(gh.value - est.value) / est.std_error);
  }
  return make("gh_vs_mc_polynomials_sigma", worst, sigma);
}

CheckResult check_gh_vs_mc_entropy(const Options& opts, const QuadratureSpec& spec,
                                   double sigma) {
  const Coupling c(1.0);
  const GaussianForm form = coupled_form(c);
  const double lp = 2.0 * std::log(c.sech()) - 2.0 * std::log(M_PI);
  const auto fn = [&](std::span<const double> x) {
    double q = 0.0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        q += x[static_cast<std::size_t>(i)] * form.qmatrix()(i, j) *
             x[static_cast<std::size_t>(j)];
    return -(lp - q);
  };
  const auto gh = integrate_gaussian(fn, form, spec);
  McSpec mc;
  mc.samples = opts.mc_samples;
  mc.seed = opts.seed;
  const auto est = mc_integrate(fn, form, mc);
  const double dev = est.std_error > 0.0 ? std::abs(gh.value - est.value) / est.std_error : 0.0;
  return make("gh_vs_mc_entropy_integrand_sigma", dev, sigma);
}

}  // namespace

std::vector<CheckResult> run_all(const Options& opts) {
  QuadratureSpec spec;
  spec.base_order = opts.base_order;

  const double tol_algebra = pick(opts.tol_algebra, 1e-13);
  const double tol_obs = pick(opts.tol_observables, 1e-10);
  const double sigma = pick(opts.mc_sigma, 4.0);

  std::vector<CheckResult> checks;
  checks.push_back(check_ccr(tol_algebra));
  checks.push_back(check_vacuum_annihilation(pick(opts.tol_algebra, 1e-14)));
  checks.push_back(check_bogoliubov(pick(opts.tol_algebra, 1e-12)));
  checks.push_back(check_orthonormality(pick(opts.tol_algebra, 1e-10)));
  checks.push_back(check_swap_symmetry(pick(opts.tol_algebra, 1e-12)));
  checks.push_back(check_uncertainty(pick(opts.tol_algebra, 1e-10)));
  checks.push_back(check_observables(tol_obs));
  checks.push_back(check_husimi_normalization(spec, 1e-8));
  checks.push_back(check_ground_entropy(spec, pick(opts.tol_entropy, 1e-7)));
  checks.push_back(check_ground_partials(spec, pick(opts.tol_entropy, 1e-7)));
  checks.push_back(check_excited_totals(spec, pick(opts.tol_entropy, 1e-6)));
  checks.push_back(check_first_excited_partials(spec, pick(opts.tol_entropy, 1e-6)));
  checks.push_back(check_gh_vs_mc_polynomials(opts, spec, sigma));
  checks.push_back(check_gh_vs_mc_entropy(opts, spec, sigma));
  return checks;
}

}  // namespace sbwehrl::verify
