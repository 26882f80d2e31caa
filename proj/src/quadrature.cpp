#include "sbwehrl/quadrature.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <future>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>

namespace sbwehrl {

namespace {

int worker_count() {
  const unsigned hw = std::thread::hardware_concurrency();
  return static_cast<int>(std::clamp(hw, 1u, 8u));
}

void check_spec(const QuadratureSpec& spec) {
  if (spec.base_order < 2 || spec.base_order > spec.max_order || spec.max_order > 200)
    throw std::invalid_argument("quadrature: require 2 <= base_order <= max_order <= 200");
  if (!(spec.rel_tol > 0.0) || !(spec.abs_tol > 0.0))
    throw std::invalid_argument("quadrature: tolerances must be positive");
}

bool within_tol(double delta, double value, const QuadratureSpec& spec) {
  return std::abs(delta) <= std::max(spec.abs_tol, spec.rel_tol * std::abs(value));
}

// One tensor Gauss-Hermite pass at fixed per-axis order, chunked over the
// outermost axis.  Chunk sums are combined in axis order, so the result does
// not depend on how chunks were scheduled.
double tensor_pass(const Integrand& fn, const GaussianForm& form, int order) {
  const int dim = form.dim();
  auto [nodes, weights] = gh_nodes(order);
  const Eigen::MatrixXd& t = form.x_from_y();

  auto outer_slab = [&](int i0) {
    double slab = 0.0;
    std::array<double, 4> y{};
    std::array<double, 4> x{};
    y[0] = nodes[static_cast<std::size_t>(i0)];
    if (dim == 2) {
      for (int i1 = 0; i1 < order; ++i1) {
        y[1] = nodes[static_cast<std::size_t>(i1)];
        x[0] = t(0, 0) * y[0] + t(0, 1) * y[1];
        x[1] = t(1, 0) * y[0] + t(1, 1) * y[1];
        const double v = fn(std::span<const double>(x.data(), 2));
        if (!std::isfinite(v)) throw std::domain_error("integrate_gaussian: non-finite integrand");
        slab += weights[static_cast<std::size_t>(i1)] * v;
      }
      return slab * weights[static_cast<std::size_t>(i0)];
    }
    for (int i1 = 0; i1 < order; ++i1) {
      y[1] = nodes[static_cast<std::size_t>(i1)];
      double plane = 0.0;
      for (int i2 = 0; i2 < order; ++i2) {
        y[2] = nodes[static_cast<std::size_t>(i2)];
        double line = 0.0;
        for (int i3 = 0; i3 < order; ++i3) {
          y[3] = nodes[static_cast<std::size_t>(i3)];
          for (int r = 0; r < 4; ++r)
            x[static_cast<std::size_t>(r)] =
                t(r, 0) * y[0] + t(r, 1) * y[1] + t(r, 2) * y[2] + t(r, 3) * y[3];
          const double v = fn(std::span<const double>(x.data(), 4));
          if (!std::isfinite(v))
            throw std::domain_error("integrate_gaussian: non-finite integrand");
          line += weights[static_cast<std::size_t>(i3)] * v;
        }
        plane += weights[static_cast<std::size_t>(i2)] * line;
      }
      slab += weights[static_cast<std::size_t>(i1)] * plane;
    }
    return slab * weights[static_cast<std::size_t>(i0)];
  };

  std::vector<double> slabs(static_cast<std::size_t>(order));
  if (dim == 4 && order >= 24) {
    const int nw = worker_count();
    std::vector<std::future<void>> futures;
    std::atomic<int> next{0};
    for (int w = 0; w < nw; ++w) {
      futures.push_back(std::async(std::launch::async, [&] {
        for (int i = next.fetch_add(1); i < order; i = next.fetch_add(1))
          slabs[static_cast<std::size_t>(i)] = outer_slab(i);
      }));
    }
    for (auto& f : futures) f.get();
  } else {
    for (int i = 0; i < order; ++i) slabs[static_cast<std::size_t>(i)] = outer_slab(i);
  }

  double total = 0.0;
  for (int i = 0; i < order; ++i) total += slabs[static_cast<std::size_t>(i)];
  return total / std::pow(M_PI, 0.5 * dim);
}

// Radial factor of the polar rule: \int_0^inf g(t) e^{-t} dt with the
// exp-sinh substitution t = exp((pi/2) sinh u), trapezoid of step h in u.
// Robust against logarithmic singularities of g at t = 0.
double exp_sinh_radial(const std::function<double(double)>& g, double h) {
  constexpr double kLambda = M_PI / 2.0;
  const int kmax = static_cast<int>(std::ceil(6.5 / h));
  double acc = 0.0;
  for (int k = -kmax; k <= kmax; ++k) {
    const double u = k * h;
    const double t = std::exp(kLambda * std::sinh(u));
    if (t > 745.0) break;  // e^{-t} underflows; all later + terms vanish too
    const double w = t * kLambda * std::cosh(u) * h;
    if (w == 0.0) continue;
    const double v = g(t);
    if (!std::isfinite(v))
      throw std::domain_error("integrate_gaussian_polar: non-finite integrand");
    acc += v * std::exp(-t) * w;
  }
  return acc;
}

}  // namespace

std::pair<std::vector<double>, std::vector<double>> gh_nodes(int order) {
  if (order < 1 || order > 200) throw std::invalid_argument("gh_nodes: order out of [1, 200]");
  if (order == 1) return {{0.0}, {std::sqrt(M_PI)}};

  // Golub-Welsch on the Hermite Jacobi matrix: off-diagonals sqrt(k/2).
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(order, order);
  for (int k = 1; k < order; ++k) {
    const double b = std::sqrt(0.5 * k);
    jacobi(k, k - 1) = b;
    jacobi(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);

  std::vector<double> nodes(static_cast<std::size_t>(order));
  std::vector<double> weights(static_cast<std::size_t>(order));
  const double sqrt_pi = std::sqrt(M_PI);
  for (int i = 0; i < order; ++i) {
    nodes[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
    const double v0 = solver.eigenvectors()(0, i);
    weights[static_cast<std::size_t>(i)] = sqrt_pi * v0 * v0;
  }
  // Eigenvalues come out sorted; enforce the exact +-pair symmetry.
  for (int i = 0, j = order - 1; i < j; ++i, --j) {
    const double x = 0.5 * (nodes[static_cast<std::size_t>(j)] - nodes[static_cast<std::size_t>(i)]);
    nodes[static_cast<std::size_t>(i)] = -x;
    nodes[static_cast<std::size_t>(j)] = x;
    const double w =
        0.5 * (weights[static_cast<std::size_t>(i)] + weights[static_cast<std::size_t>(j)]);
    weights[static_cast<std::size_t>(i)] = w;
    weights[static_cast<std::size_t>(j)] = w;
  }
  if (order % 2 == 1) nodes[static_cast<std::size_t>(order / 2)] = 0.0;
  return {nodes, weights};
}

IntegralResult integrate_gaussian(const Integrand& fn, const GaussianForm& form,
                                  const QuadratureSpec& spec) {
  check_spec(spec);
  IntegralResult result;
  result.est_err = std::numeric_limits<double>::infinity();

  double prev = 0.0;
  bool have_prev = false;
  for (int order = spec.base_order; order <= spec.max_order; order *= 2) {
    const double value = tensor_pass(fn, form, order);
    if (have_prev) {
      result.est_err = std::abs(value - prev);
      if (within_tol(value - prev, value, spec)) {
        result.value = value;
        result.converged = true;
        return result;
      }
    }
    prev = value;
    have_prev = true;
  }
  result.value = prev;
  result.converged = false;
  return result;
}

IntegralResult integrate_gaussian_polar(const Integrand& fn, const GaussianForm& form,
                                        const QuadratureSpec& spec) {
  check_spec(spec);
  if (form.dim() != 2)
    throw std::invalid_argument("integrate_gaussian_polar: dim-2 forms only");
  const Eigen::MatrixXd& t = form.x_from_y();

  auto level_value = [&](int m_theta, double h) {
    double acc = 0.0;
    for (int j = 0; j < m_theta; ++j) {
      const double theta = 2.0 * M_PI * j / m_theta;
      const double cth = std::cos(theta);
      const double sth = std::sin(theta);
      acc += exp_sinh_radial(
          [&](double tt) {
            const double rho = std::sqrt(tt);
            const std::array<double, 2> x{t(0, 0) * rho * cth + t(0, 1) * rho * sth,
                                          t(1, 0) * rho * cth + t(1, 1) * rho * sth};
            return fn(std::span<const double>(x.data(), 2));
          },
          h);
    }
    return acc / m_theta;
  };

  IntegralResult result;
  result.est_err = std::numeric_limits<double>::infinity();
  int m_theta = 16;
  double h = 0.2;
  double prev = 0.0;
  bool have_prev = false;
  for (int level = 0; level < 6; ++level) {
    const double value = level_value(m_theta, h);
    if (have_prev) {
      result.est_err = std::abs(value - prev);
      if (within_tol(value - prev, value, spec)) {
        result.value = value;
        result.converged = true;
        return result;
      }
    }
    prev = value;
    have_prev = true;
    m_theta *= 2;
    h *= 0.5;
  }
  result.value = prev;
  result.converged = false;
  return result;
}

McResult mc_integrate(const Integrand& fn, const GaussianForm& form, const McSpec& spec) {
  if (spec.samples < 1000) throw std::invalid_argument("mc_integrate: need samples >= 1000");
  if (spec.chunk < 1) throw std::invalid_argument("mc_integrate: chunk must be positive");

  const int dim = form.dim();
  const Eigen::MatrixXd& t = form.x_from_y();
  const long long n_chunks = (spec.samples + spec.chunk - 1) / spec.chunk;

  auto splitmix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };

  // One chunk: its own generator, Box-Muller normals scaled to the e^{-|y|^2}
  // weight (variance 1/2 per coordinate).
  auto run_chunk = [&](long long c) {
    std::mt19937_64 rng(splitmix(spec.seed ^ (0x517cc1b727220a95ULL * (c + 1))));
    auto uniform = [&rng] { return 1.0 - (rng() >> 11) * 0x1.0p-53; };  // (0, 1]
    const long long lo = c * spec.chunk;
    const long long hi = std::min(spec.samples, lo + spec.chunk);
    double sum = 0.0;
    double sum_sq = 0.0;
    std::array<double, 4> y{};
    std::array<double, 4> x{};
    for (long long s = lo; s < hi; ++s) {
      for (int k = 0; k < dim; k += 2) {
        const double r = std::sqrt(-std::log(uniform()));
        const double phi = 2.0 * M_PI * uniform();
        y[static_cast<std::size_t>(k)] = r * std::cos(phi);
        y[static_cast<std::size_t>(k + 1)] = r * std::sin(phi);
      }
      for (int r = 0; r < dim; ++r) {
        double acc = 0.0;
        for (int k = 0; k < dim; ++k) acc += t(r, k) * y[static_cast<std::size_t>(k)];
        x[static_cast<std::size_t>(r)] = acc;
      }
      const double v = fn(std::span<const double>(x.data(), static_cast<std::size_t>(dim)));
      sum += v;
      sum_sq += v * v;
    }
    return std::pair<double, double>{sum, sum_sq};
  };

  std::vector<std::pair<double, double>> chunk_sums(static_cast<std::size_t>(n_chunks));
  const int nw = worker_count();
  if (n_chunks > 1 && nw > 1) {
    std::atomic<long long> next{0};
    std::vector<std::future<void>> futures;
    for (int w = 0; w < nw; ++w) {
      futures.push_back(std::async(std::launch::async, [&] {
        for (long long c = next.fetch_add(1); c < n_chunks; c = next.fetch_add(1))
          chunk_sums[static_cast<std::size_t>(c)] = run_chunk(c);
      }));
    }
    for (auto& f : futures) f.get();
  } else {
    for (long long c = 0; c < n_chunks; ++c)
      chunk_sums[static_cast<std::size_t>(c)] = run_chunk(c);
  }

  double sum = 0.0;
  double sum_sq = 0.0;
  for (long long c = 0; c < n_chunks; ++c) {
    sum += chunk_sums[static_cast<std::size_t>(c)].first;
    sum_sq += chunk_sums[static_cast<std::size_t>(c)].second;
  }

  const double n = static_cast<double>(spec.samples);
  McResult out;
  out.value = sum / n;
  const double var = std::max(0.0, sum_sq / n - out.value * out.value);
  out.std_error = std::sqrt(var / n);
  return out;
}

}  // namespace sbwehrl
