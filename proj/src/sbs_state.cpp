#include "sbwehrl/sbs_state.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace sbwehrl {

namespace {

void check_mode(int mode) {
  if (mode != 1 && mode != 2) throw std::invalid_argument("sbs_state: mode must be 1 or 2");
}

// Accumulates contributions per exponent pair while tracking the largest
// contribution magnitude, so exact cancellations (e.g. wbar Omega_w = 0) are
// recognized at any scale.
class PolyAccumulator {
 public:
  void add(std::pair<int, int> key, Complex value) {
    auto& slot = slots_[key];
    slot.sum += value;
    slot.peak = std::max(slot.peak, std::abs(value));
  }

  SBState::PolyMap finalize() const {
    SBState::PolyMap out;
    double global_max = 0.0;
    for (const auto& [key, slot] : slots_) {
      if (std::abs(slot.sum) <= kCoefficientCleanup * slot.peak) continue;
      out.emplace(key, slot.sum);
      global_max = std::max(global_max, std::abs(slot.sum));
    }
    std::erase_if(out, [global_max](const auto& kv) {
      return std::abs(kv.second) < kCoefficientCleanup * global_max;
    });
    return out;
  }

 private:
  struct Slot {
    Complex sum{0.0, 0.0};
    double peak = 0.0;
  };
  std::map<std::pair<int, int>, Slot> slots_;
};

void accumulate_z_creation(PolyAccumulator& acc, const SBState::PolyMap& poly, int mode,
                           Complex scale) {
  for (const auto& [e, c] : poly) {
    const auto key = mode == 1 ? std::pair{e.first + 1, e.second} : std::pair{e.first, e.second + 1};
    acc.add(key, scale * c);
  }
}

void accumulate_z_annihilation(PolyAccumulator& acc, const SBState::PolyMap& poly, int mode,
                               double tau, Complex scale) {
  for (const auto& [e, c] : poly) {
    if (mode == 1) {
      if (e.first > 0) acc.add({e.first - 1, e.second}, scale * double(e.first) * c);
      acc.add({e.first, e.second + 1}, scale * tau * c);
    } else {
      if (e.second > 0) acc.add({e.first, e.second - 1}, scale * double(e.second) * c);
      acc.add({e.first + 1, e.second}, scale * tau * c);
    }
  }
}

constexpr int kBinomialMax = 56;

double binomial(int n, int k) {
  static const auto table = [] {
    std::array<std::array<double, kBinomialMax + 1>, kBinomialMax + 1> t{};
    for (int i = 0; i <= kBinomialMax; ++i) {
      t[static_cast<std::size_t>(i)][0] = 1.0;
      for (int j = 1; j <= i; ++j)
        t[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            t[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] +
            t[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j)];
    }
    return t;
  }();
  return table[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
}

// i^k and (-i)^k as exact unit complexes.
Complex i_power(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

// Expansion of conj(z1)^a conj(z2)^b z1^c z2^d into monomials over
// (u1, u2, v1, v2), accumulated into `out` with an overall coefficient.
void expand_z_monomial(int a, int b, int c, int d, Complex coef,
                       std::map<MonomialIndex, Complex>& out) {
  for (int p = 0; p <= a; ++p) {
    const Complex fa = binomial(a, p) * i_power(-(a - p));
    for (int q = 0; q <= b; ++q) {
      const Complex fb = binomial(b, q) * i_power(-(b - q));
      for (int r = 0; r <= c; ++r) {
        const Complex fc = binomial(c, r) * i_power(c - r);
        for (int s = 0; s <= d; ++s) {
          const Complex fd = binomial(d, s) * i_power(d - s);
          const MonomialIndex m{p + r, q + s, a - p + c - r, b - q + d - s};
          out[m] += coef * fa * fb * fc * fd;
        }
      }
    }
  }
}

// conj(P_f) P_g expanded over real coordinates.
std::map<MonomialIndex, Complex> cross_density(const SBState& f, const SBState& g) {
  std::map<MonomialIndex, Complex> out;
  for (const auto& [ef, cf] : f.poly())
    for (const auto& [eg, cg] : g.poly())
      expand_z_monomial(ef.first, ef.second, eg.first, eg.second, std::conj(cf) * cg, out);
  return out;
}

}  // namespace

int SBState::degree() const {
  int d = 0;
  for (const auto& [e, c] : poly_) d = std::max(d, e.first + e.second);
  return d;
}

SBState ground_state(const Coupling& coupling) {
  SBState::PolyMap poly;
  poly.emplace(std::pair{0, 0}, Complex{1.0, 0.0});
  return SBState(coupling, std::move(poly), Complex{coupling.sech(), 0.0});
}

SBState apply_z_creation(const SBState& state, int mode) {
  check_mode(mode);
  PolyAccumulator acc;
  accumulate_z_creation(acc, state.poly(), mode, {1.0, 0.0});
  return SBState(state.coupling(), acc.finalize(), state.prefactor());
}

SBState apply_z_annihilation(const SBState& state, int mode) {
  check_mode(mode);
  PolyAccumulator acc;
  accumulate_z_annihilation(acc, state.poly(), mode, state.coupling().tau(), {1.0, 0.0});
  return SBState(state.coupling(), acc.finalize(), state.prefactor());
}

SBState apply_w_creation(const SBState& state, int mode) {
  check_mode(mode);
  const Coupling& c = state.coupling();
  PolyAccumulator acc;
  accumulate_z_creation(acc, state.poly(), mode, {c.cosh(), 0.0});
  accumulate_z_annihilation(acc, state.poly(), mode == 1 ? 2 : 1, c.tau(), {-c.sinh(), 0.0});
  return SBState(c, acc.finalize(), state.prefactor());
}

SBState apply_w_annihilation(const SBState& state, int mode) {
  check_mode(mode);
  const Coupling& c = state.coupling();
  PolyAccumulator acc;
  accumulate_z_annihilation(acc, state.poly(), mode, c.tau(), {c.cosh(), 0.0});
  accumulate_z_creation(acc, state.poly(), mode == 1 ? 2 : 1, {-c.sinh(), 0.0});
  return SBState(c, acc.finalize(), state.prefactor());
}

SBState excited_state(const Coupling& coupling, int n1, int n2) {
  if (n1 < 0 || n2 < 0 || n1 > kExcitationMax || n2 > kExcitationMax)
    throw std::invalid_argument("excited_state: indices must lie in [0, kExcitationMax]");
  SBState state = ground_state(coupling);
  for (int k = 0; k < n1; ++k) state = apply_w_creation(state, 1);
  for (int k = 0; k < n2; ++k) state = apply_w_creation(state, 2);
  double norm = 1.0;
  for (int k = 2; k <= n1; ++k) norm *= k;
  for (int k = 2; k <= n2; ++k) norm *= k;
  return state.scaled(Complex{1.0 / std::sqrt(norm), 0.0});
}

Complex inner_product(const SBState& f, const SBState& g) {
  if (!(f.coupling() == g.coupling()))
    throw std::invalid_argument("inner_product: states carry different couplings");

  const auto cross = cross_density(f, g);
  RealPolynomial re;
  RealPolynomial im;
  for (const auto& [m, c] : cross) {
    re.add(m, c.real());
    im.add(m, c.imag());
  }
  const GaussianForm form = coupled_form(f.coupling());
  // (1/pi^2) \int ... dz = cosh^2(eta) * E_Q[...]
  const double ch = f.coupling().cosh();
  const Complex integral{polynomial_expectation(form, re), polynomial_expectation(form, im)};
  return std::conj(f.prefactor()) * g.prefactor() * (ch * ch) * integral;
}

Complex expectation(const SBState& state, std::span<const LadderOp> word) {
  SBState acted = state;
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    switch (*it) {
      case LadderOp::Z1: acted = apply_z_creation(acted, 1); break;
      case LadderOp::Z2: acted = apply_z_creation(acted, 2); break;
      case LadderOp::D1: acted = apply_z_annihilation(acted, 1); break;
      case LadderOp::D2: acted = apply_z_annihilation(acted, 2); break;
    }
  }
  return inner_product(state, acted);
}

Complex kernel_eval(Complex z1, Complex z2, Complex w1, Complex w2) {
  return std::exp(z1 * std::conj(w1) + z2 * std::conj(w2));
}

RealPolynomial density_polynomial(const SBState& state) {
  const auto cross = cross_density(state, state);
  double max_re = 0.0;
  double max_im = 0.0;
  RealPolynomial out;
  for (const auto& [m, c] : cross) {
    max_re = std::max(max_re, std::abs(c.real()));
    max_im = std::max(max_im, std::abs(c.imag()));
    out.add(m, c.real());
  }
  if (max_im > 1e-12 * std::max(max_re, 1e-300))
    throw std::logic_error("density_polynomial: imaginary residue above tolerance");
  return out;
}

}  // namespace sbwehrl
