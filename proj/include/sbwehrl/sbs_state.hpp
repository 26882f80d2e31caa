#pragma once

#include <complex>
#include <map>
#include <span>
#include <utility>

#include "sbwehrl/coupling.hpp"
#include "sbwehrl/gaussian_moments.hpp"

namespace sbwehrl {

using Complex = std::complex<double>;

// Relative threshold below which a polynomial coefficient is treated as an
// exact cancellation and dropped.
inline constexpr double kCoefficientCleanup = 1e-14;

// A two-mode Segal-Bargmann function
//   f(z1, z2) = prefactor * [sum_{a,b} c_{ab} z1^a z2^b] * exp(tau z1 z2),
// with tau = tanh(eta) fixed by the coupling.  Values are immutable: every
// operator application returns a new state.
class SBState {
 public:
  using PolyMap = std::map<std::pair<int, int>, Complex>;

  SBState(Coupling coupling, PolyMap poly, Complex prefactor)
      : coupling_(coupling), poly_(std::move(poly)), prefactor_(prefactor) {}

  const Coupling& coupling() const { return coupling_; }
  const PolyMap& poly() const { return poly_; }
  Complex prefactor() const { return prefactor_; }

  bool is_zero() const { return poly_.empty(); }
  int degree() const;

  SBState scaled(Complex c) const { return SBState(coupling_, poly_, prefactor_ * c); }

 private:
  Coupling coupling_;
  PolyMap poly_;
  Complex prefactor_;
};

// Omega_w = sech(eta) exp(tanh(eta) z1 z2), the entangled vacuum.
SBState ground_state(const Coupling& coupling);

// f_{(n1,n2)} = w1^{n1} w2^{n2} Omega_w / sqrt(n1! n2!), built by repeated
// operator application.  Rejects indices above kExcitationMax.
SBState excited_state(const Coupling& coupling, int n1, int n2);

// Multiplication by z_mode (creation in the z modes).
SBState apply_z_creation(const SBState& state, int mode);

// d/dz_mode (annihilation in the z modes); acts on the polynomial and on the
// kernel: d1 (P e^{tau z1 z2}) = (d1 P + tau z2 P) e^{tau z1 z2}.
SBState apply_z_annihilation(const SBState& state, int mode);

// w_mode = cosh(eta) z_mode - sinh(eta) d_other: creation in the w modes.
SBState apply_w_creation(const SBState& state, int mode);

// wbar_mode = cosh(eta) d_mode - sinh(eta) z_other: annihilation in the w
// modes; annihilates the ground state exactly.
SBState apply_w_annihilation(const SBState& state, int mode);

// <f, g> = int conj(f) g mu_z dz over the coupled measure, evaluated exactly:
// conj(P_f) P_g is expanded into real (u, v) monomials and handed to the
// Gaussian moment engine.  Throws on coupling mismatch.
Complex inner_product(const SBState& f, const SBState& g);

enum class LadderOp { Z1, Z2, D1, D2 };

// <state| O |state> for an operator word, a finite product of
// {z1, z2, d1, d2}.  The word is applied right-to-left on the state (standard
// operator convention): word {Z1, D1} means the operator z1 d1, so D1 acts
// first.
Complex expectation(const SBState& state, std::span<const LadderOp> word);

// Reproducing kernel K(z, w) = exp(z1 conj(w1) + z2 conj(w2)).
Complex kernel_eval(Complex z1, Complex z2, Complex w1, Complex w2);

// |P(z1,z2)|^2 expanded as a real polynomial over (u1, u2, v1, v2); the
// imaginary residue of the expansion must cancel below 1e-12 relative.
RealPolynomial density_polynomial(const SBState& state);

}  // namespace sbwehrl
