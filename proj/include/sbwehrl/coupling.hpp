#pragma once

#include <cmath>
#include <stdexcept>

namespace sbwehrl {

// Largest admissible |eta|. Beyond this, entropy terms built from cosh/sinh
// products lose relative accuracy even though cosh(20) itself is representable.
inline constexpr double kEtaMax = 20.0;

// Largest excitation index per mode: polynomial degrees and factorials stay
// exactly representable and quadrature orders stay tractable.
inline constexpr int kExcitationMax = 12;

// Bogoliubov coupling parameter eta with cached tanh and sech.
// The transformation coefficients are a = cosh(eta), b = sinh(eta); the
// phase is fixed to zero.
class Coupling {
 public:
  explicit Coupling(double eta) : eta_(eta) {
    if (!std::isfinite(eta)) throw std::invalid_argument("coupling: eta must be finite");
    if (std::abs(eta) > kEtaMax) throw std::invalid_argument("coupling: |eta| exceeds kEtaMax");
    tau_ = std::tanh(eta);
    sech_ = 1.0 / std::cosh(eta);
  }

  double eta() const { return eta_; }
  double tau() const { return tau_; }
  double sech() const { return sech_; }

  double cosh() const { return std::cosh(eta_); }
  double sinh() const { return std::sinh(eta_); }

  // log(cosh eta) without overflow: |eta| + log1p(exp(-2|eta|)) - log 2.
  double log_cosh() const {
    const double a = std::abs(eta_);
    return a + std::log1p(std::exp(-2.0 * a)) - M_LN2;
  }

  bool operator==(const Coupling& other) const { return eta_ == other.eta_; }

 private:
  double eta_;
  double tau_;
  double sech_;
};

// Diagonalization metadata for the coupled Hamiltonian
//   H = omega (z1 zbar1 + z2 zbar2) + lambda (z1 z2 + zbar1 zbar2) + H0.
// Never used in any entropy computation; kept because the coupling eta is
// defined through lambda = -omega tanh(2 eta).
struct HamiltonianParams {
  double omega;
  double lambda;
  double h0;

  double omega_prime() const { return omega / std::cosh(2.0 * eta); }
  double h0_prime() const { return omega_prime() - omega + h0; }

  double eta = 0.0;
};

inline HamiltonianParams hamiltonian_params(const Coupling& c, double omega, double h0 = 0.0) {
  if (!(omega > 0.0)) throw std::invalid_argument("hamiltonian_params: omega must be positive");
  HamiltonianParams p;
  p.omega = omega;
  p.lambda = -omega * std::tanh(2.0 * c.eta());
  p.h0 = h0;
  p.eta = c.eta();
  return p;
}

}  // namespace sbwehrl
