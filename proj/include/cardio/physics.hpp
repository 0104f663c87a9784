#pragma once

// Pointwise constitutive laws: FitzHugh-Nagumo kinetics, the activation
// ODE, the active-strain tensors and the deformation-dependent
// conductivities. Everything here is a pure function.

#include <array>
#include <cstddef>
#include <stdexcept>

#include "cardio/mesh.hpp"
#include "cardio/tensor2.hpp"

namespace cardio {

class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// I_ion(v, w) = k (w + v (v - a)(v - 1)),  H(v, w) = d1 v - d2 w.
struct IonicParams {
  double k = 80.0;
  double a = 0.25;
  double d1 = 0.17;
  double d2 = 1.0;

  void validate() const;
  friend bool operator==(const IonicParams&, const IonicParams&) = default;
};

/// Activation ODE G(gamma, w) = eta1 (beta_act w - eta2 gamma), contraction
/// magnitudes Gamma_l / Gamma_t, reference activation gamma_R and the
/// elastic modulus mu.
struct ActivationParams {
  double eta1 = 1.0;
  double eta2 = 1.0;
  double beta_act = 1.0;
  double Gamma_l = 0.3;
  double Gamma_t = 0.1;
  double gamma_R = 0.3;
  double mu = 4.0;

  void validate() const;
  friend bool operator==(const ActivationParams&, const ActivationParams&) = default;
};

/// Reference conductivities and the truncation applied to the displacement
/// gradient before it enters F^{-1} K F^{-T}.
struct ConductivityParams {
  Sym2 K_i{0.02, 0.0, 0.01};
  Sym2 K_e{0.04, 0.0, 0.02};
  double clamp_delta = 0.5;  ///< max Frobenius norm of grad u
  double clamp_tau = 0.25;   ///< min det(I + grad u)

  void validate() const;
  friend bool operator==(const ConductivityParams&, const ConductivityParams&) = default;
};

double i_ion(double v, double w, const IonicParams& p);
double h_kin(double v, double w, const IonicParams& p);
double g_act(double gamma, double w, const ActivationParams& p);

/// -Gamma_k (2/pi) atan(max(gamma, 0) / gamma_R), in [-Gamma_k, 0].
double gamma_kappa(double gamma, double Gamma_k, double gamma_R);

/// C_a^{-1} = det(F_a) F_a^{-1} F_a^{-T} for F_a = I + gl dl(x)dl + gt dt(x)dt.
Sym2 active_tensor_inv(double gamma_l, double gamma_t, const FiberFrame& frame);
Sym2 active_tensor_inv(double gamma, const FiberFrame& frame, const ActivationParams& p);

/// sigma = mu C_a^{-1}.
Sym2 sigma_tensor(double gamma, const FiberFrame& frame, const ActivationParams& p);

struct EigenBounds {
  double lower;
  double upper;
};

/// Eigenvalue range of sigma over all gamma (the ellipticity constants of sigma).
EigenBounds sigma_bounds(const ActivationParams& p);

/// Scales grad u so that |grad u|_F <= clamp_delta and det(I + grad u) >= clamp_tau.
Mat2 clamp_gradient(const Mat2& grad_u, const ConductivityParams& p);

/// M = F^{-1} K F^{-T} with F = I + clamp_gradient(grad_u).
Sym2 conductivity(const Mat2& grad_u, const Sym2& K, const ConductivityParams& p);

/// Eigenvalue range of conductivity(., K, p) over all gradients.
EigenBounds conductivity_bounds(const Sym2& K, const ConductivityParams& p);

/// Axis-aligned box [lo, hi]^4 of (v1, w1, v2, w2) samples.
struct SampleBox {
  double lo = -2.0;
  double hi = 2.0;
};

struct DissipativityReport {
  bool holds = true;
  double worst_margin = 0.0;  ///< min of LHS - RHS over the samples
  std::array<double, 4> worst_point{};  ///< (v1, w1, v2, w2) at the worst margin
  std::size_t samples = 0;
};

/// Checks
///   mu (I(v2,w2) - I(v1,w1))(v2 - v1) - (H(v2,w2) - H(v1,w1))(w2 - w1)
///     >= -C min(1, 1/mu) (mu |v2 - v1|^2 + |w2 - w1|^2)
/// on a regular grid with n_per_axis points along each of the four axes.
DissipativityReport check_dissipativity(const IonicParams& p, double mu_test, double C_test, SampleBox box,
                                        int n_per_axis);

}  // namespace cardio
