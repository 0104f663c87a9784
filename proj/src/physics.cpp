#include "cardio/physics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace cardio {

void IonicParams::validate() const {
  if (!(a > 0.0 && a < 1.0)) throw ParameterError("ionic.a must lie in (0, 1)");
  if (!(d2 > 0.0)) throw ParameterError("ionic.d2 must be positive");
  if (!std::isfinite(k) || !std::isfinite(d1)) throw ParameterError("ionic parameters must be finite");
}

void ActivationParams::validate() const {
  if (!(eta1 >= 0.0 && eta2 >= 0.0 && beta_act >= 0.0)) {
    throw ParameterError("activation.eta1, eta2, beta must be non-negative");
  }
  if (!(Gamma_l >= 0.0 && Gamma_l < 1.0 && Gamma_t >= 0.0 && Gamma_t < 1.0)) {
    throw ParameterError("activation.Gamma_l and Gamma_t must lie in [0, 1)");
  }
  if (!(gamma_R > 0.0)) throw ParameterError("activation.gamma_R must be positive");
  if (!(mu > 0.0)) throw ParameterError("activation.mu must be positive");
}

void ConductivityParams::validate() const {
  if (!K_i.is_spd()) throw ParameterError("conductivity K_i must be symmetric positive definite");
  if (!K_e.is_spd()) throw ParameterError("conductivity K_e must be symmetric positive definite");
  if (!(clamp_delta > 0.0 && clamp_delta < 1.0)) throw ParameterError("conductivity.clamp_delta must lie in (0, 1)");
  if (!(clamp_tau > 0.0 && clamp_tau < 1.0)) throw ParameterError("conductivity.clamp_tau must lie in (0, 1)");
}

double i_ion(double v, double w, const IonicParams& p) { return p.k * (w + v * (v - p.a) * (v - 1.0)); }

double h_kin(double v, double w, const IonicParams& p) { return p.d1 * v - p.d2 * w; }

double g_act(double gamma, double w, const ActivationParams& p) { return p.eta1 * (p.beta_act * w - p.eta2 * gamma); }

double gamma_kappa(double gamma, double Gamma_k, double gamma_R) {
  const double plus = std::max(gamma, 0.0);
  return -Gamma_k * (2.0 / std::numbers::pi) * std::atan(plus / gamma_R);
}

Sym2 active_tensor_inv(double gamma_l, double gamma_t, const FiberFrame& frame) {
  const double sl = 1.0 + gamma_l;
  const double st = 1.0 + gamma_t;
  // In the fiber frame F_a = diag(sl, st), so det(F_a) F_a^{-1} F_a^{-T} = diag(st/sl, sl/st).
  const Sym2 local = Sym2::diag(sl * st / (sl * sl), sl * st / (st * st));
  return congruence(frame.rotation(), local);
}

Sym2 active_tensor_inv(double gamma, const FiberFrame& frame, const ActivationParams& p) {
  return active_tensor_inv(gamma_kappa(gamma, p.Gamma_l, p.gamma_R), gamma_kappa(gamma, p.Gamma_t, p.gamma_R), frame);
}

Sym2 sigma_tensor(double gamma, const FiberFrame& frame, const ActivationParams& p) {
  return p.mu * active_tensor_inv(gamma, frame, p);
}

EigenBounds sigma_bounds(const ActivationParams& p) {
  const double m = std::min(1.0 - p.Gamma_l, 1.0 - p.Gamma_t);
  return {p.mu * m, p.mu / m};
}

Mat2 clamp_gradient(const Mat2& grad_u, const ConductivityParams& p) {
  const double fro = grad_u.frobenius();
  double s = fro > p.clamp_delta ? p.clamp_delta / fro : 1.0;
  auto det_at = [&](double t) { return (Mat2::identity() + t * grad_u).det(); };
  if (det_at(s) < p.clamp_tau) {
    // det(I + t G) is 1 at t = 0; find the first crossing of clamp_tau.
    double lo = 0.0, hi = s;
    for (int i = 0; i < 80; ++i) {
      const double mid = 0.5 * (lo + hi);
      (det_at(mid) >= p.clamp_tau ? lo : hi) = mid;
    }
    s = lo;
  }
  return s * grad_u;
}

Sym2 conductivity(const Mat2& grad_u, const Sym2& K, const ConductivityParams& p) {
  if (grad_u == Mat2{}) return K;
  const Mat2 F = Mat2::identity() + clamp_gradient(grad_u, p);
  return congruence(F.inverse(), K);
}

EigenBounds conductivity_bounds(const Sym2& K, const ConductivityParams& p) {
  const auto ev = K.eigenvalues();
  const double smax = 1.0 + p.clamp_delta;
  const double smin = p.clamp_tau / smax;
  return {ev[0] / (smax * smax), ev[1] / (smin * smin)};
}

DissipativityReport check_dissipativity(const IonicParams& p, double mu_test, double C_test, SampleBox box,
                                        int n_per_axis) {
  DissipativityReport rep;
  rep.worst_margin = std::numeric_limits<double>::infinity();
  const int n = std::max(n_per_axis, 2);
  const double h = (box.hi - box.lo) / (n - 1);
  const double weight = C_test * std::min(1.0, 1.0 / mu_test);
  for (int a = 0; a < n; ++a) {
    const double v1 = box.lo + a * h;
    for (int b = 0; b < n; ++b) {
      const double w1 = box.lo + b * h;
      const double i1 = i_ion(v1, w1, p), h1 = h_kin(v1, w1, p);
      for (int c = 0; c < n; ++c) {
        const double v2 = box.lo + c * h;
        for (int d = 0; d < n; ++d) {
          const double w2 = box.lo + d * h;
          const double dv = v2 - v1, dw = w2 - w1;
          const double lhs = mu_test * (i_ion(v2, w2, p) - i1) * dv - (h_kin(v2, w2, p) - h1) * dw;
          const double rhs = -weight * (mu_test * dv * dv + dw * dw);
          const double margin = lhs - rhs;
          ++rep.samples;
          if (margin < rep.worst_margin) {
            rep.worst_margin = margin;
            rep.worst_point = {v1, w1, v2, w2};
          }
        }
      }
    }
  }
  rep.holds = rep.worst_margin >= 0.0;
  return rep;
}

}  // namespace cardio
