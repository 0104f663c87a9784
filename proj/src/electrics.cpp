#include "cardio/electrics.hpp"

#include <cmath>
#include <stdexcept>

namespace cardio {

double initial_stimulus(double x, double y) {
  const double r = std::sqrt(x * x + (y - 0.5) * (y - 0.5));
  return 1.0 - 1.0 / (1.0 + std::exp(-50.0 * (r - 0.18)));
}

double applied_current(double t, double x, double y) {
  return (t >= 0.0 && t < 0.01) ? initial_stimulus(x, y) : 0.0;
}

namespace {

Vector block_normal(const Vector& mass_ones) {
  Vector n(2 * mass_ones.size(), 0.0);
  std::copy(mass_ones.begin(), mass_ones.end(), n.begin() + static_cast<std::ptrdiff_t>(mass_ones.size()));
  return n;
}

Vector ones_times(const SparseMatrix& m) { return m * Vector(m.cols(), 1.0); }

}  // namespace

BidomainSystem::BidomainSystem(SparseMatrix mass, SparseMatrix a_i, SparseMatrix a_e, double dt)
    : mass_(std::move(mass)),
      a_i_(std::move(a_i)),
      a_e_(std::move(a_e)),
      mass_ones_(ones_times(mass_)),
      area_(vec::sum(mass_ones_)),
      dt_(dt),
      constraint_(block_normal(mass_ones_)) {
  if (!(dt > 0.0)) throw std::invalid_argument("bidomain time step must be positive");
  const SparseMatrix m_dt = mass_.scaled(1.0 / dt_);
  block_ = block2x2(combine(1.0, m_dt, 1.0, a_i_), m_dt.scaled(-1.0), m_dt.scaled(-1.0), combine(1.0, m_dt, 1.0, a_e_));
}

BidomainSystem assemble_bidomain(const FeSpace& p1, const SparseMatrix& mass, const GradientField& grad_u,
                                 const ConductivityParams& params, double dt) {
  const auto& mesh = p1.mesh();
  const std::size_t nq = quadrature_size(mesh);
  if (!grad_u.empty() && grad_u.size() != nq) throw std::invalid_argument("displacement gradient field has wrong size");
  TensorField mi(nq), me(nq);
  for (std::size_t q = 0; q < nq; ++q) {
    const Mat2 g = grad_u.empty() ? Mat2{} : grad_u[q];
    mi[q] = conductivity(g, params.K_i, params);
    me[q] = conductivity(g, params.K_e, params);
  }
  return BidomainSystem(mass, assemble_stiffness(p1, mi), assemble_stiffness(p1, me), dt);
}

BidomainSystem assemble_bidomain(const FeSpace& p1, const GradientField& grad_u, const ConductivityParams& params,
                                 double dt) {
  return assemble_bidomain(p1, assemble_mass(p1), grad_u, params, dt);
}

Vector bidomain_rhs(const BidomainSystem& sys, const ElectricState& s, const StepForcing& f, const IonicParams& ionic) {
  const std::size_t n = sys.size();
  const double dt = sys.dt();
  Vector a(n);
  for (std::size_t j = 0; j < n; ++j) {
    a[j] = s.v[j] / dt - i_ion(s.v[j], s.w[j], ionic) + eval_coeff(f.beta_v, s.v[j]) * f.dW_v / dt;
  }
  const Vector ma = sys.mass() * a;
  Vector rhs(2 * n);
  for (std::size_t j = 0; j < n; ++j) {
    const double load = f.applied_load.empty() ? 0.0 : f.applied_load[j];
    rhs[j] = ma[j] + load;
    rhs[n + j] = -ma[j] + load;
  }
  return rhs;
}

StepReport step_bidomain(const BidomainSystem& sys, ElectricState& s, const StepForcing& f, const IonicParams& ionic,
                         double tol) {
  const std::size_t n = sys.size();
  if (s.v.size() != n || s.v_i.size() != n || s.v_e.size() != n || s.w.size() != n) {
    throw std::invalid_argument("electric state does not match the system size");
  }
  if (!f.applied_load.empty() && f.applied_load.size() != n) throw std::invalid_argument("applied load has wrong size");

  const Vector rhs = bidomain_rhs(sys, s, f, ionic);
  Vector guess(2 * n);
  std::copy(s.v_i.begin(), s.v_i.end(), guess.begin());
  std::copy(s.v_e.begin(), s.v_e.end(), guess.begin() + static_cast<std::ptrdiff_t>(n));

  CgOptions opts;
  opts.tol = tol;
  opts.constraint = &sys.constraint();
  opts.initial_guess = guess;
  const CgResult sol = solve_cg(sys.block(), rhs, opts);

  StepReport rep{sol.converged, sol.iterations, sol.relative_residual};
  if (!sol.converged) return rep;

  const double dt = sys.dt();
  Vector w_next(n);
  for (std::size_t j = 0; j < n; ++j) {
    w_next[j] = s.w[j] + dt * h_kin(s.v[j], s.w[j], ionic) + eval_coeff(f.beta_w, s.v[j]) * f.dW_w;
  }
  s.v_i.assign(sol.x.begin(), sol.x.begin() + static_cast<std::ptrdiff_t>(n));
  s.v_e = enforce_zero_mean(std::span<const double>(sol.x).subspan(n), sys.mass());
  for (std::size_t j = 0; j < n; ++j) s.v[j] = s.v_i[j] - s.v_e[j];
  s.w = std::move(w_next);
  return rep;
}

Vector enforce_zero_mean(std::span<const double> v_e, const SparseMatrix& mass) {
  const Vector m1 = ones_times(mass);
  const double c = vec::dot(m1, v_e) / vec::sum(m1);
  Vector out(v_e.begin(), v_e.end());
  for (double& x : out) x -= c;
  return out;
}

double mass_weighted_mean(std::span<const double> v_e, const Vector& mass_ones) {
  return vec::dot(mass_ones, v_e) / vec::sum(mass_ones);
}

ElectricState split_potential(std::span<const double> v, std::span<const double> w, const SparseMatrix& mass) {
  ElectricState s;
  s.v.assign(v.begin(), v.end());
  s.w.assign(w.begin(), w.end());
  Vector half(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) half[j] = -0.5 * v[j];
  s.v_e = enforce_zero_mean(half, mass);
  s.v_i.resize(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) s.v_i[j] = v[j] + s.v_e[j];
  for (std::size_t j = 0; j < v.size(); ++j) s.v[j] = s.v_i[j] - s.v_e[j];
  return s;
}

}  // namespace cardio
