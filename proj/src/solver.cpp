#include "srtd/solver.hpp"

#include "parallel.hpp"
#include "srtd/errors.hpp"
#include "srtd/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace srtd {

namespace {

bool converged(double delta, double x_norm, double eps, StopMode mode) {
  if (mode == StopMode::absolute) return delta <= eps;
  return delta / std::max(1.0, x_norm) <= eps;
}

// Argument of the SVT in the X-update.
Tensor3 x_update_argument(const SolverState& s, const SolverConfig& cfg) {
  const double inv_mu = 1.0 / s.mu;
  Tensor3 anchor = cfg.regularizer == Regularizer::dct_l1 ? idct3(s.e + s.z * inv_mu) : s.e;
  Tensor3 arg = s.w - s.y * inv_mu;
  arg += anchor;
  arg *= 0.5;
  return arg;
}

Tensor3 e_from_transform(const Tensor3& tx, const SolverState& s, const SolverConfig& cfg) {
  return soft_threshold(tx - s.z * (1.0 / s.mu), cfg.lambda / s.mu);
}

Tensor3 w_from_product(const Tensor3& atb, const SolverState& s, const Tensor3& m, const ObservationMask& omega) {
  Tensor3 free = atb + s.y;
  free *= 1.0 / s.mu;
  free += s.x;
  return project_observed(free, m, omega);
}

void check_finite(const SolverState& s, int iteration) {
  if (!std::isfinite(s.mu) || !all_finite(s.x) || !all_finite(s.w) || !all_finite(s.e) || !all_finite(s.y) ||
      !all_finite(s.z))
    throw DivergenceError("admm_solve: non-finite iterate", iteration);
}

} // namespace

void SolverConfig::validate(const Dims& dims) const {
  const std::size_t m = std::min(dims.n1, dims.n2);
  if (rank < 1 || rank > m)
    throw ParameterError("rank must lie in [1, " + std::to_string(m) + "], got " + std::to_string(rank));
  if (!(lambda >= 0.0)) throw ParameterError("lambda must be non-negative");
  if (!(rho > 1.0)) throw ParameterError("rho must exceed 1");
  if (!(mu_init > 0.0)) throw ParameterError("mu_init must be positive");
  if (!(mu_max >= mu_init)) throw ParameterError("mu_max must be at least mu_init");
  if (!(eps_outer > 0.0) || !(eps_inner > 0.0)) throw ParameterError("tolerances must be positive");
  if (max_outer < 1 || max_inner < 1) throw ParameterError("iteration limits must be at least 1");
}

std::pair<Tensor3, Tensor3> truncate_factors(const TSvdFactors& f, std::size_t r) {
  const std::size_t m = std::min(f.u.n2(), f.v.n2());
  if (r < 1 || r > m) throw ParameterError("truncate_factors: r=" + std::to_string(r) + " outside [1, " +
                                           std::to_string(m) + "]");
  return {ttranspose(lateral_slices(f.u, 0, r)), ttranspose(lateral_slices(f.v, 0, r))};
}

double soft_threshold(double x, double tau) {
  const double mag = std::abs(x) - tau;
  if (mag <= 0.0) return 0.0;
  return x > 0.0 ? mag : -mag;
}

Tensor3 soft_threshold(const Tensor3& x, double tau) {
  if (tau < 0.0) throw ParameterError("soft_threshold: tau must be non-negative");
  Tensor3 out(x.dims());
  const auto in = x.data();
  auto o = out.data();
  const auto n = std::int64_t(in.size());
#pragma omp parallel for if (n > detail::kElementwiseGrain)
  for (std::int64_t i = 0; i < n; ++i) o[std::size_t(i)] = soft_threshold(in[std::size_t(i)], tau);
  return out;
}

Tensor3 update_x(const SolverState& state, const SolverConfig& cfg) {
  return svt(x_update_argument(state, cfg), 0.5 / state.mu);
}

Tensor3 update_e(const SolverState& state, const SolverConfig& cfg) {
  if (cfg.regularizer == Regularizer::none) return state.x;
  return e_from_transform(dct3(state.x), state, cfg);
}

Tensor3 update_w(const SolverState& state, const SolverConfig&, const Tensor3& m, const ObservationMask& omega) {
  return w_from_product(tproduct(ttranspose(state.a_k), state.b_k), state, m, omega);
}

std::pair<Tensor3, Tensor3> update_duals(const SolverState& state, const SolverConfig& cfg) {
  Tensor3 y = state.y + (state.x - state.w) * state.mu;
  if (cfg.regularizer == Regularizer::none) return {std::move(y), state.z};
  Tensor3 z = state.z + (state.e - dct3(state.x)) * state.mu;
  return {std::move(y), std::move(z)};
}

double update_mu(double mu, const SolverConfig& cfg) { return std::min(cfg.rho * mu, cfg.mu_max); }

SolverState initial_state(const Tensor3& m, const ObservationMask& omega, const SolverConfig& cfg) {
  SolverState s;
  s.x = project_observed(Tensor3(m.dims()), m, omega);
  s.w = s.x;
  s.e = Tensor3(m.dims());
  s.z = Tensor3(m.dims());
  s.y = Tensor3(m.dims());
  std::mt19937_64 gen(cfg.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (double& v : s.y.data()) v = unit(gen);
  s.mu = cfg.mu_init;
  return s;
}

SolverState admm_solve(const Tensor3& m, const ObservationMask& omega, const Tensor3& a_k, const Tensor3& b_k,
                       const SolverConfig& cfg, std::optional<SolverState> warm, const IterationObserver& observer) {
  if (omega.dims() != m.dims()) throw DimensionError("admm_solve: mask dims differ from data dims");
  if (a_k.n2() != m.n1() || b_k.n2() != m.n2() || a_k.n1() != b_k.n1() || a_k.n3() != m.n3() ||
      b_k.n3() != m.n3())
    throw DimensionError("admm_solve: factor dims do not match the data");

  SolverState s = warm ? std::move(*warm) : initial_state(m, omega, cfg);
  s.a_k = a_k;
  s.b_k = b_k;
  const Tensor3 atb = tproduct(ttranspose(a_k), b_k);
  const bool sparse = cfg.regularizer == Regularizer::dct_l1;

  for (int it = 0; it < cfg.max_inner; ++it) {
    Tensor3 x_prev = s.x;
    s.x = update_x(s, cfg);
    Tensor3 tx = sparse ? dct3(s.x) : Tensor3{};
    s.e = sparse ? e_from_transform(tx, s, cfg) : s.x;
    s.w = w_from_product(atb, s, m, omega);
    s.y += (s.x - s.w) * s.mu;
    if (sparse) s.z += (s.e - tx) * s.mu;
    s.mu = update_mu(s.mu, cfg);
    ++s.inner_iter;
    check_finite(s, s.inner_iter);

    s.last_delta = fro_norm(s.x - x_prev);
    if (observer) observer(s);

    // A small step alone is not convergence while mu is still small; the
    // splitting constraints must hold too.
    const double x_norm = fro_norm(s.x);
    const double feasibility = std::max(fro_norm(s.x - s.w), sparse ? fro_norm(s.e - tx) : 0.0);
    if (converged(s.last_delta, x_norm, cfg.eps_inner, cfg.stop_mode) &&
        converged(feasibility, x_norm, cfg.eps_inner, cfg.stop_mode))
      break;
  }
  return s;
}

double surrogate_objective(const Tensor3& x, const Tensor3& a_k, const Tensor3& b_k, const SolverConfig& cfg) {
  double value = tnn(x) - trace_pair(tproduct(a_k, x), ttranspose(b_k));
  if (cfg.regularizer == Regularizer::dct_l1 && cfg.lambda > 0.0) value += cfg.lambda * l1_norm(dct3(x));
  return value;
}

Residuals residuals(const SolverState& state, const SolverConfig& cfg) {
  Residuals r;
  r.x_minus_w = fro_norm(state.x - state.w);
  r.e_minus_tx = cfg.regularizer == Regularizer::dct_l1 ? fro_norm(state.e - dct3(state.x))
                                                         : fro_norm(state.e - state.x);
  r.delta_x = state.last_delta;
  return r;
}

SolveReport srtd_complete(const Tensor3& m, const ObservationMask& omega, const SolverConfig& cfg,
                          const IterationObserver& observer) {
  const auto start = std::chrono::steady_clock::now();
  if (omega.dims() != m.dims()) throw DimensionError("srtd_complete: mask dims differ from data dims");
  if (omega.count() == 0) throw ParameterError("srtd_complete: no observed entries");
  cfg.validate(m.dims());

  SolveReport report;
  report.seed = cfg.seed;

  Tensor3 estimate = project_observed(Tensor3(m.dims()), m, omega);
  std::optional<SolverState> state;
  {
    auto [a0, b0] = truncate_factors(tsvd(estimate, TsvdShape::economy), cfg.rank);
    report.objective_trace.push_back(surrogate_objective(estimate, a0, b0, cfg));
  }

  for (int k = 0; k < cfg.max_outer; ++k) {
    auto [a_k, b_k] = truncate_factors(tsvd(estimate, TsvdShape::economy), cfg.rank);
    SolverState next = admm_solve(m, omega, a_k, b_k, cfg, std::move(state), observer);
    next.outer_iter = k + 1;

    Tensor3 updated = project_observed(next.x, m, omega);
    const double delta = fro_norm(updated - estimate);
    report.objective_trace.push_back(surrogate_objective(updated, next.a_k, next.b_k, cfg));
    report.outer_iters = k + 1;
    report.inner_iters_total = next.inner_iter;
    report.final_residuals = residuals(next, cfg);

    estimate = std::move(updated);
    state = std::move(next);
    if (converged(delta, fro_norm(estimate), cfg.eps_outer, cfg.stop_mode)) break;
  }

  report.recovered = std::move(estimate);
  report.wall_time = std::chrono::steady_clock::now() - start;
  return report;
}

} // namespace srtd
