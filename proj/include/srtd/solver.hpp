#pragma once

// Low-rank tensor completion with a DCT-domain l1 regularizer:
//
//   min  ||X||_* - tr(A * X * B^T) + lambda ||E||_1
//   s.t. X_Ω = M_Ω,  E = dct3(X)
//
// The outer loop re-derives A, B from the leading r T-SVD factors of the
// current estimate; the inner loop is an ADMM on the split X = W with
// multipliers Y (for X = W) and Z (for E = dct3(X)).

#include "srtd/mask.hpp"
#include "srtd/t_algebra.hpp"
#include "srtd/tensor3.hpp"

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace srtd {

enum class StopMode {
  absolute, ///< ||x_new - x_old||_F <= eps
  relative, ///< ||x_new - x_old||_F / max(1, ||x_new||_F) <= eps
};

enum class Regularizer {
  dct_l1, ///< the full model
  /// Low-rank term only. The E/Z branch is bypassed: no transform, no
  /// thresholding, Z stays zero and E simply tracks X in the original domain.
  /// Iterates coincide with dct_l1 at lambda = 0.
  none,
};

struct SolverConfig {
  double lambda = 0.05;
  std::size_t rank = 0; ///< truncation rank r; must be set (>= 1)
  double rho = 1.1;
  double mu_init = 1e-4;
  double mu_max = 1e10;
  double eps_outer = 1e-3;
  int max_outer = 50;
  double eps_inner = 1e-3;
  int max_inner = 200;
  StopMode stop_mode = StopMode::relative;
  std::uint64_t seed = 0; ///< seeds the random initial Y
  Regularizer regularizer = Regularizer::dct_l1;

  /// Throws ParameterError on an inadmissible combination for data of `dims`.
  void validate(const Dims& dims) const;
};

struct SolverState {
  Tensor3 x;
  Tensor3 w;
  Tensor3 e; ///< DCT-domain copy of x (original domain under Regularizer::none)
  Tensor3 y;
  Tensor3 z;
  double mu = 0.0;
  Tensor3 a_k; ///< r x n1 x n3
  Tensor3 b_k; ///< r x n2 x n3
  int inner_iter = 0;
  int outer_iter = 0;
  double last_delta = 0.0; ///< ||x_new - x_old||_F of the last inner step
};

struct Residuals {
  double x_minus_w = 0.0;
  double e_minus_tx = 0.0;
  double delta_x = 0.0;
};

struct SolveReport {
  Tensor3 recovered;
  int outer_iters = 0;
  int inner_iters_total = 0;
  Residuals final_residuals;
  /// Surrogate objective, entry 0 at the initial estimate and one entry per
  /// outer iteration.
  std::vector<double> objective_trace;
  std::chrono::duration<double> wall_time{};
  std::uint64_t seed = 0;
};

/// Called after every completed inner iteration.
using IterationObserver = std::function<void(const SolverState&)>;

/// A_k = ttranspose(U(:, 1:r, :)), B_k = ttranspose(V(:, 1:r, :)).
std::pair<Tensor3, Tensor3> truncate_factors(const TSvdFactors& f, std::size_t r);

double soft_threshold(double x, double tau);
Tensor3 soft_threshold(const Tensor3& x, double tau);

/// X = svt(1/2 (W - Y/mu + idct3(E + Z/mu)), 1/(2 mu)).
Tensor3 update_x(const SolverState& state, const SolverConfig& cfg);
/// E = soft_threshold(dct3(X) - Z/mu, lambda/mu), with state.x already updated.
Tensor3 update_e(const SolverState& state, const SolverConfig& cfg);
/// W = X + (A^T * B + Y)/mu off Ω, M on Ω.
Tensor3 update_w(const SolverState& state, const SolverConfig& cfg, const Tensor3& m,
                 const ObservationMask& omega);
/// (Y + mu (X - W), Z + mu (E - dct3(X))).
std::pair<Tensor3, Tensor3> update_duals(const SolverState& state, const SolverConfig& cfg);
/// min(rho mu, mu_max).
double update_mu(double mu, const SolverConfig& cfg);

/// Fresh inner-loop state: X = W = M_Ω, E = Z = 0, Y ~ U[0,1) from cfg.seed,
/// mu = mu_init.
SolverState initial_state(const Tensor3& m, const ObservationMask& omega, const SolverConfig& cfg);

/// Inner ADMM loop with fixed A_k, B_k. Runs X, E, W, Y/Z, mu updates until
/// the eps_inner stop test passes or max_inner iterations. Starts from `warm`
/// when given, else from initial_state(). Throws DivergenceError if an
/// iterate becomes non-finite.
SolverState admm_solve(const Tensor3& m, const ObservationMask& omega, const Tensor3& a_k, const Tensor3& b_k,
                       const SolverConfig& cfg, std::optional<SolverState> warm = std::nullopt,
                       const IterationObserver& observer = {});

/// Full completion: alternate T-SVD truncation and warm-started ADMM until
/// the eps_outer stop test passes or max_outer outer iterations.
/// `recovered` equals m on Ω exactly.
SolveReport srtd_complete(const Tensor3& m, const ObservationMask& omega, const SolverConfig& cfg,
                          const IterationObserver& observer = {});

/// ||X||_* - tr(A * X * B^T) + lambda ||dct3(X)||_1.
double surrogate_objective(const Tensor3& x, const Tensor3& a_k, const Tensor3& b_k, const SolverConfig& cfg);

Residuals residuals(const SolverState& state, const SolverConfig& cfg);

} // namespace srtd
