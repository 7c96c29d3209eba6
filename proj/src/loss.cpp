// Copyright 2026 The senseforge Authors
// SPDX-License-Identifier: Apache-2.0
#include "senseforge/loss.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "senseforge/error.hpp"

namespace senseforge {
namespace {

constexpr double kBranch = 30.0;

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw Error(ErrorCode::NonFiniteInput, std::string(what) + " is not finite");
  }
}

void validate(const DpoInputs& in) {
  require_finite(in.logp_theta_w, "logp_theta_w");
  require_finite(in.logp_ref_w, "logp_ref_w");
  require_finite(in.logp_theta_l, "logp_theta_l");
  require_finite(in.logp_ref_l, "logp_ref_l");
  require_finite(in.beta, "beta");
  if (in.beta <= 0) throw Error(ErrorCode::InvalidArgument, "beta must be positive");
}

double sequence_logprob(std::span<const double> tokens, bool normalize) {
  if (tokens.empty()) throw Error(ErrorCode::EmptySequence, "empty token sequence");
  for (double v : tokens) require_finite(v, "token log-prob");
  const double sum = std::accumulate(tokens.begin(), tokens.end(), 0.0);
  return normalize ? sum / static_cast<double>(tokens.size()) : sum;
}

}  // namespace

double sft_loss(std::span<const double> token_logprobs, SftReduction reduction) {
  if (token_logprobs.empty()) throw Error(ErrorCode::EmptySequence, "empty token sequence");
  double sum = 0.0;
  for (double v : token_logprobs) {
    require_finite(v, "token log-prob");
    if (v > 0) throw Error(ErrorCode::InvalidArgument, "token log-prob must be <= 0");
    sum -= v;
  }
  return reduction == SftReduction::Sum ? sum : sum / static_cast<double>(token_logprobs.size());
}

DpoInputs dpo_inputs_from_tokens(std::span<const double> theta_w, std::span<const double> ref_w,
                                 std::span<const double> theta_l, std::span<const double> ref_l,
                                 double beta, bool length_normalize) {
  return DpoInputs{sequence_logprob(theta_w, length_normalize),
                   sequence_logprob(ref_w, length_normalize),
                   sequence_logprob(theta_l, length_normalize),
                   sequence_logprob(ref_l, length_normalize), beta};
}

double dpo_margin(const DpoInputs& in) {
  return in.beta * ((in.logp_theta_w - in.logp_ref_w) - (in.logp_theta_l - in.logp_ref_l));
}

double sigmoid(double x) noexcept {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double neg_log_sigmoid(double m) noexcept {
  if (m < -kBranch) return -m + std::log1p(std::exp(m));
  return std::log1p(std::exp(-m));
}

double dpo_loss(const DpoInputs& in) {
  validate(in);
  const double m = dpo_margin(in);
  require_finite(m, "margin");
  return neg_log_sigmoid(m);
}

std::array<double, 4> dpo_gradient(const DpoInputs& in) {
  validate(in);
  const double g = in.beta * sigmoid(-dpo_margin(in));
  return {-g, g, g, -g};
}

double dpo_gradient_check(const DpoInputs& in, double h) {
  if (!(h > 0 && h <= 1e-3)) throw Error(ErrorCode::InvalidArgument, "h must be in (0, 1e-3]");
  const auto analytic = dpo_gradient(in);
  double worst = 0.0;
  for (std::size_t k = 0; k < 4; ++k) {
    DpoInputs plus = in, minus = in;
    double* p[] = {&plus.logp_theta_w, &plus.logp_ref_w, &plus.logp_theta_l, &plus.logp_ref_l};
    double* q[] = {&minus.logp_theta_w, &minus.logp_ref_w, &minus.logp_theta_l, &minus.logp_ref_l};
    *p[k] += h;
    *q[k] -= h;
    // Divide by the step actually taken, which differs from 2h by rounding.
    const double fd = (dpo_loss(plus) - dpo_loss(minus)) / (*p[k] - *q[k]);
    const double scale = std::max(std::abs(analytic[k]), std::abs(fd));
    if (scale < 1e-12) continue;
    worst = std::max(worst, std::abs(analytic[k] - fd) / scale);
  }
  return worst;
}

}  // namespace senseforge
