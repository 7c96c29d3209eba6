// Copyright 2026 The senseforge Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <span>

// Reference values of the supervised and preference objectives, computed
// from log-probabilities produced elsewhere.
namespace senseforge {

enum class SftReduction { Sum, MeanPerToken };

/// Negative log-likelihood of one target sequence: -sum(token_logprobs), or
/// that sum divided by the length. Throws EmptySequence, NonFiniteInput, or
/// InvalidArgument for a positive log-prob.
double sft_loss(std::span<const double> token_logprobs, SftReduction reduction = SftReduction::Sum);

struct DpoInputs {
  double logp_theta_w = 0;
  double logp_ref_w = 0;
  double logp_theta_l = 0;
  double logp_ref_l = 0;
  double beta = 0.1;
};

/// Sums (or, with length_normalize, averages) per-token log-probs into
/// sequence-level inputs.
DpoInputs dpo_inputs_from_tokens(std::span<const double> theta_w, std::span<const double> ref_w,
                                 std::span<const double> theta_l, std::span<const double> ref_l,
                                 double beta, bool length_normalize = false);

/// beta * ((theta_w - ref_w) - (theta_l - ref_l)).
double dpo_margin(const DpoInputs& in);

/// -log(sigmoid(margin)), stable for any finite margin. Throws
/// NonFiniteInput, or InvalidArgument when beta <= 0.
double dpo_loss(const DpoInputs& in);

/// -log(sigmoid(m)).
double neg_log_sigmoid(double m) noexcept;
double sigmoid(double x) noexcept;

/// Analytic partials of dpo_loss in the order theta_w, ref_w, theta_l, ref_l.
std::array<double, 4> dpo_gradient(const DpoInputs& in);

/// Largest relative error between dpo_gradient and central differences with
/// step h, over the four partials. Relative error is |a - fd| / max(|a|,
/// |fd|), taken as 0 when both are below 1e-12. Throws InvalidArgument
/// unless 0 < h <= 1e-3.
double dpo_gradient_check(const DpoInputs& in, double h);

}  // namespace senseforge
