#pragma once

#include "twotier/union.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace twotier {

/// Exhaustive coalition enumeration visits 2^(s-1) sign vectors per state.
inline constexpr std::size_t kMaxExactStates = 30;

struct ExactOptions {
    unsigned threads = 0; // 0: one per hardware thread
};

/// Number of sign vectors of the other states for which state j is pivotal,
/// i.e. qW - w_j < Z_j <= qW + w_j with Z_j = sum_{k != j} w_k chi_k.
/// The denominator is 2^(s-1).
std::uint64_t pivotal_count(const WeightVector& w, const QuotaSpec& q, std::size_t j);

/// beta_j: probability that state j is pivotal in the council under fair,
/// independent state votes.
double state_influence_exact(const WeightVector& w, const QuotaSpec& q, std::size_t j);

/// beta_j for every state, in parallel over j.
std::vector<double> state_influences_exact(const WeightVector& w, const QuotaSpec& q, ExactOptions opts = {});

struct CouncilAnalysis {
    QuotaSpec quota;
    std::vector<double> beta;
    std::vector<double> beta_normalised;   // 100 beta_j / B
    std::vector<double> weight_normalised; // 100 w_j / W
    std::vector<double> ratios;            // beta_normalised / weight_normalised
    double beta_total = 0.0;               // B
    double objective = 0.0;                // sum_j (weight_normalised - beta_normalised)^2
    std::vector<double> total_influence;   // alpha_j beta_j; empty when no alpha given
};

/// Full council analysis. `alpha` holds per-voter influences within each state
/// (one per state) or is empty, in which case total influences are omitted.
CouncilAnalysis analyze(const WeightVector& w, const QuotaSpec& q, std::span<const double> alpha,
                        ExactOptions opts = {});

struct SweepPoint {
    QuotaSpec quota;
    double objective = 0.0;
    double beta_total = 0.0;
};

struct SweepResult {
    std::vector<SweepPoint> points; // grid order
    std::size_t argmin = 0;         // smallest objective; ties go to the smaller |q|
};

SweepResult quota_sweep(const WeightVector& w, std::span<const QuotaSpec> grid, ExactOptions opts = {});

/// True iff sum_{yes} w_j - sum_{no} w_j > qW.
bool passes(const WeightVector& w, const QuotaSpec& q, std::span<const std::size_t> yes_set);

} // namespace twotier
