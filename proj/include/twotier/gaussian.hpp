#pragma once

#include "twotier/union.hpp"

#include <cstddef>

namespace twotier {

/// Berry-Esseen constant C (upper end of the known range [0.4906, 0.5600]).
inline constexpr double kBerryEsseenConstant = 0.56;

struct ApproxCertificate {
    std::size_t j = 0;
    double gauss_integral = 0.0;        // Phi((qW+w_j)/sigma_j) - Phi((qW-w_j)/sigma_j)
    double jagcom_density_approx = 0.0; // 2 w_j phi_{sigma_j}(qW)
    double be_bound = 0.0;              // |beta_j - gauss_integral| <= be_bound
    double interval_lo = 0.0;           // gauss_integral - be_bound, not clipped
    double interval_hi = 0.0;           // gauss_integral + be_bound, not clipped
    double sigma_j = 0.0;               // sqrt(sum_{k != j} w_k^2)
};

/// Standard normal distribution function.
double normal_cdf(double z);

/// Standard deviation of Z_j = sum_{k != j} w_k chi_k.
double state_sigma(const WeightVector& w, std::size_t j);

double gaussian_beta(const WeightVector& w, const QuotaSpec& q, std::size_t j);
double jagcom_beta_approx(const WeightVector& w, const QuotaSpec& q, std::size_t j);

/// 2C sum_{k != j} w_k^3 / (sum_{k != j} w_k^2)^{3/2}.
double berry_esseen_bound(const WeightVector& w, std::size_t j);

ApproxCertificate certificate(const WeightVector& w, const QuotaSpec& q, std::size_t j);

/// q such that qW = sqrt(sum_k w_k^2), the inflection point of the N(0, sum w^2) density.
QuotaSpec inflection_quota(const WeightVector& w);

struct InfluenceBracket {
    double lower = 0.0;
    double upper = 0.0;
};

/// Heuristic j-independent envelope for the total influences I_j under square-root
/// weights, divided by the shared asymptotic constant. Only q = 0 and q = q* are
/// meaningful; other quotas raise DomainError. Not a rigorous bound.
InfluenceBracket total_influence_bounds(const Union& u, const QuotaSpec& q);

/// The per-state Gaussian estimate of I_j / C that the bracket envelopes:
/// (1/sqrt(N_j)) * 2 w_j / sqrt(Delta^2 - w_j^2) * exp(-(qW)^2 / (2 (Delta^2 - w_j^2))).
double total_influence_estimate(const Union& u, const QuotaSpec& q, std::size_t j);

} // namespace twotier
