#include "twotier/gaussian.hpp"

#include "twotier/errors.hpp"
#include "twotier/summation.hpp"

#include <cmath>
#include <numbers>

namespace twotier {

namespace {

constexpr double kQuotaMatchTol = 1e-12;

void require_pair(const WeightVector& w, std::size_t j) {
    if (w.size() < 2) throw DomainError("Gaussian approximation needs at least two states (sigma_j = 0)");
    if (j >= w.size()) throw DomainError("state index out of range");
}

// sum_{k != j} w_k^p
double power_sum_excluding(const WeightVector& w, std::size_t j, int p) {
    CompensatedSum acc;
    for (std::size_t k = 0; k < w.size(); ++k)
        if (k != j) acc.add(std::pow(w[k], p));
    return acc.value();
}

enum class BracketForm { plain, exponential };

BracketForm bracket_form(const Union& u, const QuotaSpec& q) {
    if (q.q == 0.0) return BracketForm::plain;
    const double star = jagcom_quota(u).q;
    if (std::abs(q.q - star) <= kQuotaMatchTol * star) return BracketForm::exponential;
    throw DomainError("total influence envelope is defined only for q = 0 and q = q*");
}

} // namespace

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double state_sigma(const WeightVector& w, std::size_t j) {
    require_pair(w, j);
    return std::sqrt(power_sum_excluding(w, j, 2));
}

double gaussian_beta(const WeightVector& w, const QuotaSpec& q, std::size_t j) {
    const double sigma = state_sigma(w, j);
    const double t = q.q * w.total();
    return normal_cdf((t + w[j]) / sigma) - normal_cdf((t - w[j]) / sigma);
}

double jagcom_beta_approx(const WeightVector& w, const QuotaSpec& q, std::size_t j) {
    const double sigma = state_sigma(w, j);
    const double t = q.q * w.total();
    const double density = std::exp(-(t * t) / (2.0 * sigma * sigma)) / (sigma * std::sqrt(2.0 * std::numbers::pi));
    return 2.0 * w[j] * density;
}

double berry_esseen_bound(const WeightVector& w, std::size_t j) {
    require_pair(w, j);
    const double second = power_sum_excluding(w, j, 2);
    const double third = power_sum_excluding(w, j, 3);
    return 2.0 * kBerryEsseenConstant * third / std::pow(second, 1.5);
}

ApproxCertificate certificate(const WeightVector& w, const QuotaSpec& q, std::size_t j) {
    ApproxCertificate c;
    c.j = j;
    c.sigma_j = state_sigma(w, j);
    c.gauss_integral = gaussian_beta(w, q, j);
    c.jagcom_density_approx = jagcom_beta_approx(w, q, j);
    c.be_bound = berry_esseen_bound(w, j);
    c.interval_lo = c.gauss_integral - c.be_bound;
    c.interval_hi = c.gauss_integral + c.be_bound;
    return c;
}

QuotaSpec inflection_quota(const WeightVector& w) {
    const double total = w.total();
    if (!(total > 0.0)) throw DomainError("aggregate weight must be positive");
    return QuotaSpec::star(w.root_sum_squares() / total);
}

InfluenceBracket total_influence_bounds(const Union& u, const QuotaSpec& q) {
    if (u.size() < 2) throw DomainError("total influence envelope needs at least two states");
    const auto form = bracket_form(u, q);
    const auto w = sqrt_weights(u);
    const double delta_big = w.root_sum_squares(); // sqrt(N) on the weight scale
    const double ratio = static_cast<double>(u.max_population()) / static_cast<double>(u.total_population());
    InfluenceBracket b;
    b.lower = 2.0 / delta_big;
    b.upper = 2.0 / (delta_big * std::sqrt(1.0 - ratio));
    if (form == BracketForm::exponential) {
        b.lower *= std::exp(-1.0 / (2.0 * (1.0 - ratio)));
        b.upper *= std::exp(-0.5);
    }
    return b;
}

double total_influence_estimate(const Union& u, const QuotaSpec& q, std::size_t j) {
    bracket_form(u, q);
    if (j >= u.size()) throw DomainError("state index out of range");
    if (u.size() < 2) throw DomainError("Gaussian approximation needs at least two states");
    const auto w = sqrt_weights(u);
    const double delta2 = w.root_sum_squares() * w.root_sum_squares();
    const double rest = delta2 - w[j] * w[j];
    const double t = q.q * w.total();
    return (1.0 / w[j]) * 2.0 * w[j] / std::sqrt(rest) * std::exp(-(t * t) / (2.0 * rest));
}

} // namespace twotier
