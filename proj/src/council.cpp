#include "twotier/council.hpp"

#include "twotier/errors.hpp"
#include "twotier/summation.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <thread>

namespace twotier {

namespace {

constexpr std::uint64_t kRefreshPeriod = std::uint64_t{1} << 20;
constexpr double kObjectiveTieTol = 1e-12;

void require_exact_size(const WeightVector& w) {
    if (w.size() > kMaxExactStates)
        throw SizeError("exact enumeration supports at most " + std::to_string(kMaxExactStates) +
                        " states (got " + std::to_string(w.size()) + "); use the Gaussian approximation");
}

void require_index(const WeightVector& w, std::size_t j) {
    if (j >= w.size())
        throw DomainError("state index " + std::to_string(j) + " out of range (s = " + std::to_string(w.size()) + ")");
}

// Running sum for Gray-code position i: free bits follow g = i ^ (i >> 1),
// the last "other" is pinned to -1.
double gray_sum(std::span<const double> free, double pinned, std::uint64_t i) {
    const std::uint64_t g = i ^ (i >> 1);
    CompensatedSum acc;
    for (std::size_t k = 0; k < free.size(); ++k) acc.add(((g >> k) & 1u) ? free[k] : -free[k]);
    acc.add(-pinned);
    return acc.value();
}

// Counts sign vectors of `others` whose signed sum z satisfies lo < z <= hi.
// The last coordinate is pinned to -1 and each visited z also accounts for its
// mirror -z (the vector with every sign flipped), halving the walk.
std::uint64_t count_window(std::span<const double> others, double lo, double hi) {
    const auto inside = [lo, hi](double z) -> std::uint64_t { return (lo < z) & (z <= hi); };
    if (others.empty()) return inside(0.0);

    const auto free = others.first(others.size() - 1);
    const double pinned = others.back();
    std::vector<double> step(free.size());
    for (std::size_t k = 0; k < free.size(); ++k) step[k] = 2.0 * free[k];

    const std::uint64_t walk = std::uint64_t{1} << free.size();
    double z = gray_sum(free, pinned, 0);
    std::uint64_t hits = inside(z) + inside(-z);
    for (std::uint64_t i = 1; i < walk; ++i) {
        const unsigned k = static_cast<unsigned>(std::countr_zero(i));
        z += step[k];
        step[k] = -step[k];
        if ((i & (kRefreshPeriod - 1)) == 0) z = gray_sum(free, pinned, i);
        hits += inside(z) + inside(-z);
    }
    return hits;
}

unsigned resolve_threads(unsigned requested, std::size_t jobs) {
    unsigned n = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(jobs, 1)));
}

} // namespace

std::uint64_t pivotal_count(const WeightVector& w, const QuotaSpec& q, std::size_t j) {
    require_exact_size(w);
    require_index(w, j);
    require_analysable(q);
    std::vector<double> others;
    others.reserve(w.size() - 1);
    for (std::size_t k = 0; k < w.size(); ++k)
        if (k != j) others.push_back(w[k]);
    const double threshold = q.q * w.total();
    return count_window(others, threshold - w[j], threshold + w[j]);
}

double state_influence_exact(const WeightVector& w, const QuotaSpec& q, std::size_t j) {
    const auto hits = pivotal_count(w, q, j);
    return std::ldexp(static_cast<double>(hits), -static_cast<int>(w.size() - 1));
}

std::vector<double> state_influences_exact(const WeightVector& w, const QuotaSpec& q, ExactOptions opts) {
    require_exact_size(w);
    require_analysable(q);
    const std::size_t s = w.size();
    std::vector<double> beta(s, 0.0);
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t j = next++; j < s; j = next++) beta[j] = state_influence_exact(w, q, j);
    };
    const unsigned threads = resolve_threads(opts.threads, s);
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    return beta;
}

CouncilAnalysis analyze(const WeightVector& w, const QuotaSpec& q, std::span<const double> alpha, ExactOptions opts) {
    if (!alpha.empty() && alpha.size() != w.size())
        throw DomainError("alpha must have one entry per state");
    for (double a : alpha)
        if (!(a > 0.0)) throw DomainError("per-voter influences must be positive");

    CouncilAnalysis out;
    out.quota = q;
    out.beta = state_influences_exact(w, q, opts);
    out.beta_total = compensated_sum(out.beta);
    if (!(out.beta_total > 0.0))
        throw DomainError("no state is ever pivotal at this quota; normalised influences are undefined");

    const std::size_t s = w.size();
    const WeightVector wn = normalize(w);
    out.weight_normalised.assign(wn.values().begin(), wn.values().end());
    out.beta_normalised.resize(s);
    out.ratios.resize(s);
    CompensatedSum objective;
    for (std::size_t j = 0; j < s; ++j) {
        out.beta_normalised[j] = 100.0 * out.beta[j] / out.beta_total;
        out.ratios[j] = out.beta_normalised[j] / out.weight_normalised[j];
        const double d = out.weight_normalised[j] - out.beta_normalised[j];
        objective.add(d * d);
    }
    out.objective = objective.value();
    if (!alpha.empty()) {
        out.total_influence.resize(s);
        for (std::size_t j = 0; j < s; ++j) out.total_influence[j] = alpha[j] * out.beta[j];
    }
    return out;
}

SweepResult quota_sweep(const WeightVector& w, std::span<const QuotaSpec> grid, ExactOptions opts) {
    if (grid.empty()) throw DomainError("quota grid must not be empty");
    for (const auto& q : grid) require_analysable(q);
    require_exact_size(w);

    SweepResult result;
    result.points.reserve(grid.size());
    for (const auto& q : grid) {
        const auto a = analyze(w, q, {}, opts);
        result.points.push_back({q, a.objective, a.beta_total});
    }
    for (std::size_t i = 1; i < result.points.size(); ++i) {
        const auto& cand = result.points[i];
        const auto& best = result.points[result.argmin];
        if (cand.objective < best.objective - kObjectiveTieTol ||
            (std::abs(cand.objective - best.objective) <= kObjectiveTieTol &&
             std::abs(cand.quota.q) < std::abs(best.quota.q)))
            result.argmin = i;
    }
    return result;
}

bool passes(const WeightVector& w, const QuotaSpec& q, std::span<const std::size_t> yes_set) {
    std::vector<bool> yes(w.size(), false);
    for (std::size_t j : yes_set) {
        require_index(w, j);
        yes[j] = true;
    }
    CompensatedSum v;
    for (std::size_t j = 0; j < w.size(); ++j) v.add(yes[j] ? w[j] : -w[j]);
    return v.value() > q.q * w.total();
}

} // namespace twotier
