// Exhaustive oracle for the influence calculus. Deliberately naive: it builds
// the probability of every vote configuration from the model's definition and
// reads each report field straight off that joint law.

#include "twotier/errors.hpp"
#include "twotier/summation.hpp"
#include "twotier/vote_models.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <vector>

namespace twotier {

namespace {

// Probability of one particular configuration with h votes of +1 out of m.
std::vector<double> exchangeable_config_probability(const VoteModel& model, unsigned m) {
    std::vector<double> out(m + 1, 0.0);
    if (std::holds_alternative<IndependentFair>(model)) {
        for (unsigned h = 0; h <= m; ++h) out[h] = std::ldexp(1.0, -static_cast<int>(m));
        return out;
    }
    const auto& law = std::get<CollectiveBias>(model).mixing;
    for (unsigned h = 0; h <= m; ++h) {
        if (law.is_uniform()) {
            // Beta(h+1, m-h+1) = h! (m-h)! / (m+1)!
            out[h] = std::tgamma(h + 1.0) * std::tgamma(m - h + 1.0) / std::tgamma(m + 2.0);
        } else {
            double p = 0.0;
            for (const auto& a : law.atoms())
                p += a.probability * std::pow(a.value, h) * std::pow(1.0 - a.value, m - h);
            out[h] = p;
        }
    }
    return out;
}

std::vector<double> circular_config_probability(unsigned m) {
    std::vector<double> out(std::size_t{1} << m, 0.0);
    const double unit = std::ldexp(1.0, -static_cast<int>(m));
    for (std::uint64_t z = 0; z < (std::uint64_t{1} << m); ++z) {
        std::uint64_t x = 0;
        for (unsigned i = 0; i < m; ++i) {
            const auto coin = [&](unsigned k) { return static_cast<int>((z >> (k % m)) & 1u); };
            const int ups = coin(i + m - 1) + coin(i) + coin(i + 1);
            if (ups >= 2) x |= std::uint64_t{1} << i;
        }
        out[x] += unit;
    }
    return out;
}

} // namespace

InfluenceReport brute_force_report(const VoteModel& model, unsigned m) {
    if (m == 0 || m % 2 == 0) throw DomainError("electorate size m must be odd");
    const bool circular = std::holds_alternative<CircularMajority>(model);
    const unsigned cap = circular ? kMaxCircularVoters : kMaxBruteForceVoters;
    if (m > cap) throw SizeError("brute force enumeration limited to m <= " + std::to_string(cap));
    if (circular && m < 5) throw DomainError("circular majority needs odd m >= 5");

    std::vector<double> by_count, by_config;
    if (circular)
        by_config = circular_config_probability(m);
    else
        by_count = exchangeable_config_probability(model, m);

    const auto in_a = [m](std::uint64_t sigma) { return 2 * std::popcount(sigma) > static_cast<int>(m); };
    constexpr std::uint64_t voter = 1; // voter i = first voter

    CompensatedSum p_up_in_a, p_down_in_a, p_yes, p_no, p_yes_and_a, p_no_and_a, p_no_and_not_a, abs_s, edge;
    for (std::uint64_t sigma = 0; sigma < (std::uint64_t{1} << m); ++sigma) {
        const double p = circular ? by_config[sigma] : by_count[std::popcount(sigma)];
        if (p == 0.0) continue;
        const bool a = in_a(sigma);
        if (in_a(sigma | voter)) p_up_in_a.add(p);
        if (in_a(sigma & ~voter)) p_down_in_a.add(p);
        if (sigma & voter) {
            p_yes.add(p);
            if (a) p_yes_and_a.add(p);
        } else {
            p_no.add(p);
            if (a)
                p_no_and_a.add(p);
            else
                p_no_and_not_a.add(p);
        }
        const int h = std::popcount(sigma);
        const int s = 2 * h - static_cast<int>(m);
        abs_s.add(p * std::abs(s));
        const int n_for = a ? h : static_cast<int>(m) - h;
        const int n_against = static_cast<int>(m) - n_for;
        edge.add(p * (n_for - n_against));
    }

    InfluenceReport rep;
    rep.m = m;
    rep.alpha = p_up_in_a.value() - p_down_in_a.value();
    rep.kappa = p_yes_and_a.value() / p_yes.value() - p_no_and_a.value() / p_no.value();
    rep.eta = p_yes_and_a.value() + p_no_and_not_a.value();
    rep.mean_abs_margin = abs_s.value();
    rep.mean_edge = edge.value();
    return rep;
}

} // namespace twotier
