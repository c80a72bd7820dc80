#include "twotier/vote_models.hpp"

#include "quadrature.hpp"
#include "twotier/errors.hpp"
#include "twotier/summation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <sstream>

namespace twotier {

namespace {

constexpr double kSymmetryTol = 1e-12;
constexpr double kQuadratureTol = 1e-13;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_odd(const VoteModel& model, unsigned m) {
    if (m == 0 || m % 2 == 0)
        throw DomainError("electorate size m must be odd (got " + std::to_string(m) + ")");
    if (std::holds_alternative<CircularMajority>(model)) {
        if (m < 5) throw DomainError("circular majority needs at least 4 voters (odd m >= 5)");
        if (m > kMaxCircularVoters)
            throw SizeError("circular majority is enumerated exactly; m must be <= " +
                            std::to_string(kMaxCircularVoters));
    }
}

// P(Bin(n, p) >= k)
double upper_tail(const std::vector<double>& pmf, unsigned k) {
    CompensatedSum acc;
    for (std::size_t i = k; i < pmf.size(); ++i) acc.add(pmf[i]);
    return acc.value();
}

std::uint32_t ring_mask(unsigned m) { return m >= 32 ? ~0u : ((1u << m) - 1u); }

std::uint32_t circular_image(std::uint32_t z, unsigned m, std::uint32_t mask) {
    const std::uint32_t prev = ((z << 1) | (z >> (m - 1))) & mask; // bit i holds Z_{i-1}
    const std::uint32_t next = ((z >> 1) | (z << (m - 1))) & mask; // bit i holds Z_{i+1}
    return (prev & z) | (prev & next) | (z & next);
}

struct CircularStats {
    double alpha = 0.0;
    double kappa = 0.0;
    std::vector<double> h_dist;
};

CircularStats circular_stats(unsigned m) {
    const std::uint32_t mask = ring_mask(m);
    const std::uint64_t total = std::uint64_t{1} << m;
    const unsigned r = (m - 1) / 2;
    std::vector<std::uint64_t> hist(m + 1, 0);
    std::uint64_t pivotal = 0, yes = 0, yes_pass = 0, no_pass = 0;
    for (std::uint64_t z = 0; z < total; ++z) {
        const std::uint32_t x = circular_image(static_cast<std::uint32_t>(z), m, mask);
        const unsigned h = static_cast<unsigned>(std::popcount(x));
        ++hist[h];
        const bool first_yes = (x & 1u) != 0;
        const unsigned others = h - (first_yes ? 1 : 0);
        if (others == r) ++pivotal;
        const bool pass = h > r;
        if (first_yes) {
            ++yes;
            if (pass) ++yes_pass;
        } else if (pass) {
            ++no_pass;
        }
    }
    CircularStats out;
    const double t = static_cast<double>(total);
    out.alpha = static_cast<double>(pivotal) / t;
    const double no = static_cast<double>(total - yes);
    out.kappa = static_cast<double>(yes_pass) / static_cast<double>(yes) - static_cast<double>(no_pass) / no;
    out.h_dist.reserve(m + 1);
    for (auto c : hist) out.h_dist.push_back(static_cast<double>(c) / t);
    return out;
}

// E[g(U)] over a mixing law given by atoms, or by quadrature for the uniform law.
template <class F>
double expect_over(const MixingLaw& law, F&& g) {
    if (law.is_uniform()) return detail::integrate(g, 0.0, 1.0, kQuadratureTol);
    CompensatedSum acc;
    for (const auto& a : law.atoms()) acc.add(a.probability * g(a.value));
    return acc.value();
}

double abs_margin_from(const std::vector<double>& h_dist) {
    const double m = static_cast<double>(h_dist.size() - 1);
    CompensatedSum acc;
    for (std::size_t k = 0; k < h_dist.size(); ++k) acc.add(h_dist[k] * std::abs(2.0 * k - m));
    return acc.value();
}

double second_moment_from(const std::vector<double>& h_dist) {
    const double m = static_cast<double>(h_dist.size() - 1);
    CompensatedSum acc;
    for (std::size_t k = 0; k < h_dist.size(); ++k) {
        const double s = 2.0 * k - m;
        acc.add(h_dist[k] * s * s);
    }
    return acc.value();
}

} // namespace

// ---------------------------------------------------------------------------
// MixingLaw

MixingLaw MixingLaw::point_mass(double u0) { return discrete({{u0, 1.0}}); }

MixingLaw MixingLaw::uniform() {
    MixingLaw law;
    law.uniform_ = true;
    return law;
}

MixingLaw MixingLaw::two_atoms(double a, double b) { return discrete({{a, 0.5}, {b, 0.5}}); }

MixingLaw MixingLaw::discrete(std::vector<Atom> atoms) {
    if (atoms.empty()) throw DomainError("mixing law needs at least one atom");
    CompensatedSum total;
    for (const auto& a : atoms) {
        if (!(a.value > 0.0 && a.value < 1.0)) throw DomainError("mixing atoms must lie in (0,1)");
        if (!(a.probability > 0.0)) throw DomainError("mixing atom probabilities must be positive");
        total.add(a.probability);
    }
    if (std::abs(total.value() - 1.0) > kSymmetryTol) throw DomainError("mixing probabilities must sum to 1");

    // Symmetry: the mass at v must equal the mass at 1 - v.
    for (const auto& a : atoms) {
        CompensatedSum here, mirror;
        for (const auto& b : atoms) {
            if (std::abs(b.value - a.value) <= kSymmetryTol) here.add(b.probability);
            if (std::abs(b.value - (1.0 - a.value)) <= kSymmetryTol) mirror.add(b.probability);
        }
        if (std::abs(here.value() - mirror.value()) > kSymmetryTol)
            throw DomainError("mixing law must be symmetric under u -> 1-u");
    }
    MixingLaw law;
    law.atoms_ = std::move(atoms);
    return law;
}

std::string MixingLaw::describe() const {
    if (uniform_) return "Uniform(0,1)";
    std::ostringstream os;
    os.precision(6);
    os << "Atoms{";
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        if (i) os << ", ";
        os << atoms_[i].value << ":" << atoms_[i].probability;
    }
    os << "}";
    return os.str();
}

std::string describe(const VoteModel& model) {
    return std::visit(overloaded{
                          [](const IndependentFair&) { return std::string("independent-fair"); },
                          [](const CollectiveBias& cb) { return "collective-bias " + cb.mixing.describe(); },
                          [](const CircularMajority&) { return std::string("circular-majority"); },
                      },
                      model);
}

std::string route(const VoteModel& model) {
    return std::visit(overloaded{
                          [](const IndependentFair&) { return std::string("closed-form"); },
                          [](const CollectiveBias& cb) {
                              return std::string(cb.mixing.is_uniform() ? "closed-form+quadrature" : "closed-form");
                          },
                          [](const CircularMajority&) { return std::string("enumeration"); },
                      },
                      model);
}

// ---------------------------------------------------------------------------
// Binomial helpers

double central_binomial_probability(std::uint64_t r) {
    if (r < 64) {
        double p = 1.0;
        for (std::uint64_t k = 1; k <= r; ++k) p *= static_cast<double>(2 * k - 1) / static_cast<double>(2 * k);
        return p;
    }
    // log C(2r,r) - 2r log 2 from the Stirling series of lgamma(2r+1) - 2 lgamma(r+1);
    // evaluating the two lgamma terms separately would cancel away ~log10(r) digits.
    const double x = static_cast<double>(r);
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    const double series = inv * (-1.0 / 8.0 + inv2 * (1.0 / 192.0 + inv2 * (-1.0 / 640.0 + inv2 * (17.0 / 14336.0))));
    return std::exp(-0.5 * std::log(std::numbers::pi * x) + series);
}

std::vector<double> binomial_pmf(unsigned n, double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("binomial probability must lie in [0,1]");
    std::vector<double> pmf(n + 1, 0.0);
    if (p == 0.0) {
        pmf[0] = 1.0;
        return pmf;
    }
    if (p == 1.0) {
        pmf[n] = 1.0;
        return pmf;
    }
    // Walk outwards from the mode with the ratio recurrence, then normalise.
    const unsigned mode = std::min<unsigned>(n, static_cast<unsigned>(std::floor((n + 1.0) * p)));
    const double odds = p / (1.0 - p);
    pmf[mode] = 1.0;
    for (unsigned k = mode; k < n; ++k) pmf[k + 1] = pmf[k] * (static_cast<double>(n - k) / (k + 1.0)) * odds;
    for (unsigned k = mode; k > 0; --k) pmf[k - 1] = pmf[k] * (static_cast<double>(k) / (n - k + 1.0)) / odds;
    const double total = compensated_sum(pmf);
    for (double& v : pmf) v /= total;
    return pmf;
}

double penrose_alpha(double population) {
    if (!(population > 0.0)) throw DomainError("population must be positive");
    return std::sqrt(2.0 / (std::numbers::pi * population));
}

// ---------------------------------------------------------------------------
// Influences

double absolute_influence(const VoteModel& model, unsigned m) {
    require_odd(model, m);
    const std::uint64_t r = (m - 1) / 2;
    return std::visit(overloaded{
                          [&](const IndependentFair&) { return central_binomial_probability(r); },
                          [&](const CollectiveBias& cb) {
                              if (cb.mixing.is_uniform()) return 1.0 / m; // Beta integral
                              const double central = central_binomial_probability(r);
                              CompensatedSum acc;
                              for (const auto& a : cb.mixing.atoms()) {
                                  const double v = 4.0 * a.value * (1.0 - a.value);
                                  acc.add(a.probability * central * std::pow(v, static_cast<double>(r)));
                              }
                              return acc.value();
                          },
                          [&](const CircularMajority&) { return circular_stats(m).alpha; },
                      },
                      model);
}

double conditional_influence(const VoteModel& model, unsigned m) {
    require_odd(model, m);
    const unsigned r = (m - 1) / 2;
    return std::visit(overloaded{
                          [&](const IndependentFair&) { return absolute_influence(model, m); },
                          [&](const CollectiveBias& cb) {
                              // P(A | X(i) = +1) - P(A | X(i) = -1), each marginal being 1/2.
                              // The other 2r voters must reach S' >= 0, resp. S' >= 2.
                              const auto integrand = [r](double u) {
                                  const auto pmf = binomial_pmf(2 * r, u);
                                  return 2.0 * (u * upper_tail(pmf, r) - (1.0 - u) * upper_tail(pmf, r + 1));
                              };
                              return expect_over(cb.mixing, integrand);
                          },
                          [&](const CircularMajority&) { return circular_stats(m).kappa; },
                      },
                      model);
}

double success_probability(const VoteModel& model, unsigned m) {
    return 0.5 * (1.0 + conditional_influence(model, m));
}

std::vector<double> margin_distribution(const VoteModel& model, unsigned m) {
    require_odd(model, m);
    return std::visit(overloaded{
                          [&](const IndependentFair&) { return binomial_pmf(m, 0.5); },
                          [&](const CollectiveBias& cb) {
                              // Uniform U: integral of the binomial pmf is 1/(m+1) for every k.
                              if (cb.mixing.is_uniform()) return std::vector<double>(m + 1, 1.0 / (m + 1.0));
                              std::vector<CompensatedSum> acc(m + 1);
                              for (const auto& a : cb.mixing.atoms()) {
                                  const auto pmf = binomial_pmf(m, a.value);
                                  for (unsigned k = 0; k <= m; ++k) acc[k].add(a.probability * pmf[k]);
                              }
                              std::vector<double> out(m + 1);
                              for (unsigned k = 0; k <= m; ++k) out[k] = acc[k].value();
                              return out;
                          },
                          [&](const CircularMajority&) { return circular_stats(m).h_dist; },
                      },
                      model);
}

double mean_abs_margin(const VoteModel& model, unsigned m) {
    return abs_margin_from(margin_distribution(model, m));
}

double least_squares_weight(const VoteModel& model, unsigned m) { return mean_abs_margin(model, m); }

double least_squares_objective(std::span<const VoteModel> models, std::span<const unsigned> sizes,
                               const WeightVector& w) {
    if (models.size() != sizes.size() || models.size() != w.size())
        throw DomainError("models, sizes and weights must have equal length");
    CompensatedSum q;
    for (std::size_t j = 0; j < models.size(); ++j) {
        const auto dist = margin_distribution(models[j], sizes[j]);
        const double wj = w[j];
        // E(S chi) = E|S| since chi = sign(S) and S is never 0 for odd m.
        q.add(second_moment_from(dist));
        q.add(-2.0 * wj * abs_margin_from(dist));
        q.add(wj * wj);
    }
    return q.value();
}

InfluenceReport influence_report(const VoteModel& model, unsigned m) {
    InfluenceReport rep;
    rep.m = m;
    rep.alpha = absolute_influence(model, m);
    rep.kappa = conditional_influence(model, m);
    rep.eta = 0.5 * (1.0 + rep.kappa);
    const auto dist = margin_distribution(model, m);
    rep.mean_abs_margin = abs_margin_from(dist);
    // Edge |N_F - N_A| with H = N_F or N_A: |H - (m - H)|.
    CompensatedSum edge;
    for (unsigned h = 0; h <= m; ++h)
        edge.add(dist[h] * std::abs(static_cast<double>(h) - static_cast<double>(m - h)));
    rep.mean_edge = edge.value();
    return rep;
}

// ---------------------------------------------------------------------------
// Circular model

std::vector<std::uint32_t> circular_joint_law(unsigned m) {
    if (m < 4) throw DomainError("circular majority needs m >= 4");
    if (m > kMaxCircularVoters)
        throw SizeError("circular majority is enumerated exactly; m must be <= " + std::to_string(kMaxCircularVoters));
    const std::uint32_t mask = ring_mask(m);
    const std::uint64_t total = std::uint64_t{1} << m;
    std::vector<std::uint32_t> law(total, 0);
    for (std::uint64_t z = 0; z < total; ++z) ++law[circular_image(static_cast<std::uint32_t>(z), m, mask)];
    return law;
}

double circular_pair_correlation(unsigned m, unsigned i, unsigned j) {
    if (m < 4) throw DomainError("circular majority needs m >= 4");
    if (m > kMaxCircularVoters)
        throw SizeError("circular majority is enumerated exactly; m must be <= " + std::to_string(kMaxCircularVoters));
    i %= m;
    j %= m;
    const std::uint32_t mask = ring_mask(m);
    const std::uint64_t total = std::uint64_t{1} << m;
    std::int64_t agree = 0;
    for (std::uint64_t z = 0; z < total; ++z) {
        const std::uint32_t x = circular_image(static_cast<std::uint32_t>(z), m, mask);
        agree += (((x >> i) ^ (x >> j)) & 1u) ? -1 : 1;
    }
    // Both marginals are symmetric, so the covariance is E[X(i) X(j)].
    return static_cast<double>(agree) / static_cast<double>(total);
}

} // namespace twotier
