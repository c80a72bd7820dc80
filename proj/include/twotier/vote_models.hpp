#pragma once

#include "twotier/union.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace twotier {

/// Distribution of the shared bias U in the collective bias model. Must be
/// symmetric under u -> 1-u; this is checked on construction.
class MixingLaw {
public:
    struct Atom {
        double value;
        double probability;
    };

    static MixingLaw point_mass(double u0);
    static MixingLaw uniform();
    static MixingLaw two_atoms(double a, double b);
    static MixingLaw discrete(std::vector<Atom> atoms);

    bool is_uniform() const noexcept { return uniform_; }
    /// Empty for the uniform law.
    std::span<const Atom> atoms() const noexcept { return atoms_; }

    std::string describe() const;

private:
    MixingLaw() = default;

    bool uniform_ = false;
    std::vector<Atom> atoms_;
};

/// Votes i.i.d. uniform on {-1,+1}.
struct IndependentFair {};

/// Conditionally i.i.d. given the bias U: X(i) = +1 with probability u.
struct CollectiveBias {
    MixingLaw mixing;
};

/// X(i) is the majority of Z_{i-1}, Z_i, Z_{i+1} for fair coins Z on a cycle.
/// Rotation invariant, not exchangeable.
struct CircularMajority {};

using VoteModel = std::variant<IndependentFair, CollectiveBias, CircularMajority>;

std::string describe(const VoteModel& model);

/// How the closed-form operations evaluate a model: "closed-form",
/// "closed-form+quadrature" or "enumeration".
std::string route(const VoteModel& model);

/// Largest electorate handled by exhaustive enumeration of the circular model.
inline constexpr unsigned kMaxCircularVoters = 24;
/// Largest electorate handled by brute_force_report.
inline constexpr unsigned kMaxBruteForceVoters = 25;

struct InfluenceReport {
    unsigned m = 0;
    double alpha = 0.0;           // absolute influence
    double kappa = 0.0;           // conditional influence
    double eta = 0.0;             // success probability
    double mean_abs_margin = 0.0; // E|S|
    double mean_edge = 0.0;       // E|N_F - N_A|
};

// All influence operations use the strict-majority event {S > 0} and so require odd m.

double absolute_influence(const VoteModel& model, unsigned m);
double conditional_influence(const VoteModel& model, unsigned m);
/// eta = (1 + kappa) / 2.
double success_probability(const VoteModel& model, unsigned m);
/// E|S| from the exact distribution of S.
double mean_abs_margin(const VoteModel& model, unsigned m);
/// Penrose/Kirsch least-squares weight: E|S|.
double least_squares_weight(const VoteModel& model, unsigned m);

/// P(H = k), k = 0..m, where H is the number of +1 votes (so S = 2H - m).
std::vector<double> margin_distribution(const VoteModel& model, unsigned m);

/// Q = sum_j Var(S_j - w_j chi_j) for independent states.
double least_squares_objective(std::span<const VoteModel> models, std::span<const unsigned> sizes,
                               const WeightVector& w);

InfluenceReport influence_report(const VoteModel& model, unsigned m);

/// Every field computed by summing over all 2^m vote configurations of the
/// explicit joint law. Independent of the closed forms above.
InfluenceReport brute_force_report(const VoteModel& model, unsigned m);

/// Cov(X(i), X(j)) in the circular model, indices taken mod m.
double circular_pair_correlation(unsigned m, unsigned i, unsigned j);

/// Joint law of the circular vote vector: entry x counts the coin vectors whose
/// image has bit i set iff X(i) = +1. Counts sum to 2^m.
std::vector<std::uint32_t> circular_joint_law(unsigned m);

/// C(2r, r) / 4^r.
double central_binomial_probability(std::uint64_t r);

/// Binomial(n, p) probabilities, k = 0..n.
std::vector<double> binomial_pmf(unsigned n, double p);

/// Asymptotic per-voter influence under independent fair voting, sqrt(2 / (pi N)).
double penrose_alpha(double population);

} // namespace twotier
