#pragma once

#include <cstdint>
#include <istream>
#include <span>
#include <string>
#include <vector>

namespace twotier {

struct StateRecord {
    std::string name;
    std::uint64_t population = 0; // persons
};

/// An ordered roster of member states. Validated on construction: at least one
/// state, unique names, every population >= 1.
class Union {
public:
    explicit Union(std::vector<StateRecord> states);

    std::span<const StateRecord> states() const noexcept { return states_; }
    std::size_t size() const noexcept { return states_.size(); }
    const StateRecord& operator[](std::size_t j) const { return states_.at(j); }

    /// Total population N.
    std::uint64_t total_population() const noexcept { return total_; }
    std::uint64_t max_population() const noexcept;

    /// Copy with every population multiplied by `factor`.
    Union scaled(std::uint64_t factor) const;

private:
    std::vector<StateRecord> states_;
    std::uint64_t total_ = 0;
};

/// Positive state weights aligned with a Union's roster.
class WeightVector {
public:
    explicit WeightVector(std::vector<double> weights);

    std::span<const double> values() const noexcept { return weights_; }
    std::size_t size() const noexcept { return weights_.size(); }
    double operator[](std::size_t j) const { return weights_.at(j); }

    /// Aggregate weight W, compensated sum.
    double total() const noexcept { return total_; }

    /// sqrt(sum of squares), compensated.
    double root_sum_squares() const noexcept;

    WeightVector scaled(double factor) const;

private:
    std::vector<double> weights_;
    double total_ = 0.0;
};

enum class QuotaKind { zero, jagcom_star, explicit_value };

/// Pass threshold as a fraction of the aggregate weight: a motion passes iff V > q W.
struct QuotaSpec {
    double q = 0.0;
    QuotaKind kind = QuotaKind::explicit_value;

    static QuotaSpec zero() { return {0.0, QuotaKind::zero}; }
    static QuotaSpec star(double value) { return {value, QuotaKind::jagcom_star}; }
    static QuotaSpec explicit_value(double value) { return {value, QuotaKind::explicit_value}; }
};

/// Throws DomainError unless |q| < 1.
void require_analysable(const QuotaSpec& quota);

const char* to_string(QuotaKind kind) noexcept;

/// Reads `name,population` CSV (header row required).
Union load_union(std::istream& source);
Union load_union_file(const std::string& path);

/// w_j = sqrt(N_j / 10^6): populations are taken in millions so weights land on
/// the familiar printed scale (Germany ~ 9.06).
WeightVector sqrt_weights(const Union& u);

/// 100 w_j / W.
WeightVector normalize(const WeightVector& w);

/// q* = sqrt(N) / sum_j sqrt(N_j).
QuotaSpec jagcom_quota(const Union& u);

} // namespace twotier
