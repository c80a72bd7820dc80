#include "twotier/union.hpp"

#include "twotier/errors.hpp"
#include "twotier/summation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <unordered_set>

namespace twotier {

namespace {

std::string_view trim(std::string_view s) {
    constexpr std::string_view ws = " \t\r\n\f\v";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

bool is_blank(std::string_view s) { return trim(s).empty(); }

} // namespace

Union::Union(std::vector<StateRecord> states) : states_(std::move(states)) {
    if (states_.empty()) throw ValidationError("union must contain at least one state");
    std::unordered_set<std::string> seen;
    for (const auto& st : states_) {
        if (st.name.empty()) throw ValidationError("state name must not be empty");
        if (st.population == 0) throw ValidationError("population of '" + st.name + "' must be >= 1");
        if (!seen.insert(st.name).second) throw ValidationError("duplicate state name '" + st.name + "'");
        if (total_ > std::numeric_limits<std::uint64_t>::max() - st.population)
            throw ValidationError("total population overflows");
        total_ += st.population;
    }
}

std::uint64_t Union::max_population() const noexcept {
    std::uint64_t m = 0;
    for (const auto& st : states_) m = std::max(m, st.population);
    return m;
}

Union Union::scaled(std::uint64_t factor) const {
    if (factor == 0) throw DomainError("scale factor must be positive");
    std::vector<StateRecord> out(states_.begin(), states_.end());
    for (auto& st : out) st.population *= factor;
    return Union(std::move(out));
}

WeightVector::WeightVector(std::vector<double> weights) : weights_(std::move(weights)) {
    if (weights_.empty()) throw ValidationError("weight vector must not be empty");
    for (double w : weights_)
        if (!(w > 0.0) || !std::isfinite(w)) throw DomainError("weights must be finite and positive");
    total_ = compensated_sum(weights_);
}

double WeightVector::root_sum_squares() const noexcept {
    CompensatedSum acc;
    for (double w : weights_) acc.add(w * w);
    return std::sqrt(acc.value());
}

WeightVector WeightVector::scaled(double factor) const {
    std::vector<double> out(weights_);
    for (double& w : out) w *= factor;
    return WeightVector(std::move(out));
}

void require_analysable(const QuotaSpec& quota) {
    if (!std::isfinite(quota.q) || std::abs(quota.q) >= 1.0)
        throw DomainError("quota must satisfy |q| < 1");
}

const char* to_string(QuotaKind kind) noexcept {
    switch (kind) {
    case QuotaKind::zero: return "zero";
    case QuotaKind::jagcom_star: return "jagcom-star";
    case QuotaKind::explicit_value: return "explicit";
    }
    return "explicit";
}

Union load_union(std::istream& source) {
    std::string line;
    std::size_t lineno = 0;
    bool header_seen = false;
    std::vector<StateRecord> rows;

    while (std::getline(source, line)) {
        ++lineno;
        if (is_blank(line)) continue;
        const std::string_view text = trim(line);
        const auto comma = text.find(',');
        if (comma == std::string_view::npos || text.find(',', comma + 1) != std::string_view::npos)
            throw ParseError(lineno, "expected exactly two comma-separated fields");
        const auto name = trim(text.substr(0, comma));
        const auto pop = trim(text.substr(comma + 1));

        if (!header_seen) {
            if (name != "name" || pop != "population")
                throw ParseError(lineno, "expected header 'name,population'");
            header_seen = true;
            continue;
        }
        if (name.empty()) throw ParseError(lineno, "empty state name");

        std::uint64_t value = 0;
        const auto* first = pop.data();
        const auto* last = pop.data() + pop.size();
        const auto [ptr, ec] = std::from_chars(first, last, value);
        if (pop.empty() || ec != std::errc{} || ptr != last)
            throw ParseError(lineno, "population '" + std::string(pop) + "' is not a base-10 integer");
        if (value == 0) throw ParseError(lineno, "population must be positive");

        rows.push_back({std::string(name), value});
    }
    if (!header_seen) throw ValidationError("empty input: no header row");
    if (rows.empty()) throw ValidationError("no states listed");
    return Union(std::move(rows));
}

Union load_union_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open '" + path + "'");
    return load_union(in);
}

WeightVector sqrt_weights(const Union& u) {
    std::vector<double> w;
    w.reserve(u.size());
    for (const auto& st : u.states()) w.push_back(std::sqrt(static_cast<double>(st.population) / 1e6));
    return WeightVector(std::move(w));
}

WeightVector normalize(const WeightVector& w) {
    const double total = w.total();
    if (!(total > 0.0)) throw DomainError("cannot normalise a zero aggregate weight");
    std::vector<double> out;
    out.reserve(w.size());
    for (double x : w.values()) out.push_back(100.0 * x / total);
    return WeightVector(std::move(out));
}

QuotaSpec jagcom_quota(const Union& u) {
    CompensatedSum roots;
    for (const auto& st : u.states()) roots.add(std::sqrt(static_cast<double>(st.population)));
    const double numer = std::sqrt(static_cast<double>(u.total_population()));
    return QuotaSpec::star(numer / roots.value());
}

} // namespace twotier
