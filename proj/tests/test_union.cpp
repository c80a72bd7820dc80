#include "twotier/errors.hpp"
#include "twotier/union.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <sstream>

using namespace twotier;

namespace {

const std::string kDataset = std::string(TWOTIER_DATA_DIR) + "/eu27_qmv2017.csv";

Union from_text(const std::string& text) {
    std::istringstream in(text);
    return load_union(in);
}

} // namespace

TEST_CASE("load_union reads the bundled EU27 roster") {
    const Union u = load_union_file(kDataset);
    CHECK(u.size() == 27);
    CHECK(u[0].name == "Germany");
    CHECK(u[26].name == "Malta");
    CHECK(u[0].population > u[26].population);
}

TEST_CASE("load_union accepts a single state and trims whitespace") {
    const Union u = from_text("name,population\nX,1000001   \n");
    CHECK(u.size() == 1);
    CHECK(u.total_population() == 1000001);
    CHECK(u[0].name == "X");

    const Union v = from_text("name,population\r\n  Far Land , 42 \r\n\n");
    CHECK(v[0].name == "Far Land");
    CHECK(v[0].population == 42);
}

TEST_CASE("load_union rejects bad input") {
    CHECK_THROWS_AS(from_text("name,population\nA,10\nA,20\n"), ValidationError);
    CHECK_THROWS_AS(from_text(""), ValidationError);
    CHECK_THROWS_AS(from_text("name,population\n"), ValidationError);
    CHECK_THROWS_AS(from_text("state,pop\nA,1\n"), ParseError);
    CHECK_THROWS_AS(from_text("name,population\nA,1,000\n"), ParseError);
    CHECK_THROWS_AS(from_text("name,population\nA,0\n"), ParseError);
    CHECK_THROWS_AS(from_text("name,population\nA,-5\n"), ParseError);
    CHECK_THROWS_AS(from_text("name,population\nA,12.5\n"), ParseError);

    try {
        from_text("name,population\nA,1\nB,oops\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
}

TEST_CASE("sqrt_weights uses populations in millions") {
    const Union u = load_union_file(kDataset);
    const WeightVector w = sqrt_weights(u);
    CHECK(std::abs(w[0] - 9.059) <= 0.001);
    CHECK(std::abs(w.total() - 90.930) <= 0.005);

    const WeightVector unit = sqrt_weights(from_text("name,population\nA,1000000\n"));
    CHECK(unit[0] == 1.0);
}

TEST_CASE("sqrt_weights is monotone in population") {
    const WeightVector w = sqrt_weights(load_union_file(kDataset));
    for (std::size_t j = 1; j < w.size(); ++j) CHECK(w[j] < w[j - 1]);
}

TEST_CASE("normalize scales to 100") {
    const WeightVector w = sqrt_weights(load_union_file(kDataset));
    const WeightVector n = normalize(w);
    CHECK(std::abs(n[0] - 9.963) <= 0.002);
    CHECK(std::abs(n[26] - 0.725) <= 0.002);
    CHECK(std::abs(n.total() - 100.0) <= 1e-9);

    const WeightVector eq = normalize(WeightVector({2.0, 2.0, 2.0, 2.0}));
    for (double x : eq.values()) CHECK(x == 25.0);

    const WeightVector twice = normalize(n);
    for (std::size_t j = 0; j < n.size(); ++j) CHECK(std::abs(twice[j] - n[j]) <= 1e-12);
}

TEST_CASE("weight vectors must be positive") {
    CHECK_THROWS_AS(WeightVector({1.0, 0.0}), DomainError);
    CHECK_THROWS_AS(WeightVector({1.0, -2.0}), DomainError);
    CHECK_THROWS_AS(WeightVector(std::vector<double>{}), ValidationError);
}

TEST_CASE("jagcom_quota") {
    SUBCASE("equal states give 1/sqrt(s)") {
        const Union u = from_text("name,population\nA,7\nB,7\nC,7\nD,7\n");
        const QuotaSpec q = jagcom_quota(u);
        CHECK(q.q == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(q.kind == QuotaKind::jagcom_star);
    }
    SUBCASE("single state gives 1") {
        CHECK(jagcom_quota(from_text("name,population\nX,1000001\n")).q == doctest::Approx(1.0).epsilon(1e-15));
    }
    SUBCASE("EU27 value") {
        // sqrt(sum w^2) / sum w evaluated on the bundled weights.
        const Union u = load_union_file(kDataset);
        const QuotaSpec q = jagcom_quota(u);
        CHECK(q.q == doctest::Approx(0.23213557446869723).epsilon(1e-13));
        const WeightVector w = sqrt_weights(u);
        CHECK(std::abs(q.q - w.root_sum_squares() / w.total()) <= 1e-13);
    }
    SUBCASE("scale invariance") {
        const Union u = load_union_file(kDataset);
        const double base = jagcom_quota(u).q;
        for (std::uint64_t f : {2ull, 3ull, 17ull, 1000ull}) CHECK(std::abs(jagcom_quota(u.scaled(f)).q - base) < 1e-12);
    }
}

TEST_CASE("quota analysability") {
    CHECK_NOTHROW(require_analysable(QuotaSpec::explicit_value(0.99)));
    CHECK_THROWS_AS(require_analysable(QuotaSpec::explicit_value(1.0)), DomainError);
    CHECK_THROWS_AS(require_analysable(QuotaSpec::explicit_value(-1.5)), DomainError);
}
