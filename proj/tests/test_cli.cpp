#include "../tools/cli.hpp"

#include <doctest.h>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using twotier::cli::run;

namespace {

const std::string kDataset = std::string(TWOTIER_DATA_DIR) + "/eu27_qmv2017.csv";

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result invoke(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "twotier_cli_tests";
    fs::create_directories(dir);
    return dir / name;
}

fs::path write_csv(const std::string& name, const std::string& body) {
    const auto p = scratch(name);
    std::ofstream(p) << body;
    return p;
}

// Whitespace-separated fields of the first table line starting with `label`.
std::vector<std::string> table_row(const std::string& text, const std::string& label) {
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        if (line.rfind(label, 0) != 0) continue;
        std::istringstream fields(line);
        std::vector<std::string> v;
        for (std::string f; fields >> f;) v.push_back(f);
        return v;
    }
    return {};
}

struct Csv {
    std::vector<std::string> meta;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> v;
    std::stringstream ss(line);
    for (std::string f; std::getline(ss, f, ',');) v.push_back(f);
    if (!line.empty() && line.back() == ',') v.emplace_back();
    return v;
}

Csv parse_csv(const std::string& text) {
    Csv c;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        if (line.rfind("# ", 0) == 0)
            c.meta.push_back(line.substr(2));
        else if (c.header.empty())
            c.header = split(line);
        else
            c.rows.push_back(split(line));
    }
    return c;
}

// Twenty states: large enough to be realistic, small enough to enumerate quickly.
std::string small_union() {
    static const std::string path = [] {
        std::string body = "name,population\n";
        for (int k = 0; k < 20; ++k)
            body += "R" + std::to_string(k) + "," + std::to_string(250000 + 731 * k * k) + "\n";
        return write_csv("small.csv", body).string();
    }();
    return path;
}

} // namespace

TEST_CASE("analyze at the star quota") {
    const auto r = invoke({"analyze", kDataset, "--quota=star"});
    REQUIRE(r.code == 0);
    const auto de = table_row(r.out, "Germany");
    REQUIRE(de.size() == 7);
    CHECK(de[1] == "9.059");
    CHECK(de[2] == "9.963");
    CHECK(de[3] == "0.211");
    CHECK(de[4] == "9.937");
    CHECK(de[5] == "0.997");
}

TEST_CASE("analyze at zero quota reports the total") {
    const auto r = invoke({"analyze", kDataset, "--quota=zero", "--format=csv"});
    REQUIRE(r.code == 0);
    const auto csv = parse_csv(r.out);
    REQUIRE(csv.rows.size() == 28);
    CHECK(csv.rows.back()[0] == "Totals");
    CHECK(std::abs(std::stod(csv.rows.back()[3]) - 3.429) <= 0.005);
    CHECK(std::abs(std::stod(csv.rows.back()[2]) - 100.0) <= 1e-9);
}

TEST_CASE("single-state union") {
    const auto p = write_csv("single.csv", "name,population\nSolo,5000000\n");
    const auto r = invoke({"analyze", p.string(), "--quota=zero", "--format=csv"});
    REQUIRE(r.code == 0);
    const auto csv = parse_csv(r.out);
    REQUIRE(csv.rows.size() == 2);
    CHECK(csv.rows[0][0] == "Solo");
    CHECK(std::stod(csv.rows[0][3]) == 1.0);
}

TEST_CASE("approx rows") {
    SUBCASE("Germany at the star quota") {
        const auto r = invoke({"approx", kDataset, "--quota=star"});
        REQUIRE(r.code == 0);
        const auto de = table_row(r.out, "Germany");
        REQUIRE(de.size() == 7);
        CHECK(de[1] == "0.211");
        CHECK(de[2] == "0.205");
        CHECK(std::abs(std::stod(de[5]) + 0.13) <= 0.01);
        CHECK(std::abs(std::stod(de[6]) - 0.54) <= 0.01);
    }
    SUBCASE("Italy at zero quota") {
        const auto r = invoke({"approx", kDataset, "--quota=zero"});
        REQUIRE(r.code == 0);
        const auto it = table_row(r.out, "Italy");
        REQUIRE(it.size() == 7);
        CHECK(it[1] == "0.302");
        CHECK(it[2] == "0.319");
        CHECK(std::abs(std::stod(it[5]) + 0.03) <= 0.01);
        CHECK(std::abs(std::stod(it[6]) - 0.65) <= 0.01);
    }
    SUBCASE("clipping only affects the interval ends") {
        const auto plain = parse_csv(invoke({"approx", small_union(), "--quota=star", "--format=csv"}).out);
        const auto clipped = parse_csv(invoke({"approx", small_union(), "--quota=star", "--clip", "--format=csv"}).out);
        REQUIRE(plain.rows.size() == clipped.rows.size());
        for (std::size_t i = 0; i < plain.rows.size(); ++i) {
            for (std::size_t c = 0; c < 5; ++c) CHECK(plain.rows[i][c] == clipped.rows[i][c]);
            CHECK(std::stod(plain.rows[i][5]) < 0.0);
            CHECK(std::stod(clipped.rows[i][5]) == 0.0);
        }
    }
    SUBCASE("near-unanimity quota") {
        const auto r = invoke({"approx", kDataset, "--quota=0.99", "--format=csv"});
        REQUIRE(r.code == 0);
        const auto csv = parse_csv(r.out);
        REQUIRE(csv.rows.size() == 27);
        REQUIRE(csv.header[1] == "exact");
        for (const auto& row : csv.rows) CHECK(std::stod(row[1]) < 1e-6);
    }
}

TEST_CASE("quota sweep") {
    SUBCASE("reference grid") {
        const auto r = invoke({"quota-sweep", kDataset, "--grid=paper", "--format=csv"});
        REQUIRE(r.code == 0);
        const auto csv = parse_csv(r.out);
        REQUIRE(csv.rows.size() == 4);
        CHECK(std::find(csv.meta.begin(), csv.meta.end(), "argmin=2") != csv.meta.end());
        CHECK(std::find(csv.meta.begin(), csv.meta.end(), "argmin_kind=jagcom-star") != csv.meta.end());
    }
    SUBCASE("single point") {
        const auto r = invoke({"quota-sweep", small_union(), "--grid=0", "--format=csv"});
        REQUIRE(r.code == 0);
        const auto csv = parse_csv(r.out);
        CHECK(csv.rows.size() == 1);
        CHECK(std::find(csv.meta.begin(), csv.meta.end(), "argmin=0") != csv.meta.end());
    }
    SUBCASE("zero against star") {
        const auto r = invoke({"quota-sweep", kDataset, "--grid=0,star", "--format=csv"});
        REQUIRE(r.code == 0);
        const auto csv = parse_csv(r.out);
        REQUIRE(csv.rows.size() == 2);
        CHECK(std::stod(csv.rows[0][2]) > std::stod(csv.rows[1][2]));
    }
    SUBCASE("empty grid") {
        CHECK(invoke({"quota-sweep", kDataset, "--grid=,"}).code == 2);
    }
}

TEST_CASE("influence reports") {
    SUBCASE("uniform bias") {
        const auto r = invoke({"influence", "--model=uniform-bias", "--m=5", "--format=csv"});
        REQUIRE(r.code == 0);
        const auto csv = parse_csv(r.out);
        CHECK(std::abs(std::stod(csv.rows[1][1]) - 0.2) <= 1e-12);
    }
    SUBCASE("fair") {
        const auto r = invoke({"influence", "--model=fair", "--m=3"});
        REQUIRE(r.code == 0);
        CHECK(table_row(r.out, "alpha")[1] == "0.500");
        CHECK(table_row(r.out, "kappa")[1] == "0.500");
        CHECK(table_row(r.out, "eta")[1] == "0.750");
        CHECK(r.out.find("closed-form") != std::string::npos);
    }
    SUBCASE("circular") {
        const auto r = invoke({"influence", "--model=circular", "--m=7"});
        REQUIRE(r.code == 0);
        CHECK(r.out.find("enumeration") != std::string::npos);
        CHECK(table_row(r.out, "alpha")[1] == "0.188");
    }
    SUBCASE("two atoms") {
        const auto r = invoke({"influence", "--model=two-atoms:1/3,2/3", "--m=3", "--format=csv"});
        REQUIRE(r.code == 0);
        const auto csv = parse_csv(r.out);
        CHECK(std::abs(std::stod(csv.rows[1][1]) - 4.0 / 9.0) <= 1e-12);
    }
    SUBCASE("even electorate") {
        CHECK(invoke({"influence", "--model=fair", "--m=4"}).code == 2);
    }
    SUBCASE("unknown model") {
        CHECK(invoke({"influence", "--model=ising", "--m=5"}).code == 2);
    }
}

TEST_CASE("input and size errors") {
    SUBCASE("missing file") {
        const auto r = invoke({"analyze", "/nonexistent/union.csv"});
        CHECK(r.code == 2);
        CHECK_FALSE(r.err.empty());
    }
    SUBCASE("malformed dataset") {
        const auto p = write_csv("bad.csv", "name,population\nA,12\nB,minus\n");
        const auto r = invoke({"analyze", p.string()});
        CHECK(r.code == 2);
        CHECK(r.err.find("3") != std::string::npos);
    }
    SUBCASE("bad quota") {
        CHECK(invoke({"analyze", kDataset, "--quota=1.5"}).code == 2);
        CHECK(invoke({"analyze", kDataset, "--quota=half"}).code == 2);
    }
    SUBCASE("bad format") {
        CHECK(invoke({"analyze", kDataset, "--format=xml"}).code == 2);
    }
    SUBCASE("too many states") {
        std::string body = "name,population\n";
        for (int k = 0; k < 31; ++k) body += "S" + std::to_string(k) + "," + std::to_string(100000 + k) + "\n";
        const auto p = write_csv("big.csv", body);
        const auto r = invoke({"analyze", p.string()});
        CHECK(r.code == 3);
        CHECK(r.err.find("approx") != std::string::npos);

        const auto a = invoke({"approx", p.string(), "--format=csv"});
        CHECK(a.code == 0);
        CHECK(a.err.find("omitted") != std::string::npos);
        CHECK(parse_csv(a.out).header[1] == "jagcom");
    }
}

TEST_CASE("machine formats round-trip at full precision") {
    const auto table = invoke({"approx", small_union(), "--quota=1/5", "--format=csv"});
    const auto json = invoke({"approx", small_union(), "--quota=1/5", "--format=json"});
    REQUIRE(table.code == 0);
    REQUIRE(json.code == 0);
    const auto csv = parse_csv(table.out);
    const auto doc = nlohmann::json::parse(json.out);
    REQUIRE(doc["rows"].size() == csv.rows.size());
    for (std::size_t i = 0; i < csv.rows.size(); ++i) {
        CHECK(doc["rows"][i]["state"].get<std::string>() == csv.rows[i][0]);
        for (std::size_t c = 1; c < csv.header.size(); ++c) {
            const double from_csv = std::strtod(csv.rows[i][c].c_str(), nullptr);
            const double from_json = doc["rows"][i][csv.header[c]].get<double>();
            CHECK(from_csv == from_json);
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", from_json);
            CHECK(csv.rows[i][c] == buf);
        }
    }
}

TEST_CASE("output is deterministic and mirrored to --output") {
    const auto path = scratch("sweep.txt");
    const std::vector<std::string> args{"quota-sweep", small_union(), "--grid=0,1/10", "--threads=3",
                                        "--output=" + path.string()};
    const auto first = invoke(args);
    const auto second = invoke(args);
    REQUIRE(first.code == 0);
    CHECK(first.out == second.out);
    std::ifstream file(path);
    std::stringstream saved;
    saved << file.rdbuf();
    CHECK(saved.str() == first.out);
}
