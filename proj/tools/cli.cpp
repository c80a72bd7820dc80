#include "cli.hpp"

#include "twotier/council.hpp"
#include "twotier/errors.hpp"
#include "twotier/gaussian.hpp"
#include "twotier/union.hpp"
#include "twotier/vote_models.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <variant>

namespace twotier::cli {

namespace {

using Cell = std::variant<std::monostate, std::string, double>;

struct Column {
    std::string key;
    bool scientific = false;
};

/// Flattened report: one row per state (or grid point), plus metadata lines.
struct Report {
    std::vector<Column> columns;
    std::vector<std::vector<Cell>> rows;
    std::vector<std::pair<std::string, Cell>> meta;
};

enum class Format { table, csv, json };

struct Options {
    std::string dataset;
    std::string quota = "star";
    std::string grid = "paper";
    std::string model;
    unsigned m = 0;
    std::string format = "table";
    std::string output;
    unsigned threads = 0;
    bool clip = false;
};

std::string full_precision(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string display(double v, bool scientific) {
    char buf[40];
    std::snprintf(buf, sizeof buf, scientific ? "%.3e" : "%.3f", v);
    return buf;
}

std::string render_cell(const Cell& c, Format fmt, bool scientific) {
    if (std::holds_alternative<std::monostate>(c)) return "";
    if (const auto* s = std::get_if<std::string>(&c)) return *s;
    const double v = std::get<double>(c);
    return fmt == Format::table ? display(v, scientific) : full_precision(v);
}

nlohmann::json to_json(const Cell& c) {
    if (std::holds_alternative<std::monostate>(c)) return nullptr;
    if (const auto* s = std::get_if<std::string>(&c)) return *s;
    return std::get<double>(c);
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

void write_report(const Report& rep, Format fmt, std::ostream& os) {
    switch (fmt) {
    case Format::json: {
        nlohmann::json doc;
        nlohmann::json meta = nlohmann::json::object();
        for (const auto& [k, v] : rep.meta) meta[k] = to_json(v);
        doc["meta"] = meta;
        nlohmann::json cols = nlohmann::json::array();
        for (const auto& c : rep.columns) cols.push_back(c.key);
        doc["columns"] = cols;
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& r : rep.rows) {
            nlohmann::json obj = nlohmann::json::object();
            for (std::size_t i = 0; i < rep.columns.size(); ++i) obj[rep.columns[i].key] = to_json(r[i]);
            rows.push_back(obj);
        }
        doc["rows"] = rows;
        os << doc.dump(2) << '\n';
        return;
    }
    case Format::csv: {
        for (const auto& [k, v] : rep.meta) os << "# " << k << '=' << render_cell(v, Format::csv, false) << '\n';
        for (std::size_t i = 0; i < rep.columns.size(); ++i) os << (i ? "," : "") << rep.columns[i].key;
        os << '\n';
        for (const auto& r : rep.rows) {
            for (std::size_t i = 0; i < r.size(); ++i)
                os << (i ? "," : "") << csv_escape(render_cell(r[i], Format::csv, false));
            os << '\n';
        }
        return;
    }
    case Format::table: {
        for (const auto& [k, v] : rep.meta) {
            os << "# " << k << ": " << render_cell(v, Format::csv, false) << '\n';
        }
        std::vector<std::vector<std::string>> text;
        std::vector<std::size_t> width(rep.columns.size());
        for (std::size_t i = 0; i < rep.columns.size(); ++i) width[i] = rep.columns[i].key.size();
        for (const auto& r : rep.rows) {
            auto& line = text.emplace_back();
            for (std::size_t i = 0; i < r.size(); ++i) {
                line.push_back(render_cell(r[i], Format::table, rep.columns[i].scientific));
                width[i] = std::max(width[i], line.back().size());
            }
        }
        const auto emit = [&](const std::vector<std::string>& cells) {
            for (std::size_t i = 0; i < cells.size(); ++i) {
                if (i) os << "  ";
                if (i == 0)
                    os << std::left << std::setw(static_cast<int>(width[i])) << cells[i];
                else
                    os << std::right << std::setw(static_cast<int>(width[i])) << cells[i];
            }
            os << '\n';
        };
        std::vector<std::string> header;
        for (const auto& c : rep.columns) header.push_back(c.key);
        emit(header);
        for (const auto& line : text) emit(line);
        return;
    }
    }
}

Format parse_format(const std::string& s) {
    if (s == "table") return Format::table;
    if (s == "csv") return Format::csv;
    if (s == "json") return Format::json;
    throw DomainError("unknown format '" + s + "' (expected table, csv or json)");
}

double parse_real(const std::string& token, const char* what) {
    // Accept plain decimals and simple fractions such as 1/3.
    const auto slash = token.find('/');
    if (slash != std::string::npos)
        return parse_real(token.substr(0, slash), what) / parse_real(token.substr(slash + 1), what);
    double v = 0.0;
    const auto* first = token.data();
    const auto* last = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (token.empty() || ec != std::errc{} || ptr != last || !std::isfinite(v))
        throw DomainError(std::string("invalid ") + what + " '" + token + "'");
    return v;
}

QuotaSpec parse_quota(const std::string& flag, const Union& u) {
    QuotaSpec q;
    if (flag == "zero")
        q = QuotaSpec::zero();
    else if (flag == "star")
        q = jagcom_quota(u);
    else
        q = QuotaSpec::explicit_value(parse_real(flag, "quota"));
    require_analysable(q);
    return q;
}

std::vector<QuotaSpec> parse_grid(const std::string& flag, const Union& u) {
    std::vector<QuotaSpec> grid;
    const QuotaSpec star = jagcom_quota(u);
    std::stringstream ss(flag);
    std::string token;
    while (std::getline(ss, token, ',')) {
        if (token.empty()) continue;
        if (token == "paper") {
            grid.push_back(QuotaSpec::zero());
            grid.push_back(QuotaSpec::explicit_value(0.5 * star.q));
            grid.push_back(star);
            grid.push_back(QuotaSpec::explicit_value(1.5 * star.q));
        } else {
            grid.push_back(parse_quota(token, u));
        }
    }
    if (grid.empty()) throw DomainError("quota grid is empty");
    for (const auto& q : grid) require_analysable(q);
    return grid;
}

VoteModel parse_model(const std::string& flag) {
    if (flag == "fair") return IndependentFair{};
    if (flag == "uniform-bias") return CollectiveBias{MixingLaw::uniform()};
    if (flag == "circular") return CircularMajority{};
    constexpr std::string_view prefix = "two-atoms:";
    if (flag.rfind(prefix, 0) == 0) {
        const std::string rest = flag.substr(prefix.size());
        const auto comma = rest.find(',');
        if (comma == std::string::npos) throw DomainError("two-atoms model needs two values: two-atoms:a,b");
        return CollectiveBias{MixingLaw::two_atoms(parse_real(rest.substr(0, comma), "atom"),
                                                   parse_real(rest.substr(comma + 1), "atom"))};
    }
    throw DomainError("unknown model '" + flag + "' (fair, uniform-bias, two-atoms:a,b, circular)");
}

std::string quota_label(const QuotaSpec& q) { return to_string(q.kind); }

Report cmd_analyze(const Options& opt) {
    const Union u = load_union_file(opt.dataset);
    const QuotaSpec q = parse_quota(opt.quota, u);
    const WeightVector w = sqrt_weights(u);
    std::vector<double> alpha;
    for (const auto& st : u.states()) alpha.push_back(penrose_alpha(static_cast<double>(st.population)));
    const auto a = analyze(w, q, alpha, {opt.threads});

    Report rep;
    rep.meta = {{"command", std::string("analyze")}, {"quota", quota_label(q)}, {"q", q.q}, {"objective_Q", a.objective}};
    rep.columns = {{"state"}, {"w"}, {"w_norm"}, {"beta"}, {"beta_norm"}, {"ratio"}, {"total_influence", true}};
    for (std::size_t j = 0; j < u.size(); ++j)
        rep.rows.push_back({u[j].name, w[j], a.weight_normalised[j], a.beta[j], a.beta_normalised[j], a.ratios[j],
                            a.total_influence[j]});
    double wn = 0.0, bn = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) {
        wn += a.weight_normalised[j];
        bn += a.beta_normalised[j];
    }
    rep.rows.push_back({std::string("Totals"), w.total(), wn, a.beta_total, bn, Cell{}, Cell{}});
    return rep;
}

Report cmd_approx(const Options& opt, std::ostream& err) {
    const Union u = load_union_file(opt.dataset);
    const QuotaSpec q = parse_quota(opt.quota, u);
    const WeightVector w = sqrt_weights(u);
    const bool exact = u.size() <= kMaxExactStates;
    std::vector<double> beta;
    if (exact)
        beta = state_influences_exact(w, q, {opt.threads});
    else
        err << "notice: " << u.size() << " states exceeds the exact enumeration limit of " << kMaxExactStates
            << "; exact column omitted\n";

    Report rep;
    rep.meta = {{"command", std::string("approx")}, {"quota", quota_label(q)}, {"q", q.q}};
    rep.columns.push_back({"state"});
    if (exact) rep.columns.push_back({"exact"});
    for (const char* k : {"jagcom", "gauss_integral", "be_bound", "interval_lo", "interval_hi"}) rep.columns.push_back({k});
    for (std::size_t j = 0; j < u.size(); ++j) {
        const auto c = certificate(w, q, j);
        double lo = c.interval_lo, hi = c.interval_hi;
        if (opt.clip) {
            lo = std::clamp(lo, 0.0, 1.0);
            hi = std::clamp(hi, 0.0, 1.0);
        }
        std::vector<Cell> row{u[j].name};
        if (exact) row.emplace_back(beta[j]);
        row.insert(row.end(), {c.jagcom_density_approx, c.gauss_integral, c.be_bound, lo, hi});
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

Report cmd_quota_sweep(const Options& opt) {
    const Union u = load_union_file(opt.dataset);
    const auto grid = parse_grid(opt.grid, u);
    const auto res = quota_sweep(sqrt_weights(u), grid, {opt.threads});
    Report rep;
    rep.columns = {{"q"}, {"kind"}, {"objective_Q", true}, {"beta_total"}};
    for (const auto& p : res.points) rep.rows.push_back({p.quota.q, quota_label(p.quota), p.objective, p.beta_total});
    const auto& best = res.points[res.argmin];
    rep.meta = {{"command", std::string("quota-sweep")},
                {"argmin", std::to_string(res.argmin)},
                {"argmin_q", best.quota.q},
                {"argmin_kind", quota_label(best.quota)}};
    return rep;
}

Report cmd_influence(const Options& opt) {
    const VoteModel model = parse_model(opt.model);
    const auto r = influence_report(model, opt.m);
    Report rep;
    rep.meta = {{"command", std::string("influence")}, {"model", describe(model)}, {"route", route(model)}};
    rep.columns = {{"quantity"}, {"value"}};
    rep.rows = {{std::string("m"), std::to_string(r.m)},
                {std::string("alpha"), r.alpha},
                {std::string("kappa"), r.kappa},
                {std::string("eta"), r.eta},
                {std::string("mean_abs_margin"), r.mean_abs_margin},
                {std::string("mean_edge"), r.mean_edge}};
    return rep;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Voting power in two-tier voting systems", "twotier"};
    app.require_subcommand(1);
    Options opt;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--format", opt.format, "table, csv or json")->default_str("table");
        sub->add_option("--output", opt.output, "also write the report to this file");
        sub->add_option("--threads", opt.threads, "worker threads for exact enumeration (0 = auto)");
    };

    auto* analyze_cmd = app.add_subcommand("analyze", "exact state influences with normalised weights and ratios");
    analyze_cmd->add_option("dataset", opt.dataset, "CSV with header name,population")->required();
    analyze_cmd->add_option("--quota", opt.quota, "zero, star or a real |q| < 1");
    add_common(analyze_cmd);

    auto* approx_cmd = app.add_subcommand("approx", "Gaussian approximation and Berry-Esseen intervals");
    approx_cmd->add_option("dataset", opt.dataset, "CSV with header name,population")->required();
    approx_cmd->add_option("--quota", opt.quota, "zero, star or a real |q| < 1");
    approx_cmd->add_flag("--clip", opt.clip, "clip intervals to [0,1] for display");
    add_common(approx_cmd);

    auto* sweep_cmd = app.add_subcommand("quota-sweep", "objective Q and total influence B over a quota grid");
    sweep_cmd->add_option("dataset", opt.dataset, "CSV with header name,population")->required();
    sweep_cmd->add_option("--grid", opt.grid, "comma list of reals, zero and star; 'paper' expands to 0, q*/2, q*, 3q*/2");
    add_common(sweep_cmd);

    auto* influence_cmd = app.add_subcommand("influence", "within-state influence report");
    influence_cmd->add_option("--model", opt.model, "fair, uniform-bias, two-atoms:a,b or circular")->required();
    influence_cmd->add_option("--m", opt.m, "electorate size (odd)")->required();
    add_common(influence_cmd);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }

    try {
        const Format fmt = parse_format(opt.format);
        Report rep;
        if (analyze_cmd->parsed())
            rep = cmd_analyze(opt);
        else if (approx_cmd->parsed())
            rep = cmd_approx(opt, err);
        else if (sweep_cmd->parsed())
            rep = cmd_quota_sweep(opt);
        else
            rep = cmd_influence(opt);

        write_report(rep, fmt, out);
        if (!opt.output.empty()) {
            std::ofstream file(opt.output);
            if (!file) throw ValidationError("cannot write '" + opt.output + "'");
            write_report(rep, fmt, file);
        }
        return kOk;
    } catch (const SizeError& e) {
        err << "error: " << e.what() << '\n';
        if (analyze_cmd->parsed() || sweep_cmd->parsed()) err << "hint: the 'approx' subcommand handles large unions\n";
        return kSizeLimit;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }
}

} // namespace twotier::cli
