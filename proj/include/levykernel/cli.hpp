#pragma once

// Command-line front end: eval | sweep | compare | envelope | symbols.
// Exit codes: 0 success, 2 usage, 3 numeric failure.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "levykernel/parallel.hpp"
#include "levykernel/radial_symbol.hpp"
#include "levykernel/stable_kernel.hpp"

namespace levykernel::cli {

inline constexpr const char* version = "0.1.0";

inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 2;
inline constexpr int exit_numeric = 3;

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Sweep tables

struct SweepRow {
    double r = 0.0;
    double t = 0.0;
    std::string method;
    double value = 0.0;
    double est_error = 0.0;
    bool operator==(const SweepRow&) const = default;
};

/// Rows sorted by (r, method); notes are the '#' lines written after the rows.
struct SweepTable {
    std::vector<SweepRow> rows;
    std::vector<std::string> notes;
    bool operator==(const SweepTable&) const = default;
};

inline const char* csv_header = "r,t,method,value,est_error";

inline std::string format_double(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline double parse_double(const std::string& s)
{
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        // from_chars rejects "inf"/"nan" spellings on some libraries
        char* end = nullptr;
        x = std::strtod(s.c_str(), &end);
        if (s.empty() || end != s.c_str() + s.size())
            throw std::runtime_error("csv: bad number '" + s + "'");
    }
    return x;
}

inline void sort_rows(std::vector<SweepRow>& rows)
{
    std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
        if (a.r != b.r)
            return a.r < b.r;
        return a.method < b.method;
    });
}

inline void write_csv(const SweepTable& table, std::ostream& os)
{
    os << csv_header << '\n';
    for (const auto& row : table.rows)
        os << format_double(row.r) << ',' << format_double(row.t) << ',' << row.method << ','
           << format_double(row.value) << ',' << format_double(row.est_error) << '\n';
    for (const auto& note : table.notes)
        os << "# " << note << '\n';
}

inline SweepTable read_csv(std::istream& is)
{
    SweepTable table;
    std::string line;
    if (!std::getline(is, line) || line != csv_header)
        throw std::runtime_error("csv: missing header");
    while (std::getline(is, line)) {
        if (line.empty())
            continue;
        if (line[0] == '#') {
            table.notes.push_back(line.size() > 2 ? line.substr(2) : std::string{});
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ','))
            cells.push_back(cell);
        if (cells.size() != 5)
            throw std::runtime_error("csv: expected 5 columns in '" + line + "'");
        table.rows.push_back({parse_double(cells[0]), parse_double(cells[1]), cells[2], parse_double(cells[3]),
                              parse_double(cells[4])});
    }
    return table;
}

/// Least-squares slope of log|value| against log r for one method's rows.
inline std::optional<double> loglog_slope(const std::vector<SweepRow>& rows, const std::string& method)
{
    double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& row : rows) {
        if (row.method != method || !(row.r > 0.0) || row.value == 0.0 || !std::isfinite(row.value))
            continue;
        const double x = std::log(row.r), y = std::log(std::abs(row.value));
        n += 1;
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double den = n * sxx - sx * sx;
    if (n < 3 || !(den > 0.0))
        return std::nullopt;
    return (n * sxy - sx * sy) / den;
}

inline double relative_gap(double a, double b)
{
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

// ---------------------------------------------------------------------------
// Requests

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Args {
    int d = 2;
    std::optional<double> alpha;
    double beta = 0.0;
    double t = 1.0;
    std::optional<double> r;
    std::optional<double> r_min;
    std::optional<double> r_max;
    int points = 0;
    bool log = false;
    std::string method = "auto";
    std::string symbol;
    std::optional<int> k;
    std::optional<double> contour_c;
    std::optional<double> tol;
    std::optional<double> bound_constant;
    bool verify = false;
    std::string out;
    bool json_out = false;
};

inline const std::vector<std::string>& method_labels()
{
    static const std::vector<std::string> labels{"mb", "series", "small-r", "closed", "oracle", "auto"};
    return labels;
}

/// A validated evaluation target: a stable spec, or a registry symbol with (d, beta, t).
struct Request {
    KernelSpec spec;
    std::optional<RadialSymbol> symbol;
    json symbol_json;
    std::optional<int> k;
    std::optional<double> contour_c;
    std::optional<double> tol;

    json describe() const
    {
        json j;
        j["d"] = spec.d;
        if (symbol)
            j["symbol"] = symbol_json;
        else
            j["alpha"] = spec.alpha;
        j["beta"] = spec.beta;
        j["t"] = spec.t;
        if (k)
            j["k"] = *k;
        if (contour_c)
            j["contour_c"] = *contour_c;
        if (tol)
            j["tol"] = *tol;
        return j;
    }
};

inline json load_symbol_json(const std::string& text)
{
    std::string body = text;
    if (!text.empty() && text[0] == '@') {
        std::ifstream in(text.substr(1));
        if (!in)
            throw UsageError("cannot read symbol file '" + text.substr(1) + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        body = ss.str();
    }
    json j;
    try {
        j = json::parse(body);
    } catch (const json::exception& e) {
        throw UsageError(std::string("symbol: invalid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
        throw UsageError("symbol: expected an object with a string \"kind\"");
    return j;
}

inline RadialSymbol symbol_from_json(const json& j)
{
    std::map<std::string, double> params;
    for (const auto& [key, value] : j.items()) {
        if (key == "kind")
            continue;
        if (!value.is_number())
            throw UsageError("symbol: parameter '" + key + "' must be a number");
        params[key] = value.get<double>();
    }
    try {
        return make_symbol(j["kind"].get<std::string>(), params);
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
}

inline std::vector<std::string> split_methods(const std::string& list)
{
    std::vector<std::string> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (std::find(method_labels().begin(), method_labels().end(), item) == method_labels().end())
            throw UsageError("unknown method '" + item + "' (mb, series, small-r, closed, oracle, auto)");
        out.push_back(item);
    }
    if (out.empty())
        throw UsageError("no method given");
    return out;
}

inline Request make_request(const Args& a)
{
    Request req;
    req.k = a.k;
    req.contour_c = a.contour_c;
    req.tol = a.tol;
    if (a.tol && !(*a.tol > 0.0))
        throw UsageError("--tol must be positive");
    if (!a.symbol.empty()) {
        if (a.alpha)
            throw UsageError("--alpha and --symbol are exclusive");
        req.symbol_json = load_symbol_json(a.symbol);
        req.symbol = symbol_from_json(req.symbol_json);
        if (a.d < 2 || !(a.beta >= 0.0) || !(a.t > 0.0))
            throw UsageError("need d >= 2, beta >= 0, t > 0");
        req.spec = KernelSpec{a.d, req.symbol->alpha_index, a.beta, a.t};
        if (a.k) {
            if (!(*a.k > 0.5 * (a.d + 3) + a.beta))
                throw UsageError("--k must exceed (d+3)/2 + beta");
            if (*a.k > req.symbol->k)
                throw UsageError("--k exceeds the symbol's derivative order " + std::to_string(req.symbol->k));
        }
        if (a.contour_c && !general_strip(a.d, a.beta).contains(*a.contour_c))
            throw UsageError("--contour-c outside the admissible strip");
        return req;
    }
    if (!a.alpha)
        throw UsageError("need --alpha or --symbol");
    if (a.k)
        throw UsageError("--k applies to --symbol only");
    req.spec = KernelSpec{a.d, *a.alpha, a.beta, a.t};
    try {
        req.spec.validate();
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
    if (a.contour_c && !mb_strip(req.spec).contains(*a.contour_c))
        throw UsageError("--contour-c outside the admissible strip");
    return req;
}

/// Rejects method/target combinations that can never be evaluated.
inline void check_methods(const Request& req, const std::vector<std::string>& methods)
{
    for (const auto& m : methods) {
        if (req.symbol) {
            if (m != "mb" && m != "oracle" && m != "auto")
                throw UsageError("method '" + m + "' is not available for --symbol (use mb, oracle, auto)");
            continue;
        }
        const auto& s = req.spec;
        if (m == "mb" && s.alpha == 2.0)
            throw UsageError("mb requires alpha < 2");
        if (m == "series" && s.alpha == 2.0)
            throw UsageError("series requires alpha < 2");
        if (m == "small-r" && s.alpha < 1.0)
            throw UsageError("small-r requires alpha >= 1");
    }
}

inline std::vector<double> build_grid(const Args& a)
{
    if (a.r && !a.r_min && !a.r_max) {
        if (!(*a.r >= 0.0))
            throw UsageError("--r must be >= 0");
        return {*a.r};
    }
    if (a.r)
        throw UsageError("--r and --r-min/--r-max are exclusive");
    if (!a.r_min || !a.r_max || a.points < 1)
        throw UsageError("grid needs --r-min, --r-max and --points >= 1 (or a single --r)");
    const double lo = *a.r_min, hi = *a.r_max;
    if (!(lo >= 0.0) || !(hi >= lo))
        throw UsageError("need 0 <= r-min <= r-max");
    if (a.log && !(lo > 0.0))
        throw UsageError("--log needs r-min > 0");
    std::vector<double> grid(a.points);
    for (int i = 0; i < a.points; ++i) {
        if (a.points == 1) {
            grid[i] = lo;
            break;
        }
        const double f = static_cast<double>(i) / (a.points - 1);
        grid[i] = a.log ? std::exp(std::log(lo) + f * (std::log(hi) - std::log(lo))) : lo + f * (hi - lo);
    }
    grid.back() = hi;
    return grid;
}

inline Approximation compute(const Request& req, const std::string& method, double r)
{
    if (req.symbol) {
        if (method == "oracle") {
            OracleOptions o;
            if (req.tol)
                o.rel_tol = *req.tol;
            return general_oracle(*req.symbol, req.spec.d, req.spec.beta, req.spec.t, r, o);
        }
        GeneralMbOptions o;
        o.k = req.k;
        o.abscissa = req.contour_c;
        if (req.tol)
            o.rel_tol = *req.tol;
        return general_kernel_mb(*req.symbol, req.spec.d, req.spec.beta, req.spec.t, r, o);
    }
    MbOptions mb;
    mb.abscissa = req.contour_c;
    if (req.tol)
        mb.rel_tol = *req.tol;
    if (method == "oracle") {
        OracleOptions o;
        if (req.tol)
            o.rel_tol = *req.tol;
        return stable_oracle(req.spec, r, o);
    }
    if (method == "mb")
        return stable_mb(req.spec, r, mb);
    if (method == "series")
        return stable_series(req.spec, r);
    if (method == "small-r")
        return small_r_series(req.spec, r);
    if (method == "closed")
        return closed_form(req.spec, r);
    return evaluate(req.spec, r, std::nullopt, mb);
}

inline json to_json(const Approximation& a)
{
    json j;
    j["value"] = a.value;
    j["est_error"] = a.est_error;
    j["method"] = std::string(to_string(a.method));
    json diag;
    diag["terms_used"] = a.diagnostics.terms_used;
    diag["nodes_used"] = a.diagnostics.nodes_used;
    diag["truncation_height"] = a.diagnostics.truncation_height;
    diag["abscissa"] = a.diagnostics.abscissa;
    diag["panels"] = a.diagnostics.panels;
    diag["divergence_warning"] = a.diagnostics.divergence_warning;
    j["diagnostics"] = diag;
    if (!a.terms.empty()) {
        json terms = json::array();
        for (const auto& t : a.terms)
            terms.push_back({{"n", t.n}, {"exponent", t.exponent}, {"coefficient", t.coefficient},
                             {"vanished", t.vanished}});
        j["terms"] = terms;
    }
    return j;
}

/// Values for every (r, method) pair, in grid-major order; parallel over pairs.
inline std::vector<std::vector<Approximation>> compute_grid(const Request& req, const std::vector<double>& grid,
                                                            const std::vector<std::string>& methods)
{
    std::vector<std::vector<Approximation>> out(grid.size(), std::vector<Approximation>(methods.size()));
    parallel_for(grid.size() * methods.size(), [&](std::size_t idx) {
        const std::size_t i = idx / methods.size(), j = idx % methods.size();
        out[i][j] = compute(req, methods[j], grid[i]);
    });
    return out;
}

/// Leading asymptotic term for the request, if one applies.
inline std::optional<std::pair<LeadingTerm, std::string>> request_leading_term(const Request& req)
{
    const auto& s = req.spec;
    if (!req.symbol) {
        if (s.alpha == 2.0)
            return std::nullopt;
        const SeriesTerm lt = leading_term(s);
        return std::pair{LeadingTerm{lt.coefficient, lt.exponent}, std::string("leading_term")};
    }
    if (!is_even_integer(s.beta))
        return std::pair{general_leading_term(*req.symbol, s.d, s.beta, s.t), std::string("general_leading_term")};
    if (req.symbol->delta || req.symbol->name == "stable")
        return std::pair{perturbed_leading_term(req.symbol->alpha_index, req.symbol->eta1_at_zero, s.d, s.beta, s.t),
                         std::string("perturbed_leading_term")};
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Commands

inline void emit(const Args& a, std::ostream& out, const std::string& text)
{
    if (a.out.empty()) {
        out << text;
        return;
    }
    std::ofstream f(a.out, std::ios::binary);
    if (!f)
        throw UsageError("cannot write '" + a.out + "'");
    f << text;
}

inline json verify_block(const Request& req, double r, double value)
{
    const Approximation o = compute(req, "oracle", r);
    return {{"oracle_value", o.value}, {"oracle_est_error", o.est_error}, {"rel_gap", relative_gap(value, o.value)}};
}

inline int cmd_eval(const Args& a, std::ostream& out)
{
    const Request req = make_request(a);
    const auto methods = split_methods(a.method);
    if (methods.size() != 1)
        throw UsageError("eval takes a single method");
    check_methods(req, methods);
    if (!a.r || a.r_min || a.r_max)
        throw UsageError("eval needs --r");
    const double r = *a.r;
    if (!(r >= 0.0))
        throw UsageError("--r must be >= 0");
    const Approximation res = compute(req, methods[0], r);
    json j;
    j["command"] = "eval";
    j["input"] = req.describe();
    j["input"]["r"] = r;
    j["requested"] = methods[0];
    const json body = to_json(res);
    for (const auto& [key, value] : body.items())
        j[key] = value;
    if (a.verify)
        j["verify"] = verify_block(req, r, res.value);
    j["version"] = version;
    emit(a, out, j.dump(2) + "\n");
    return exit_ok;
}

inline SweepTable make_sweep(const Request& req, const std::vector<double>& grid, std::vector<std::string> methods,
                             bool verify)
{
    if (verify && std::find(methods.begin(), methods.end(), "oracle") == methods.end())
        methods.push_back("oracle");
    const auto values = compute_grid(req, grid, methods);
    SweepTable table;
    for (std::size_t i = 0; i < grid.size(); ++i)
        for (std::size_t j = 0; j < methods.size(); ++j)
            table.rows.push_back({grid[i], req.spec.t, methods[j], values[i][j].value, values[i][j].est_error});
    sort_rows(table.rows);

    table.notes.push_back(std::string("levykernel ") + version);
    table.notes.push_back("input: " + req.describe().dump());
    table.notes.push_back(req.contour_c ? "contour: c=" + format_double(*req.contour_c) : "contour: auto");
    if (methods.size() > 1) {
        double gap = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i)
            for (std::size_t p = 0; p < methods.size(); ++p)
                for (std::size_t q = p + 1; q < methods.size(); ++q)
                    gap = std::max(gap, relative_gap(values[i][p].value, values[i][q].value));
        table.notes.push_back("max_rel_gap: " + format_double(gap));
    }
    std::vector<std::string> seen;
    for (const auto& m : methods) {
        if (std::find(seen.begin(), seen.end(), m) != seen.end())
            continue;
        seen.push_back(m);
        if (const auto slope = loglog_slope(table.rows, m))
            table.notes.push_back("slope " + m + ": " + format_double(*slope));
    }
    return table;
}

inline int cmd_sweep(const Args& a, std::ostream& out)
{
    const Request req = make_request(a);
    auto methods = split_methods(a.method);
    check_methods(req, methods);
    const auto grid = build_grid(a);
    const SweepTable table = make_sweep(req, grid, methods, a.verify);
    if (a.json_out) {
        json j;
        j["command"] = "sweep";
        j["rows"] = json::array();
        for (const auto& row : table.rows)
            j["rows"].push_back({{"r", row.r}, {"t", row.t}, {"method", row.method}, {"value", row.value},
                                 {"est_error", row.est_error}});
        j["notes"] = table.notes;
        emit(a, out, j.dump(2) + "\n");
    } else {
        std::ostringstream os;
        write_csv(table, os);
        emit(a, out, os.str());
    }
    return exit_ok;
}

inline int cmd_compare(const Args& a, std::ostream& out)
{
    const Request req = make_request(a);
    auto methods = split_methods(a.method == "auto" ? std::string("mb,oracle") : a.method);
    if (a.verify && std::find(methods.begin(), methods.end(), "oracle") == methods.end())
        methods.push_back("oracle");
    if (methods.size() < 2)
        throw UsageError("compare needs at least two methods");
    check_methods(req, methods);
    const auto grid = build_grid(a);
    const auto values = compute_grid(req, grid, methods);

    json j;
    j["command"] = "compare";
    j["input"] = req.describe();
    j["grid"] = {{"r_min", grid.front()}, {"r_max", grid.back()}, {"points", grid.size()}, {"log", a.log}};
    j["methods"] = methods;
    j["pairs"] = json::array();
    for (std::size_t p = 0; p < methods.size(); ++p)
        for (std::size_t q = p + 1; q < methods.size(); ++q) {
            double rel = 0.0, abs_diff = 0.0;
            for (std::size_t i = 0; i < grid.size(); ++i) {
                rel = std::max(rel, relative_gap(values[i][p].value, values[i][q].value));
                abs_diff = std::max(abs_diff, std::abs(values[i][p].value - values[i][q].value));
            }
            j["pairs"].push_back({{"a", methods[p]}, {"b", methods[q]}, {"max_rel_diff", rel},
                                  {"max_abs_diff", abs_diff}});
        }

    std::vector<SweepRow> rows;
    for (std::size_t i = 0; i < grid.size(); ++i)
        for (std::size_t m = 0; m < methods.size(); ++m)
            rows.push_back({grid[i], req.spec.t, methods[m], values[i][m].value, values[i][m].est_error});
    json slopes = json::object();
    for (const auto& m : methods)
        if (const auto s = loglog_slope(rows, m))
            slopes[m] = *s;
    j["slopes"] = slopes;

    if (const auto lt = request_leading_term(req)) {
        const auto& [term, source] = *lt;
        json fit = json::object();
        const double r_far = grid.back();
        for (std::size_t m = 0; m < methods.size(); ++m) {
            const double c = values.back()[m].value * std::pow(r_far, term.exponent);
            fit[methods[m]] = {{"coefficient", c}, {"ratio", term.coefficient == 0.0 ? 0.0 : c / term.coefficient}};
        }
        j["leading_term"] = {{"source", source}, {"coefficient", term.coefficient}, {"exponent", term.exponent},
                             {"fit_at_r", r_far}, {"fit", fit}};
    } else {
        j["leading_term"] = nullptr;
    }
    j["version"] = version;
    emit(a, out, j.dump(2) + "\n");
    return exit_ok;
}

inline int cmd_envelope(const Args& a, std::ostream& out)
{
    const Request req = make_request(a);
    const auto grid = build_grid(a);
    json j;
    j["command"] = "envelope";
    j["input"] = req.describe();
    if (req.symbol) {
        if (req.symbol_json["kind"] != "sum_stable")
            throw UsageError("envelope with --symbol supports sum_stable only");
        if (req.spec.beta != 0.0)
            throw UsageError("sum_stable envelope needs beta = 0");
        const double sa = req.symbol_json["a"].get<double>(), sb = req.symbol_json["b"].get<double>();
        std::vector<double> values(grid.size());
        parallel_for(grid.size(),
                     [&](std::size_t i) { values[i] = sum_stable_oracle(req.spec.d, sa, sb, req.spec.t, grid[i]); });
        std::size_t next = 0;
        const auto check = sum_symbol_envelope_check(req.spec.d, sa, sb, req.spec.t, grid,
                                                     [&](double) { return values[next++]; },
                                                     a.bound_constant.value_or(1.0));
        j["envelope"] = req.spec.t <= 1.0 ? "small-time (index b)" : "large-time (index a)";
        j["min_ratio"] = check.min_ratio;
        j["max_ratio"] = check.max_ratio;
        j["bound_constant"] = check.bound_constant;
        j["holds"] = check.holds;
    } else {
        std::vector<double> ratios(grid.size());
        parallel_for(grid.size(), [&](std::size_t i) {
            ratios[i] = std::abs(compute(req, "auto", grid[i]).value) / stable_envelope(req.spec, grid[i]);
        });
        const double lo = *std::min_element(ratios.begin(), ratios.end());
        const double hi = *std::max_element(ratios.begin(), ratios.end());
        const auto& s = req.spec;
        j["envelope"] = s.beta == 0.0 ? "two-sided, exponent d+alpha"
                        : is_even_integer(s.beta) ? "fractional, even beta"
                                                  : "fractional, beta not even";
        j["min_ratio"] = lo;
        j["max_ratio"] = hi;
        j["holds"] = lo > 0.0 && std::isfinite(hi);
    }
    j["version"] = version;
    emit(a, out, j.dump(2) + "\n");
    return exit_ok;
}

inline int cmd_symbols(const Args& a, std::ostream& out)
{
    std::ostringstream os;
    if (a.json_out) {
        json j = json::array();
        for (const auto& e : symbol_registry())
            j.push_back({{"kind", e.name}, {"parameters", e.parameters}, {"formula", e.formula}});
        os << j.dump(2) << "\n";
    } else {
        for (const auto& e : symbol_registry()) {
            os << e.name << "  eta = " << e.formula << "  params:";
            for (const auto& p : e.parameters)
                os << ' ' << p;
            os << '\n';
        }
    }
    emit(a, out, os.str());
    return exit_ok;
}

inline std::string error_kind(const NumericError& e)
{
    if (dynamic_cast<const PoleHit*>(&e))
        return "PoleHit";
    if (dynamic_cast<const NoDecay*>(&e))
        return "NoDecay";
    if (dynamic_cast<const NonConvergent*>(&e))
        return "NonConvergent";
    return "NumericError";
}

/// Parses argv and runs one subcommand. Results go to `out`, usage messages to `err`.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    Args a;
    CLI::App app{"Heat kernels of radial Levy processes"};
    app.set_version_flag("--version", version);
    app.require_subcommand(1);
    app.set_config("--config", "", "TOML/INI file with option defaults");

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--d", a.d, "dimension (>= 2)");
        sub->add_option("--alpha", a.alpha, "stability index in (0, 2]");
        sub->add_option("--beta", a.beta, "fractional derivative order (>= 0)");
        sub->add_option("--t", a.t, "time (> 0)");
        sub->add_option("--r", a.r, "single radius");
        sub->add_option("--r-min", a.r_min, "grid start");
        sub->add_option("--r-max", a.r_max, "grid end");
        sub->add_option("--points", a.points, "grid size");
        sub->add_flag("--log", a.log, "log-spaced grid");
        sub->add_option("--method", a.method, "mb, series, small-r, closed, oracle, auto (comma list for sweeps)");
        sub->add_option("--symbol", a.symbol, "symbol as inline JSON or @file");
        sub->add_option("--k", a.k, "integration-by-parts order for --symbol");
        sub->add_option("--contour-c", a.contour_c, "contour abscissa");
        sub->add_option("--tol", a.tol, "relative tolerance");
        sub->add_flag("--verify", a.verify, "also run the oracle and report the gap");
        sub->add_option("--out", a.out, "write output to a file");
        sub->add_flag("--json", a.json_out, "JSON output");
        sub->configurable();
    };
    auto* eval = app.add_subcommand("eval", "evaluate one kernel value (JSON)");
    auto* sweep = app.add_subcommand("sweep", "evaluate over an r grid (CSV)");
    auto* compare = app.add_subcommand("compare", "pairwise method differences and tail fits (JSON)");
    auto* envelope = app.add_subcommand("envelope", "ratios against the two-sided envelopes (JSON)");
    auto* symbols = app.add_subcommand("symbols", "list built-in symbols");
    for (auto* sub : {eval, sweep, compare, envelope})
        add_common(sub);
    envelope->add_option("--bound-constant", a.bound_constant, "upper-bound constant for sum_stable");
    symbols->add_flag("--json", a.json_out, "JSON output");
    symbols->add_option("--out", a.out, "write output to a file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, err, err);
        return exit_usage;
    }

    try {
        if (eval->parsed())
            return cmd_eval(a, out);
        if (sweep->parsed())
            return cmd_sweep(a, out);
        if (compare->parsed())
            return cmd_compare(a, out);
        if (envelope->parsed())
            return cmd_envelope(a, out);
        return cmd_symbols(a, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const StripViolation& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const OrderExceeded& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const ParityError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const NumericError& e) {
        const json j{{"error", error_kind(e)}, {"message", e.what()}};
        out << j.dump(2) << '\n';
        return exit_numeric;
    }
}

}  // namespace levykernel::cli
