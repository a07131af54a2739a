#include "clusterperf/report.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include <json.hpp>

namespace clusterperf {

OutputFormat parse_format(std::string_view text) {
    if (text == "csv") {
        return OutputFormat::Csv;
    }
    if (text == "json") {
        return OutputFormat::Json;
    }
    throw ParameterError("format", "unknown output format '" + std::string(text) + "' (expected csv or json)");
}

const std::vector<std::string>& result_columns() {
    static const std::vector<std::string> columns{
        "method", "semantics", "S",        "L",         "lambda",     "mu",     "xi",     "xi_h",
        "eta",    "eta_h",     "mql",      "thrp",      "mrt",        "availability", "p_block", "iterations",
        "converged", "residual", "ci_mql", "ci_thrp",   "ci_mrt",     "wall_ms"};
    return columns;
}

std::string format_number(double value) {
    if (std::isnan(value)) {
        return "nan";
    }
    if (std::isinf(value)) {
        return value > 0 ? "inf" : "-inf";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", value);
    return buf;
}

namespace {

std::string optional_number(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

std::vector<std::string> row_fields(const SweepRow& row) {
    const SystemParams& p = row.params;
    std::vector<std::string> f;
    f.reserve(result_columns().size());
    f.emplace_back(to_string(row.method));
    f.emplace_back(to_string(p.semantics));
    f.push_back(std::to_string(p.servers));
    f.push_back(std::to_string(p.capacity));
    for (double v : {p.lambda, p.mu, p.xi, p.xi_h, p.eta, p.eta_h}) {
        f.push_back(format_number(v));
    }
    if (row.metrics) {
        const Metrics& m = *row.metrics;
        f.push_back(format_number(m.mql));
        f.push_back(format_number(m.thrp));
        f.push_back(optional_number(m.mrt));
        f.push_back(format_number(m.availability));
        f.push_back(format_number(m.p_block));
    } else {
        f.insert(f.end(), 5, std::string());
    }
    f.push_back(row.iterations ? std::to_string(*row.iterations) : std::string());
    f.push_back(row.converged ? (*row.converged ? "true" : "false") : std::string());
    f.push_back(optional_number(row.residual));
    f.push_back(optional_number(row.ci_mql));
    f.push_back(optional_number(row.ci_thrp));
    f.push_back(optional_number(row.ci_mrt));
    f.push_back(format_number(row.wall_ms));
    return f;
}

void write_csv_line(std::ostream& os, const std::vector<std::string>& fields) {
    for (std::size_t k = 0; k < fields.size(); ++k) {
        if (k > 0) {
            os << ',';
        }
        os << fields[k];
    }
    os << '\n';
}

nlohmann::ordered_json number_or_null(const std::optional<double>& v) {
    if (!v || !std::isfinite(*v)) {
        return nullptr;
    }
    // Same 9-digit form as CSV.
    return std::stod(format_number(*v));
}

nlohmann::ordered_json row_json(const SweepRow& row) {
    const SystemParams& p = row.params;
    nlohmann::ordered_json o;
    o["schema_version"] = kCsvSchemaVersion;
    o["method"] = to_string(row.method);
    o["semantics"] = to_string(p.semantics);
    o["S"] = p.servers;
    o["L"] = p.capacity;
    o["lambda"] = number_or_null(p.lambda);
    o["mu"] = number_or_null(p.mu);
    o["xi"] = number_or_null(p.xi);
    o["xi_h"] = number_or_null(p.xi_h);
    o["eta"] = number_or_null(p.eta);
    o["eta_h"] = number_or_null(p.eta_h);
    const auto metric = [&](auto get) -> std::optional<double> {
        if (!row.metrics) {
            return std::nullopt;
        }
        return get(*row.metrics);
    };
    o["mql"] = number_or_null(metric([](const Metrics& m) { return std::optional<double>(m.mql); }));
    o["thrp"] = number_or_null(metric([](const Metrics& m) { return std::optional<double>(m.thrp); }));
    o["mrt"] = number_or_null(metric([](const Metrics& m) { return m.mrt; }));
    o["availability"] = number_or_null(metric([](const Metrics& m) { return std::optional<double>(m.availability); }));
    o["p_block"] = number_or_null(metric([](const Metrics& m) { return std::optional<double>(m.p_block); }));
    o["iterations"] = row.iterations ? nlohmann::ordered_json(*row.iterations) : nlohmann::ordered_json(nullptr);
    o["converged"] = row.converged ? nlohmann::ordered_json(*row.converged) : nlohmann::ordered_json(nullptr);
    o["residual"] = number_or_null(row.residual);
    o["ci_mql"] = number_or_null(row.ci_mql);
    o["ci_thrp"] = number_or_null(row.ci_thrp);
    o["ci_mrt"] = number_or_null(row.ci_mrt);
    o["wall_ms"] = number_or_null(row.wall_ms);
    o["error"] = row.error.empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(row.error);
    return o;
}

}  // namespace

void write_rows_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
    write_csv_line(os, result_columns());
    for (const auto& row : rows) {
        write_csv_line(os, row_fields(row));
    }
}

void write_rows_json(std::ostream& os, const std::vector<SweepRow>& rows) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& row : rows) {
        arr.push_back(row_json(row));
    }
    os << arr.dump(2) << '\n';
}

void write_rows(std::ostream& os, const std::vector<SweepRow>& rows, OutputFormat format) {
    if (format == OutputFormat::Csv) {
        write_rows_csv(os, rows);
    } else {
        write_rows_json(os, rows);
    }
}

void write_comparison_csv(std::ostream& os, const ComparisonReport& report) {
    write_csv_line(os, {"method_a", "method_b", "metric", "value_a", "value_b", "relative", "threshold", "pass"});
    for (const auto& d : report.discrepancies) {
        write_csv_line(os, {std::string(to_string(d.a)), std::string(to_string(d.b)), d.metric,
                            format_number(d.value_a), format_number(d.value_b), format_number(d.relative),
                            format_number(report.threshold), d.pass ? "true" : "false"});
    }
}

void write_comparison_json(std::ostream& os, const ComparisonReport& report) {
    nlohmann::ordered_json o;
    o["schema_version"] = kCsvSchemaVersion;
    o["threshold"] = report.threshold;
    o["all_pass"] = report.all_pass();
    o["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : report.rows) {
        o["rows"].push_back(row_json(row));
    }
    o["discrepancies"] = nlohmann::ordered_json::array();
    for (const auto& d : report.discrepancies) {
        nlohmann::ordered_json x;
        x["method_a"] = to_string(d.a);
        x["method_b"] = to_string(d.b);
        x["metric"] = d.metric;
        x["value_a"] = number_or_null(d.value_a);
        x["value_b"] = number_or_null(d.value_b);
        x["relative"] = number_or_null(d.relative);
        x["pass"] = d.pass;
        o["discrepancies"].push_back(x);
    }
    os << o.dump(2) << '\n';
}

void write_comparison(std::ostream& os, const ComparisonReport& report, OutputFormat format) {
    if (format == OutputFormat::Csv) {
        write_comparison_csv(os, report);
    } else {
        write_comparison_json(os, report);
    }
}

}  // namespace clusterperf
