#ifndef FUZZREC_REPORT_HPP
#define FUZZREC_REPORT_HPP

#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>
#include <string>
#include <vector>

#include "degranulation.hpp"
#include "error.hpp"
#include "experiment.hpp"
#include "pipeline.hpp"
#include "types.hpp"

/**
 * @file report.hpp
 * @brief Text renderings of report tables and plot data. Every renderer is a
 * pure function of its input, so output is byte-stable.
 */

namespace fuzzrec {

enum class ReportFormat { csv, json, markdown };

inline ReportFormat parse_report_format(std::string_view s) {
    if (s == "csv") {
        return ReportFormat::csv;
    }
    if (s == "json") {
        return ReportFormat::json;
    }
    if (s == "markdown" || s == "md") {
        return ReportFormat::markdown;
    }
    throw Error(Errc::parameter, "unknown report format '" + std::string(s) + "' (csv, json, markdown)");
}

namespace detail {

/// Shortest decimal form that round-trips.
inline std::string num(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

inline std::string join(const std::vector<double>& v, const char* sep, int digits = -1) {
    std::string out;
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (k) {
            out += sep;
        }
        out += digits < 0 ? num(v[k]) : fixed(v[k], digits);
    }
    return out;
}

inline const ReportRow* find_row(const ReportTable& t, const std::string& dataset, std::size_t c, Method m) {
    for (const auto& r : t.rows) {
        if (r.dataset == dataset && r.c == c && r.method == m) {
            return &r;
        }
    }
    return nullptr;
}

inline std::string render_markdown(const ReportTable& t) {
    std::string out;
    std::vector<std::string> datasets;
    for (const auto& r : t.rows) {
        if (datasets.empty() || datasets.back() != r.dataset) {
            datasets.push_back(r.dataset);
        }
    }
    if (datasets.empty()) {
        return "| C | Row | FCM | Proposed |\n|---|---|---|---|\n";
    }

    auto cell = [](const ReportRow* r, auto&& fn) { return r ? fn(*r) : std::string("-"); };
    auto mean_std = [](const Stat& s) { return fixed(s.mean, 4) + " ± " + fixed(s.std, 4); };

    for (std::size_t d = 0; d < datasets.size(); ++d) {
        const auto& ds = datasets[d];
        if (d) {
            out += '\n';
        }
        out += "### " + ds + "\n\n| C | Row | FCM | Proposed |\n|---|---|---|---|\n";
        std::set<std::size_t> cs;
        for (const auto& r : t.rows) {
            if (r.dataset == ds) {
                cs.insert(r.c);
            }
        }
        for (std::size_t c : cs) {
            const auto* b = find_row(t, ds, c, Method::baseline);
            const auto* p = find_row(t, ds, c, Method::proposed);
            const std::string C = std::to_string(c);
            out += "| " + C + " | Train | " + cell(b, [&](const ReportRow& r) { return mean_std(r.train); }) + " | " +
                   cell(p, [&](const ReportRow& r) { return mean_std(r.train); }) + " |\n";
            out += "| " + C + " | Test | " + cell(b, [&](const ReportRow& r) { return mean_std(r.test); }) + " | " +
                   cell(p, [&](const ReportRow& r) { return mean_std(r.test); }) + " |\n";
            out += "| " + C + " | Total | " + cell(b, [](const ReportRow& r) { return fixed(r.total, 4); }) + " | " +
                   cell(p, [](const ReportRow& r) { return fixed(r.total, 4); }) + " |\n";
            out += "| " + C + " | m & m* | " + cell(b, [](const ReportRow& r) { return fixed(r.m0, 2); }) + " | " +
                   cell(p, [](const ReportRow& r) { return "[" + join(r.m_star, ", ", 2) + "]"; }) + " |\n";
        }
        std::string gb = "-";
        std::string gp = "-";
        for (const auto& g : t.grand_means) {
            if (g.dataset == ds) {
                (g.method == Method::baseline ? gb : gp) = fixed(g.mean, 4);
            }
        }
        out += "| Mean | Total | " + gb + " | " + gp + " |\n";
    }
    out += "\nFailed cells: " + std::to_string(t.failed_cells) + "\n";
    return out;
}

inline std::string render_csv(const ReportTable& t) {
    std::string out = "dataset,method,c,m0,train_mean,train_std,test_mean,test_std,total,cells,m_star\n";
    for (const auto& r : t.rows) {
        out += r.dataset + ',' + to_string(r.method) + ',' + std::to_string(r.c) + ',' + num(r.m0) + ',' +
               num(r.train.mean) + ',' + num(r.train.std) + ',' + num(r.test.mean) + ',' + num(r.test.std) + ',' +
               num(r.total) + ',' + std::to_string(r.train.count) + ',' + join(r.m_star, " ") + '\n';
    }
    return out;
}

} // namespace detail

inline std::string emit_report(const ReportTable& table, ReportFormat format) {
    switch (format) {
    case ReportFormat::csv:
        return detail::render_csv(table);
    case ReportFormat::json:
        return json(table).dump(2) + "\n";
    case ReportFormat::markdown:
        return detail::render_markdown(table);
    }
    return {};
}

inline ReportTable parse_report_json(const std::string& text) {
    return with_json_errors("report", [&] { return json::parse(text).get<ReportTable>(); });
}

enum class PlotKind { pso_history, fuzzifier_trace, membership_grid, error_bars };

inline PlotKind parse_plot_kind(std::string_view s) {
    if (s == "pso_history") {
        return PlotKind::pso_history;
    }
    if (s == "fuzzifier_trace") {
        return PlotKind::fuzzifier_trace;
    }
    if (s == "membership_grid") {
        return PlotKind::membership_grid;
    }
    if (s == "error_bars") {
        return PlotKind::error_bars;
    }
    throw Error(Errc::parameter, "unknown plot kind '" + std::string(s) +
                                     "' (pso_history, fuzzifier_trace, membership_grid, error_bars)");
}

/// iteration, g_best residual norm.
inline std::string emit_pso_history(const RefinedModel& model) {
    std::string out = "iteration\tg_best\n";
    for (std::size_t i = 0; i < model.pso_history.size(); ++i) {
        out += std::to_string(i) + '\t' + detail::num(model.pso_history[i]) + '\n';
    }
    return out;
}

/// iteration, m_1 .. m_C of g_best.
inline std::string emit_fuzzifier_trace(const RefinedModel& model) {
    std::string out = "iteration";
    for (std::size_t j = 0; j < model.fuzzifiers.size(); ++j) {
        out += "\tm_" + std::to_string(j + 1);
    }
    out += '\n';
    for (std::size_t i = 0; i < model.fuzzifier_trace.size(); ++i) {
        out += std::to_string(i) + '\t' + detail::join(model.fuzzifier_trace[i], "\t") + '\n';
    }
    return out;
}

struct GridOptions {
    std::size_t resolution = 50;
    /// Fraction of the data range added on each side.
    double margin = 0.1;
};

/**
 * Membership grades of a regular 2-D grid around the data hull, one row per
 * grid point: x, y, mu_1 .. mu_C. With per-cluster fuzzifiers the grade is
 * the powered grade raised to 1/m_j, i.e. the unpowered membership.
 */
inline std::string emit_membership_grid(const Prototypes& V, const FuzzifierVector& m, const Dataset& hull,
                                        const GridOptions& opt = {}) {
    detail::require(hull.dims() == 2 && V.dims() == 2, Errc::dimension,
                    "membership grid needs 2-D data, got " + std::to_string(hull.dims()) + " columns");
    detail::require(opt.resolution >= 2, Errc::parameter, "grid resolution must be >= 2");
    validate(hull);

    const Eigen::RowVector2d lo = hull.rows.colwise().minCoeff();
    const Eigen::RowVector2d hi = hull.rows.colwise().maxCoeff();
    const Eigen::RowVector2d pad = (hi - lo) * opt.margin;
    const Eigen::RowVector2d a = lo - pad;
    const Eigen::RowVector2d b = hi + pad;

    const auto n = static_cast<Eigen::Index>(opt.resolution);
    Dataset grid;
    grid.rows.resize(n * n, 2);
    for (Eigen::Index iy = 0; iy < n; ++iy) {
        for (Eigen::Index ix = 0; ix < n; ++ix) {
            const double tx = static_cast<double>(ix) / static_cast<double>(n - 1);
            const double ty = static_cast<double>(iy) / static_cast<double>(n - 1);
            grid.rows(iy * n + ix, 0) = a(0) + tx * (b(0) - a(0));
            grid.rows(iy * n + ix, 1) = a(1) + ty * (b(1) - a(1));
        }
    }
    const auto P = powered_memberships(grid, V, m);

    std::string out = "x\ty";
    for (std::size_t j = 0; j < V.count(); ++j) {
        out += "\tmu_" + std::to_string(j + 1);
    }
    out += '\n';
    for (Eigen::Index i = 0; i < grid.rows.rows(); ++i) {
        out += detail::num(grid.rows(i, 0)) + '\t' + detail::num(grid.rows(i, 1));
        for (Eigen::Index j = 0; j < P.grades_pow.rows(); ++j) {
            out += '\t' + detail::num(std::pow(P.grades_pow(j, i), 1.0 / m[static_cast<std::size_t>(j)]));
        }
        out += '\n';
    }
    return out;
}

/// c, method, split, mean, std for every report row.
inline std::string emit_error_bars(const ReportTable& table) {
    std::string out = "dataset\tc\tmethod\tsplit\tmean\tstd\n";
    for (const auto& r : table.rows) {
        const std::string head = r.dataset + '\t' + std::to_string(r.c) + '\t' + to_string(r.method) + '\t';
        out += head + "train\t" + detail::num(r.train.mean) + '\t' + detail::num(r.train.std) + '\n';
        out += head + "test\t" + detail::num(r.test.mean) + '\t' + detail::num(r.test.std) + '\n';
    }
    return out;
}

} // namespace fuzzrec

#endif
