#ifndef FUZZREC_EXPERIMENT_HPP
#define FUZZREC_EXPERIMENT_HPP

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "dataset.hpp"
#include "error.hpp"
#include "fcm.hpp"
#include "io.hpp"
#include "pipeline.hpp"
#include "pso.hpp"
#include "seed.hpp"
#include "serialize.hpp"

/**
 * @file experiment.hpp
 * @brief Cross-validated sweeps over cluster counts and fuzzifiers, the
 * results log, and aggregation into report tables.
 *
 * Seed scheme, all derived from `master_seed` with derive_seed:
 *   folds  "folds:<dataset>"  {repeat}            ({0} when refolding is off)
 *   FCM    "fcm:<dataset>"    {c, m_index, fold, repeat}
 *   PSO    "pso:<dataset>"    {c, m_index, fold, repeat}
 * The FCM stream carries no method tag, so the baseline and the proposed
 * method of one cell refine the same fitted model.
 */

namespace fuzzrec {

/// 1.1, 1.6, ..., 5.1.
inline std::vector<double> default_m_grid() {
    std::vector<double> m;
    for (int k = 0; k <= 8; ++k) {
        m.push_back(1.1 + 0.5 * k);
    }
    return m;
}

struct DatasetRef {
    /// Label used in seeds, results and reports.
    std::string id;
    std::string path;
    bool has_header = true;
    bool drop_last_column = false;
    std::optional<SyntheticSpec> synthetic;
};

struct ExperimentConfig {
    DatasetRef dataset;
    Scaling normalization = Scaling::zscore;
    std::vector<std::size_t> c_values = {2, 3, 4, 5, 6};
    std::vector<double> m_values = default_m_grid();
    std::size_t folds = 5;
    std::size_t repeats = 10;
    /// Draw a fresh fold plan for every repeat instead of reusing one.
    bool refold_each_repeat = true;
    FcmConfig fcm;
    PsoConfig pso;
    std::uint64_t master_seed = 0;

    void validate() const {
        detail::require(!c_values.empty() && !m_values.empty(), Errc::parameter, "c_values and m_values must be nonempty");
        for (auto c : c_values) {
            detail::require(c >= 2, Errc::parameter, "every cluster count must be >= 2");
        }
        for (double m : m_values) {
            detail::require(std::isfinite(m) && m > 1.0, Errc::parameter, "every m must be > 1");
        }
        detail::require(folds >= 2, Errc::parameter, "folds must be >= 2");
        detail::require(repeats >= 1, Errc::parameter, "repeats must be >= 1");
        detail::require(dataset.synthetic.has_value() || !dataset.path.empty(), Errc::parameter,
                        "dataset needs a path or a synthetic spec");
        fuzzrec::validate(pso);
    }
};

/// Raw (unnormalized) data named by the config.
inline Dataset load_raw(const DatasetRef& ref) {
    Dataset d = ref.synthetic ? gen_synthetic(*ref.synthetic)
                              : load_csv(ref.path, CsvOptions{ref.has_header, ref.drop_last_column});
    if (!ref.id.empty()) {
        d.source_id = ref.id;
    }
    return d;
}

/// Data as the sweep sees it: loaded, then normalized on the full set.
inline Dataset load_dataset(const ExperimentConfig& cfg) {
    return normalize(load_raw(cfg.dataset), cfg.normalization).first;
}

enum class Method { baseline, proposed };

inline const char* to_string(Method m) {
    return m == Method::baseline ? "baseline" : "proposed";
}

inline Method parse_method(std::string_view s) {
    if (s == "baseline") {
        return Method::baseline;
    }
    if (s == "proposed") {
        return Method::proposed;
    }
    throw Error(Errc::parse, "unknown method '" + std::string(s) + "'");
}

struct CellResult {
    std::string dataset_id;
    std::size_t c = 0;
    double m0 = 0.0;
    std::size_t m_index = 0;
    std::size_t fold = 0;
    std::size_t repeat = 0;
    Method method = Method::baseline;
    double train_error = 0.0;
    double test_error = 0.0;
    std::size_t n_train = 0;
    std::size_t n_test = 0;
    std::optional<std::vector<double>> m_star;
    /// Only recorded on request, so logs stay byte-identical across runs.
    std::optional<double> elapsed_ms;
    bool failed = false;
    std::string reason;

    std::string key() const {
        std::ostringstream k;
        k << dataset_id << '|' << c << '|' << m_index << '|' << fold << '|' << repeat << '|' << to_string(method);
        return k.str();
    }
};

inline void to_json(json& j, const CellResult& r) {
    j = json{{"dataset", r.dataset_id}, {"c", r.c},       {"m0", r.m0},         {"m_index", r.m_index},
             {"fold", r.fold},          {"repeat", r.repeat}, {"method", to_string(r.method)}};
    if (r.failed) {
        j["failed"] = true;
        j["reason"] = r.reason;
    } else {
        j["train_error"] = r.train_error;
        j["test_error"] = r.test_error;
    }
    j["n_train"] = r.n_train;
    j["n_test"] = r.n_test;
    if (r.m_star) {
        j["m_star"] = *r.m_star;
    }
    if (r.elapsed_ms) {
        j["elapsed_ms"] = *r.elapsed_ms;
    }
}

inline void from_json(const json& j, CellResult& r) {
    r.dataset_id = j.at("dataset").get<std::string>();
    r.c = j.at("c").get<std::size_t>();
    r.m0 = j.at("m0").get<double>();
    r.m_index = j.at("m_index").get<std::size_t>();
    r.fold = j.at("fold").get<std::size_t>();
    r.repeat = j.at("repeat").get<std::size_t>();
    r.method = parse_method(j.at("method").get<std::string>());
    r.failed = j.value("failed", false);
    r.reason = j.value("reason", std::string{});
    if (!r.failed) {
        r.train_error = j.at("train_error").get<double>();
        r.test_error = j.at("test_error").get<double>();
    }
    r.n_train = j.at("n_train").get<std::size_t>();
    r.n_test = j.at("n_test").get<std::size_t>();
    if (j.contains("m_star")) {
        r.m_star = j.at("m_star").get<std::vector<double>>();
    }
    if (j.contains("elapsed_ms")) {
        r.elapsed_ms = j.at("elapsed_ms").get<double>();
    }
}

inline std::string to_ndjson(const std::vector<CellResult>& results) {
    std::string out;
    for (const auto& r : results) {
        out += json(r).dump();
        out += '\n';
    }
    return out;
}

/// Parses a results log; blank lines are skipped and a truncated last line is ignored.
inline std::vector<CellResult> parse_ndjson(std::istream& in) {
    std::vector<CellResult> out;
    std::string line;
    std::size_t lineno = 0;
    std::optional<std::string> pending_error;
    while (std::getline(in, line)) {
        ++lineno;
        if (detail::trim(line).empty()) {
            continue;
        }
        detail::require(!pending_error, Errc::parse, pending_error.value_or(""));
        try {
            out.push_back(json::parse(line).get<CellResult>());
        } catch (const json::exception& e) {
            pending_error = "results line " + std::to_string(lineno) + ": " + e.what();
        }
    }
    return out;
}

struct RunOptions {
    std::size_t jobs = 1;
    bool record_timing = false;
    /// Keys already present in a results log; their cells are not recomputed.
    std::set<std::string> skip_keys;
    /// Called under a lock as results are produced, in completion order.
    std::function<void(const CellResult&)> on_result;
};

struct CellSpec {
    std::size_t repeat = 0;
    std::size_t c_index = 0;
    std::size_t m_index = 0;
    std::size_t fold = 0;
};

namespace detail {

inline std::vector<CellResult> run_unit(const ExperimentConfig& cfg, const Dataset& data, const FoldPlan& plan,
                                        const CellSpec& s, const RunOptions& opt) {
    const std::string& id = data.source_id;
    const std::size_t c = cfg.c_values[s.c_index];
    const double m0 = cfg.m_values[s.m_index];

    CellResult proto;
    proto.dataset_id = id;
    proto.c = c;
    proto.m0 = m0;
    proto.m_index = s.m_index;
    proto.fold = s.fold;
    proto.repeat = s.repeat;

    CellResult base = proto;
    CellResult prop = proto;
    base.method = Method::baseline;
    prop.method = Method::proposed;
    const bool want_base = !opt.skip_keys.count(base.key());
    const bool want_prop = !opt.skip_keys.count(prop.key());

    const auto train_idx = plan.train_indices(s.fold);
    const auto test_idx = plan.test_indices(s.fold);
    base.n_train = prop.n_train = train_idx.size();
    base.n_test = prop.n_test = test_idx.size();

    using clock = std::chrono::steady_clock;
    auto since_ms = [](clock::time_point t0) {
        return std::chrono::duration<double, std::milli>(clock::now() - t0).count();
    };

    auto fail = [](CellResult& r, const std::string& why) {
        r.failed = true;
        r.reason = why;
    };

    const Dataset train = select_rows(data, train_idx);
    const Dataset test = select_rows(data, test_idx);

    FcmConfig fcm = cfg.fcm;
    fcm.c = c;
    fcm.m = m0;
    fcm.seed = derive_seed(cfg.master_seed, "fcm:" + id, {c, s.m_index, s.fold, s.repeat});

    const auto t0 = clock::now();
    std::optional<FcmModel> model;
    try {
        model = fcm_fit(train, fcm);
    } catch (const Error& e) {
        fail(base, e.what());
        fail(prop, e.what());
    }
    const double fit_ms = since_ms(t0);

    if (model && want_base) {
        const auto t1 = clock::now();
        try {
            const auto scores = evaluate_baseline(*model, train, test);
            base.train_error = scores.train_error;
            base.test_error = scores.test_error;
            require(std::isfinite(base.train_error) && std::isfinite(base.test_error), Errc::numeric,
                    "non-finite baseline error");
        } catch (const Error& e) {
            fail(base, e.what());
        }
        if (opt.record_timing) {
            base.elapsed_ms = fit_ms + since_ms(t1);
        }
    }

    if (model && want_prop) {
        const auto t1 = clock::now();
        PsoConfig pso = cfg.pso;
        pso.seed = derive_seed(cfg.master_seed, "pso:" + id, {c, s.m_index, s.fold, s.repeat});
        try {
            const RefinedModel refined = refine_model(train, *model, pso);
            prop.train_error = refined.train_error;
            prop.test_error = evaluate_refined(refined, test);
            prop.m_star = refined.fuzzifiers.values();
            require(std::isfinite(prop.test_error), Errc::numeric, "non-finite test error");
        } catch (const Error& e) {
            fail(prop, e.what());
            prop.m_star.reset();
        }
        if (opt.record_timing) {
            prop.elapsed_ms = fit_ms + since_ms(t1);
        }
    }

    std::vector<CellResult> out;
    if (want_base) {
        out.push_back(std::move(base));
    }
    if (want_prop) {
        out.push_back(std::move(prop));
    }
    return out;
}

} // namespace detail

/**
 * Runs every (repeat, C, m, fold) unit; each unit fits FCM once and scores both
 * methods. Returned results are in unit order regardless of `jobs`. Per-cell
 * failures are recorded, never thrown.
 */
inline std::vector<CellResult> run_experiment(const ExperimentConfig& cfg, const Dataset& data,
                                              const RunOptions& opt = {}) {
    cfg.validate();
    validate(data);
    detail::require(cfg.folds <= data.size(), Errc::parameter,
                    "folds (" + std::to_string(cfg.folds) + ") exceed the number of rows (" +
                        std::to_string(data.size()) + ")");
    const std::string& id = data.source_id;

    std::vector<FoldPlan> plans;
    for (std::size_t r = 0; r < cfg.repeats; ++r) {
        const std::uint64_t counter = cfg.refold_each_repeat ? r : 0;
        plans.push_back(kfold_split(data.size(), cfg.folds, derive_seed(cfg.master_seed, "folds:" + id, {counter})));
    }

    std::vector<CellSpec> units;
    for (std::size_t r = 0; r < cfg.repeats; ++r) {
        for (std::size_t ci = 0; ci < cfg.c_values.size(); ++ci) {
            for (std::size_t mi = 0; mi < cfg.m_values.size(); ++mi) {
                for (std::size_t f = 0; f < cfg.folds; ++f) {
                    units.push_back({r, ci, mi, f});
                }
            }
        }
    }

    std::vector<std::vector<CellResult>> slots(units.size());
    std::atomic<std::size_t> next{0};
    std::mutex mu;
    auto worker = [&] {
        for (std::size_t u = next++; u < units.size(); u = next++) {
            auto res = detail::run_unit(cfg, data, plans[units[u].repeat], units[u], opt);
            std::lock_guard<std::mutex> lock(mu);
            if (opt.on_result) {
                for (const auto& r : res) {
                    opt.on_result(r);
                }
            }
            slots[u] = std::move(res);
        }
    };

    const std::size_t jobs = std::max<std::size_t>(1, std::min(opt.jobs, units.size()));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < jobs; ++t) {
            pool.emplace_back(worker);
        }
        for (auto& t : pool) {
            t.join();
        }
    }

    std::vector<CellResult> out;
    for (auto& s : slots) {
        for (auto& r : s) {
            out.push_back(std::move(r));
        }
    }
    return out;
}

inline std::vector<CellResult> run_experiment(const ExperimentConfig& cfg, const RunOptions& opt = {}) {
    return run_experiment(cfg, load_dataset(cfg), opt);
}

// ---------------------------------------------------------------------------
// Aggregation

struct Stat {
    double mean = 0.0;
    /// Sample standard deviation; 0 for a single value.
    double std = 0.0;
    std::size_t count = 0;

    bool operator==(const Stat&) const = default;
};

inline Stat summarize(const std::vector<double>& v) {
    Stat s;
    s.count = v.size();
    if (v.empty()) {
        return s;
    }
    double sum = 0.0;
    for (double x : v) {
        sum += x;
    }
    s.mean = sum / static_cast<double>(v.size());
    if (v.size() > 1) {
        double ss = 0.0;
        for (double x : v) {
            ss += (x - s.mean) * (x - s.mean);
        }
        s.std = std::sqrt(ss / static_cast<double>(v.size() - 1));
    }
    return s;
}

/// (n_train * train + n_test * test) / (n_train + n_test).
inline double weighted_total(double train, double test, std::size_t n_train, std::size_t n_test) {
    detail::require(n_train + n_test > 0, Errc::parameter, "total needs at least one row");
    return (static_cast<double>(n_train) * train + static_cast<double>(n_test) * test) /
           static_cast<double>(n_train + n_test);
}

struct ReportRow {
    std::string dataset;
    Method method = Method::baseline;
    std::size_t c = 0;
    /// Selected grid value, the one with the lowest mean train error.
    double m0 = 0.0;
    std::size_t m_index = 0;
    Stat train;
    Stat test;
    /// Mean over cells of the size-weighted train/test total.
    double total = 0.0;
    /// Elementwise mean of m* over the selected cells (proposed only).
    std::vector<double> m_star;

    bool operator==(const ReportRow&) const = default;
};

struct GrandMean {
    std::string dataset;
    Method method = Method::baseline;
    /// Mean of the per-C totals.
    double mean = 0.0;

    bool operator==(const GrandMean&) const = default;
};

struct ReportTable {
    /// Sorted by dataset, C, method.
    std::vector<ReportRow> rows;
    std::vector<GrandMean> grand_means;
    std::size_t failed_cells = 0;

    bool operator==(const ReportTable&) const = default;
};

/**
 * Deduplicates by key (first record wins), drops failed cells, and for every
 * (dataset, method, C) keeps the grid m with the lowest mean train error.
 */
inline ReportTable aggregate(const std::vector<CellResult>& results) {
    detail::require(!results.empty(), Errc::empty_input, "no results to aggregate");

    ReportTable table;
    std::set<std::string> seen;
    using GroupKey = std::tuple<std::string, std::size_t, int, std::size_t>; // dataset, c, method, m_index
    std::map<GroupKey, std::vector<const CellResult*>> groups;
    for (const auto& r : results) {
        if (!seen.insert(r.key()).second) {
            continue;
        }
        if (r.failed) {
            ++table.failed_cells;
            continue;
        }
        groups[{r.dataset_id, r.c, static_cast<int>(r.method), r.m_index}].push_back(&r);
    }

    std::map<std::tuple<std::string, std::size_t, int>, ReportRow> best;
    for (auto& [key, cells] : groups) {
        // Fixed summation order makes the reduction independent of input order.
        std::sort(cells.begin(), cells.end(), [](const CellResult* a, const CellResult* b) {
            return std::tie(a->repeat, a->fold) < std::tie(b->repeat, b->fold);
        });
        const auto& [dataset, c, method, m_index] = key;
        std::vector<double> tr, te;
        double total = 0.0;
        for (const auto* r : cells) {
            tr.push_back(r->train_error);
            te.push_back(r->test_error);
            total += weighted_total(r->train_error, r->test_error, r->n_train, r->n_test);
        }
        ReportRow row;
        row.dataset = dataset;
        row.method = static_cast<Method>(method);
        row.c = c;
        row.m0 = cells.front()->m0;
        row.m_index = m_index;
        row.train = summarize(tr);
        row.test = summarize(te);
        row.total = total / static_cast<double>(cells.size());
        if (row.method == Method::proposed) {
            std::vector<double> acc;
            std::size_t n = 0;
            for (const auto* r : cells) {
                if (!r->m_star) {
                    continue;
                }
                if (acc.empty()) {
                    acc.assign(r->m_star->size(), 0.0);
                }
                if (acc.size() == r->m_star->size()) {
                    for (std::size_t j = 0; j < acc.size(); ++j) {
                        acc[j] += (*r->m_star)[j];
                    }
                    ++n;
                }
            }
            for (double& a : acc) {
                a /= static_cast<double>(n);
            }
            row.m_star = std::move(acc);
        }

        const std::tuple<std::string, std::size_t, int> slot{dataset, c, method};
        auto it = best.find(slot);
        if (it == best.end() || row.train.mean < it->second.train.mean) {
            best[slot] = std::move(row);
        }
    }

    std::map<std::pair<std::string, int>, std::vector<double>> per_method;
    for (auto& [slot, row] : best) {
        per_method[{row.dataset, static_cast<int>(row.method)}].push_back(row.total);
        table.rows.push_back(std::move(row));
    }
    std::stable_sort(table.rows.begin(), table.rows.end(), [](const ReportRow& a, const ReportRow& b) {
        return std::tie(a.dataset, a.c, a.method) < std::tie(b.dataset, b.c, b.method);
    });
    for (const auto& [key, totals] : per_method) {
        table.grand_means.push_back({key.first, static_cast<Method>(key.second), summarize(totals).mean});
    }
    return table;
}

inline void to_json(json& j, const Stat& s) {
    j = json{{"mean", s.mean}, {"std", s.std}, {"count", s.count}};
}

inline void from_json(const json& j, Stat& s) {
    s.mean = j.at("mean").get<double>();
    s.std = j.at("std").get<double>();
    s.count = j.at("count").get<std::size_t>();
}

inline void to_json(json& j, const ReportRow& r) {
    j = json{{"dataset", r.dataset}, {"method", to_string(r.method)}, {"c", r.c},         {"m0", r.m0},
             {"m_index", r.m_index}, {"train", r.train},              {"test", r.test}, {"total", r.total},
             {"m_star", r.m_star}};
}

inline void from_json(const json& j, ReportRow& r) {
    r.dataset = j.at("dataset").get<std::string>();
    r.method = parse_method(j.at("method").get<std::string>());
    r.c = j.at("c").get<std::size_t>();
    r.m0 = j.at("m0").get<double>();
    r.m_index = j.at("m_index").get<std::size_t>();
    r.train = j.at("train").get<Stat>();
    r.test = j.at("test").get<Stat>();
    r.total = j.at("total").get<double>();
    r.m_star = j.at("m_star").get<std::vector<double>>();
}

inline void to_json(json& j, const GrandMean& g) {
    j = json{{"dataset", g.dataset}, {"method", to_string(g.method)}, {"mean", g.mean}};
}

inline void from_json(const json& j, GrandMean& g) {
    g.dataset = j.at("dataset").get<std::string>();
    g.method = parse_method(j.at("method").get<std::string>());
    g.mean = j.at("mean").get<double>();
}

inline void to_json(json& j, const ReportTable& t) {
    j = json{{"rows", t.rows}, {"grand_means", t.grand_means}, {"failed_cells", t.failed_cells}};
}

inline void from_json(const json& j, ReportTable& t) {
    t.rows = j.at("rows").get<std::vector<ReportRow>>();
    t.grand_means = j.at("grand_means").get<std::vector<GrandMean>>();
    t.failed_cells = j.at("failed_cells").get<std::size_t>();
}

// ---------------------------------------------------------------------------
// Config files

inline void to_json(json& j, const SyntheticSpec& s) {
    std::vector<std::vector<double>> centers;
    for (const auto& c : s.blob_centers) {
        centers.push_back({c[0], c[1]});
    }
    j = json{{"blob_count", s.blob_count}, {"points_per_blob", s.points_per_blob}, {"blob_centers", centers},
             {"blob_stds", s.blob_stds},   {"seed", s.seed}};
}

inline void from_json(const json& j, SyntheticSpec& s) {
    s.seed = j.value("seed", s.seed);
    s.points_per_blob = j.value("points_per_blob", s.points_per_blob);
    if (j.contains("blob_centers")) {
        s.blob_centers.clear();
        for (const auto& c : j.at("blob_centers")) {
            const auto v = c.get<std::vector<double>>();
            detail::require(v.size() == 2, Errc::structure, "blob centers are 2-D");
            s.blob_centers.push_back({v[0], v[1]});
        }
        s.blob_count = s.blob_centers.size();
    }
    s.blob_count = j.value("blob_count", s.blob_count);
    if (j.contains("blob_stds")) {
        s.blob_stds = j.at("blob_stds").get<std::vector<double>>();
    } else if (j.contains("blob_std")) {
        s.blob_stds.assign(s.blob_count, j.at("blob_std").get<double>());
    } else if (s.blob_stds.size() != s.blob_count) {
        s.blob_stds.assign(s.blob_count, s.blob_stds.empty() ? 0.3 : s.blob_stds.front());
    }
}

inline void to_json(json& j, const ExperimentConfig& cfg) {
    json ds{{"id", cfg.dataset.id}};
    if (cfg.dataset.synthetic) {
        ds["synthetic"] = *cfg.dataset.synthetic;
    } else {
        ds["path"] = cfg.dataset.path;
        ds["has_header"] = cfg.dataset.has_header;
        ds["drop_last_column"] = cfg.dataset.drop_last_column;
    }
    j = json{{"dataset", ds},
             {"normalization", to_string(cfg.normalization)},
             {"c_values", cfg.c_values},
             {"m_values", cfg.m_values},
             {"folds", cfg.folds},
             {"repeats", cfg.repeats},
             {"refold_each_repeat", cfg.refold_each_repeat},
             {"master_seed", cfg.master_seed},
             {"fcm", {{"tol", cfg.fcm.tol}, {"max_iter", cfg.fcm.max_iter}}},
             {"pso",
              {{"particles", cfg.pso.particles},
               {"max_iter", cfg.pso.max_iter},
               {"inertia_w", cfg.pso.inertia_w},
               {"c1", cfg.pso.cognitive_c1},
               {"c2", cfg.pso.social_c2},
               {"stall_window", cfg.pso.stall_window},
               {"stall_eps", cfg.pso.stall_eps},
               {"bounds_low", cfg.pso.bounds_low},
               {"bounds_high", cfg.pso.bounds_high}}}};
}

/// Missing keys keep their defaults. A relative dataset path is resolved
/// against `base_dir` when given.
inline ExperimentConfig parse_experiment_config(const json& j, const std::filesystem::path& base_dir = {}) {
    return with_json_errors("experiment config", [&] {
        ExperimentConfig cfg;
        const auto& ds = j.at("dataset");
        cfg.dataset.id = ds.value("id", std::string{});
        if (ds.contains("synthetic")) {
            cfg.dataset.synthetic = ds.at("synthetic").get<SyntheticSpec>();
            if (cfg.dataset.id.empty()) {
                cfg.dataset.id = "synthetic";
            }
        } else {
            std::filesystem::path p = ds.at("path").get<std::string>();
            if (p.is_relative() && !base_dir.empty()) {
                p = base_dir / p;
            }
            cfg.dataset.path = p.string();
            cfg.dataset.has_header = ds.value("has_header", true);
            cfg.dataset.drop_last_column = ds.value("drop_last_column", false);
            if (cfg.dataset.id.empty()) {
                cfg.dataset.id = std::filesystem::path(cfg.dataset.path).stem().string();
            }
        }
        if (j.contains("normalization")) {
            cfg.normalization = parse_scaling(j.at("normalization").get<std::string>());
        }
        cfg.c_values = j.value("c_values", cfg.c_values);
        cfg.m_values = j.value("m_values", cfg.m_values);
        cfg.folds = j.value("folds", cfg.folds);
        cfg.repeats = j.value("repeats", cfg.repeats);
        cfg.refold_each_repeat = j.value("refold_each_repeat", cfg.refold_each_repeat);
        cfg.master_seed = j.value("master_seed", cfg.master_seed);
        if (j.contains("fcm")) {
            const auto& f = j.at("fcm");
            cfg.fcm.tol = f.value("tol", cfg.fcm.tol);
            cfg.fcm.max_iter = f.value("max_iter", cfg.fcm.max_iter);
        }
        if (j.contains("pso")) {
            const auto& p = j.at("pso");
            cfg.pso.particles = p.value("particles", cfg.pso.particles);
            cfg.pso.max_iter = p.value("max_iter", cfg.pso.max_iter);
            cfg.pso.inertia_w = p.value("inertia_w", cfg.pso.inertia_w);
            cfg.pso.cognitive_c1 = p.value("c1", cfg.pso.cognitive_c1);
            cfg.pso.social_c2 = p.value("c2", cfg.pso.social_c2);
            cfg.pso.stall_window = p.value("stall_window", cfg.pso.stall_window);
            cfg.pso.stall_eps = p.value("stall_eps", cfg.pso.stall_eps);
            cfg.pso.bounds_low = p.value("bounds_low", cfg.pso.bounds_low);
            cfg.pso.bounds_high = p.value("bounds_high", cfg.pso.bounds_high);
        }
        cfg.validate();
        return cfg;
    });
}

inline ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
    const std::string text = read_file(path);
    const json j = with_json_errors("config '" + path.string() + "'", [&] { return json::parse(text); });
    return parse_experiment_config(j, path.parent_path());
}

} // namespace fuzzrec

#endif
