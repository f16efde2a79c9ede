#ifndef FUZZREC_TOOLS_CLI_HPP
#define FUZZREC_TOOLS_CLI_HPP

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <fuzzrec/dataset.hpp>
#include <fuzzrec/error.hpp>
#include <fuzzrec/experiment.hpp>
#include <fuzzrec/io.hpp>
#include <fuzzrec/pipeline.hpp>
#include <fuzzrec/report.hpp>
#include <fuzzrec/seed.hpp>
#include <fuzzrec/serialize.hpp>

// Command-line frontend. run_cli is the whole program minus process setup so
// tests can drive it in-process.

namespace fuzzrec::cli {

inline int exit_code(ErrorCategory c) {
    switch (c) {
    case ErrorCategory::usage:
        return 1;
    case ErrorCategory::data:
        return 2;
    case ErrorCategory::numeric:
        return 3;
    }
    return 2;
}

struct DataFlags {
    std::string path;
    bool header = false;
    bool drop_last = false;
    std::string normalize = "zscore";

    void add_to(CLI::App* app, bool required = true) {
        auto* opt = app->add_option("--data", path, "Input CSV of numeric rows");
        if (required) {
            opt->required();
        }
        app->add_flag("--header", header, "First CSV line is a header");
        app->add_flag("--drop-last", drop_last, "Ignore the last CSV column (e.g. a class label)");
        app->add_option("--normalize", normalize, "none, zscore or minmax")->capture_default_str();
    }

    Dataset load() const { return load_csv(path, CsvOptions{header, drop_last}); }
};

inline void write_output(const std::string& path, const std::string& content, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << content;
    } else {
        atomic_write(path, content);
    }
}

inline json read_json_file(const std::string& path) {
    const std::string text = read_file(path);
    return with_json_errors("'" + path + "'", [&] { return json::parse(text); });
}

/// A saved model: either a plain FCM fit or a refined model, plus the scaling
/// that maps raw rows into model space.
struct SavedModel {
    std::optional<FcmModel> fcm;
    Prototypes trained;
    std::optional<RefinedModel> refined;
    NormalizationParams scaling;

    Prototypes prototypes() const { return refined ? refined->prototypes : trained; }

    FuzzifierVector fuzzifiers() const {
        return refined ? refined->fuzzifiers : FuzzifierVector::uniform(trained.count(), fcm->fuzzifier);
    }
};

inline SavedModel load_model(const std::string& path) {
    const json j = read_json_file(path);
    return with_json_errors("model '" + path + "'", [&] {
        SavedModel m;
        const auto kind = j.at("kind").get<std::string>();
        m.scaling = j.at("normalization").get<NormalizationParams>();
        if (kind == "fcm") {
            m.fcm = j.at("model").get<FcmModel>();
            m.trained = j.at("trained_prototypes").get<Prototypes>();
        } else if (kind == "refined") {
            m.refined = j.at("model").get<RefinedModel>();
        } else {
            throw Error(Errc::structure, "unknown model kind '" + kind + "'");
        }
        return m;
    });
}

/// Raw rows mapped into model space with the stored scaling parameters.
inline Dataset to_model_space(Dataset raw, const NormalizationParams& p) {
    detail::require(static_cast<Eigen::Index>(raw.dims()) == p.center.size(), Errc::dimension,
                    "data has " + std::to_string(raw.dims()) + " columns, model expects " +
                        std::to_string(p.center.size()));
    raw.rows = apply_normalization(raw.rows, p);
    return raw;
}

inline std::uint64_t default_seed() {
    if (const char* env = std::getenv("FUZZREC_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw Error(Errc::parameter, std::string("FUZZREC_SEED is not an unsigned integer: ") + env);
        }
    }
    return 0;
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Fuzzy c-means granulation and degranulation with per-cluster fuzzifiers tuned by PSO"};
    app.name("fuzzrec");
    app.require_subcommand(1);

    std::uint64_t seed = 0;
    std::string out_path;
    auto add_seed = [&](CLI::App* s) {
        s->add_option("--seed", seed, "Random seed (default: $FUZZREC_SEED or 0)");
    };
    auto add_out = [&](CLI::App* s, const char* what) { return s->add_option("--out", out_path, what); };

    // gen-synthetic
    auto* gen = app.add_subcommand("gen-synthetic", "Write the nine-blob 2-D synthetic set as CSV");
    std::size_t per_blob = 50;
    double blob_std = 0.3;
    add_seed(gen);
    add_out(gen, "Output CSV (default stdout)");
    gen->add_option("--points-per-blob", per_blob, "Points per blob")->capture_default_str();
    gen->add_option("--std", blob_std, "Blob standard deviation")->capture_default_str();

    // fit-fcm
    auto* fit = app.add_subcommand("fit-fcm", "Fit classic FCM and report its reconstruction error");
    DataFlags fit_data;
    std::size_t clusters = 2;
    double m = 2.0;
    fit_data.add_to(fit);
    fit->add_option("--clusters", clusters, "Number of clusters C")->required();
    fit->add_option("--m", m, "Fuzzification coefficient (> 1)")->capture_default_str();
    add_seed(fit);
    add_out(fit, "Output model JSON (default stdout)");

    // refine
    auto* ref = app.add_subcommand("refine", "Fit FCM, then tune per-cluster fuzzifiers with PSO");
    DataFlags ref_data;
    double m0 = 2.0;
    std::size_t particles = PsoConfig{}.particles;
    std::size_t pso_iters = PsoConfig{}.max_iter;
    ref_data.add_to(ref);
    ref->add_option("--clusters", clusters, "Number of clusters C")->required();
    ref->add_option("--m0", m0, "Initial fuzzifier for every cluster (> 1)")->capture_default_str();
    ref->add_option("--pso-particles", particles, "Swarm size")->capture_default_str();
    ref->add_option("--pso-iters", pso_iters, "Swarm iterations (0 keeps the uniform vector)")->capture_default_str();
    add_seed(ref);
    add_out(ref, "Output model JSON (default stdout)");

    // evaluate
    auto* ev = app.add_subcommand("evaluate", "Reconstruction error of a data set under a saved model");
    DataFlags ev_data;
    std::string model_path;
    ev_data.add_to(ev);
    ev->add_option("--model", model_path, "Model JSON from fit-fcm or refine")->required();
    add_out(ev, "Output JSON (default stdout)");

    // sweep
    auto* sw = app.add_subcommand("sweep", "Cross-validated sweep over C and m; writes an NDJSON results log");
    std::string config_path;
    std::vector<std::size_t> sw_clusters;
    std::vector<double> sw_m;
    std::size_t folds = 5;
    std::size_t repeats = 10;
    std::size_t jobs = 1;
    std::string sw_normalize;
    bool timing = false;
    bool quiet = false;
    sw->add_option("--config", config_path, "Experiment config JSON")->required();
    add_out(sw, "Results log (NDJSON); existing records are kept and skipped")->required();
    sw->add_option("--clusters", sw_clusters, "Cluster counts (overrides config)");
    sw->add_option("--m", sw_m, "Fuzzifier grid (overrides config)");
    sw->add_option("--folds", folds, "Cross-validation folds");
    sw->add_option("--repeats", repeats, "Repeats of the whole CV");
    sw->add_option("--pso-particles", particles, "Swarm size");
    sw->add_option("--pso-iters", pso_iters, "Swarm iterations");
    sw->add_option("--normalize", sw_normalize, "none, zscore or minmax");
    sw->add_option("--jobs", jobs, "Parallel cells")->capture_default_str();
    sw->add_flag("--timing", timing, "Record per-cell wall time in the log");
    sw->add_flag("--quiet", quiet, "No per-cell log lines on stderr");
    add_seed(sw);

    // report
    auto* rep = app.add_subcommand("report", "Aggregate a results log into a table");
    std::string in_path;
    std::string format = "markdown";
    rep->add_option("--in", in_path, "Results log (NDJSON)")->required();
    rep->add_option("--format", format, "csv, json or markdown")->capture_default_str();
    add_out(rep, "Output file (default stdout)");

    // plot-data
    auto* plot = app.add_subcommand("plot-data", "Tab-separated plot data");
    std::string kind;
    std::size_t resolution = 50;
    DataFlags plot_data;
    plot->add_option("--kind", kind, "pso_history, fuzzifier_trace, membership_grid or error_bars")->required();
    plot->add_option("--model", model_path, "Model JSON (pso_history, fuzzifier_trace, membership_grid)");
    plot->add_option("--in", in_path, "Results log (error_bars)");
    plot_data.add_to(plot, false);
    plot->add_option("--resolution", resolution, "Grid points per axis")->capture_default_str();
    add_out(plot, "Output TSV (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n";
        const CLI::App* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
        err << sub->help();
        return 1;
    }

    try {
        auto* chosen = app.get_subcommands().front();
        const bool seed_given = chosen->get_option_no_throw("--seed") != nullptr && chosen->count("--seed") > 0;
        if (!seed_given) {
            seed = default_seed();
        }

        if (chosen == gen) {
            SyntheticSpec spec;
            spec.seed = seed;
            spec.points_per_blob = per_blob;
            spec.blob_stds.assign(spec.blob_count, blob_std);
            const Dataset d = gen_synthetic(spec);
            std::ostringstream csv;
            write_csv(csv, d.rows, d.feature_names);
            write_output(out_path, csv.str(), out);
            return 0;
        }

        if (chosen == fit || chosen == ref) {
            const DataFlags& df = chosen == fit ? fit_data : ref_data;
            const auto [data, scaling] = normalize(df.load(), parse_scaling(df.normalize));
            FcmConfig fcm;
            fcm.c = clusters;
            fcm.m = chosen == fit ? m : m0;
            fcm.seed = derive_seed(seed, "fcm", {});
            FcmModel model = fcm_fit(data, fcm);

            json doc;
            doc["normalization"] = scaling;
            if (chosen == fit) {
                const Prototypes trained = baseline_prototypes(data, model);
                doc["kind"] = "fcm";
                doc["train_error"] = baseline_error(data, trained, model.fuzzifier);
                doc["trained_prototypes"] = trained;
                doc["model"] = model;
            } else {
                PsoConfig pso;
                pso.particles = particles;
                pso.max_iter = pso_iters;
                pso.seed = derive_seed(seed, "pso", {});
                const RefinedModel refined = refine_model(data, std::move(model), pso);
                doc["kind"] = "refined";
                doc["train_error"] = refined.train_error;
                doc["baseline_train_error"] = refined.baseline_train_error;
                doc["model"] = refined;
            }
            write_output(out_path, doc.dump(2) + "\n", out);
            return 0;
        }

        if (chosen == ev) {
            const SavedModel saved = load_model(model_path);
            const Dataset X = to_model_space(ev_data.load(), saved.scaling);
            const double e = saved.refined ? evaluate_refined(*saved.refined, X)
                                           : baseline_error(X, saved.trained, saved.fcm->fuzzifier);
            const json doc{{"error", e}, {"rows", X.size()}};
            write_output(out_path, doc.dump(2) + "\n", out);
            return 0;
        }

        if (chosen == sw) {
            ExperimentConfig cfg = load_experiment_config(config_path);
            if (sw->count("--clusters")) {
                cfg.c_values = sw_clusters;
            }
            if (sw->count("--m")) {
                cfg.m_values = sw_m;
            }
            if (sw->count("--folds")) {
                cfg.folds = folds;
            }
            if (sw->count("--repeats")) {
                cfg.repeats = repeats;
            }
            if (sw->count("--pso-particles")) {
                cfg.pso.particles = particles;
            }
            if (sw->count("--pso-iters")) {
                cfg.pso.max_iter = pso_iters;
            }
            if (sw->count("--normalize")) {
                cfg.normalization = parse_scaling(sw_normalize);
            }
            if (seed_given) {
                cfg.master_seed = seed;
            }
            cfg.validate();

            std::vector<CellResult> previous;
            RunOptions opt;
            opt.jobs = jobs;
            opt.record_timing = timing;
            if (std::filesystem::exists(out_path)) {
                std::istringstream log(read_file(out_path));
                previous = parse_ndjson(log);
                for (const auto& r : previous) {
                    opt.skip_keys.insert(r.key());
                }
            }

            // The log is rewritten atomically at most every two seconds while
            // the sweep runs, so an interrupted sweep resumes from it.
            std::vector<CellResult> done = previous;
            auto last_flush = std::chrono::steady_clock::now();
            opt.on_result = [&](const CellResult& r) {
                done.push_back(r);
                if (!quiet) {
                    err << r.key() << (r.failed ? " failed: " + r.reason : " train=" + detail::num(r.train_error))
                        << '\n';
                }
                const auto now = std::chrono::steady_clock::now();
                if (now - last_flush > std::chrono::seconds(2)) {
                    atomic_write(out_path, to_ndjson(done));
                    last_flush = now;
                }
            };

            const auto fresh = run_experiment(cfg, opt);
            std::vector<CellResult> all = std::move(previous);
            all.insert(all.end(), fresh.begin(), fresh.end());
            atomic_write(out_path, to_ndjson(all));
            return 0;
        }

        if (chosen == rep) {
            std::istringstream log(read_file(in_path));
            const ReportTable table = aggregate(parse_ndjson(log));
            write_output(out_path, emit_report(table, parse_report_format(format)), out);
            return 0;
        }

        if (chosen == plot) {
            const PlotKind k = parse_plot_kind(kind);
            std::string tsv;
            if (k == PlotKind::error_bars) {
                detail::require(!in_path.empty(), Errc::parameter, "error_bars needs --in");
                std::istringstream log(read_file(in_path));
                tsv = emit_error_bars(aggregate(parse_ndjson(log)));
            } else {
                detail::require(!model_path.empty(), Errc::parameter, "--kind " + kind + " needs --model");
                const SavedModel saved = load_model(model_path);
                if (k == PlotKind::membership_grid) {
                    detail::require(!plot_data.path.empty(), Errc::parameter, "membership_grid needs --data");
                    const Dataset hull = to_model_space(plot_data.load(), saved.scaling);
                    tsv = emit_membership_grid(saved.prototypes(), saved.fuzzifiers(), hull,
                                               GridOptions{resolution, 0.1});
                } else {
                    detail::require(saved.refined.has_value(), Errc::parameter,
                                    "--kind " + kind + " needs a model written by refine");
                    tsv = k == PlotKind::pso_history ? emit_pso_history(*saved.refined)
                                                     : emit_fuzzifier_trace(*saved.refined);
                }
            }
            write_output(out_path, tsv, out);
            return 0;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code(category(e.code()));
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}

} // namespace fuzzrec::cli

#endif
