#include "lsemplus/cli.hpp"

#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "lsemplus/baseline.hpp"
#include "lsemplus/benchmark.hpp"
#include "lsemplus/data.hpp"
#include "lsemplus/discovery.hpp"
#include "lsemplus/extremes.hpp"
#include "lsemplus/io.hpp"
#include "lsemplus/lsem.hpp"
#include "lsemplus/metrics.hpp"

namespace lsemplus::cli {

namespace {

// Writes to `path`, or to `fallback` when the path is empty.
void emit(const std::string& path, std::ostream& fallback, const std::function<void(std::ostream&)>& write) {
    if (path.empty()) {
        write(fallback);
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write " + path);
    write(file);
    if (!file) throw std::runtime_error("write failed for " + path);
}

void emit_json(const std::string& path, std::ostream& fallback, const nlohmann::json& doc) {
    emit(path, fallback, [&](std::ostream& os) { os << doc.dump(2) << '\n'; });
}

SampleMatrix read_samples(const std::string& path, const std::string& margins) {
    SampleMatrix x = io::load_samples(path);
    if (margins == "frechet2") x.margins = Margins::frechet2;
    return x;
}

const std::vector<std::string> kMarginChoices{"raw", "frechet2"};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Extremal causal ordering for heavy-tailed linear structural equation models", "lsemplus"};
    app.require_subcommand(1);

    // simulate
    struct {
        int d = 0, n = 0;
        double p = 0, alpha = 2.0;
        std::uint64_t seed = 0;
        std::string out;
    } sim;
    auto* simulate_cmd = app.add_subcommand("simulate", "Draw a random model and a sample from it");
    simulate_cmd->add_option("--d", sim.d, "Number of nodes")->required()->check(CLI::PositiveNumber);
    simulate_cmd->add_option("--p", sim.p, "Edge probability")->required()->check(CLI::Range(0.0, 1.0));
    simulate_cmd->add_option("--alpha", sim.alpha, "Tail index of the |t| innovations")->check(CLI::PositiveNumber);
    simulate_cmd->add_option("--n", sim.n, "Sample size")->required()->check(CLI::PositiveNumber);
    simulate_cmd->add_option("--seed", sim.seed, "Random seed")->required();
    simulate_cmd->add_option("--out", sim.out, "Output prefix: writes PREFIX.model.json, PREFIX.dag.txt, PREFIX.samples.csv")
        ->required();

    // discover
    struct {
        std::string samples, model, out, margins = "raw";
        double a = 1.3, epsilon = 0.4;
        int k = 0;
        std::optional<std::uint64_t> seed;
    } disc;
    auto* discover_cmd = app.add_subcommand("discover", "Estimate a causal ordering");
    auto* disc_samples = discover_cmd->add_option("--samples", disc.samples, "Sample CSV")->check(CLI::ExistingFile);
    auto* disc_model =
        discover_cmd->add_option("--model", disc.model, "Model JSON (oracle mode, exact scalings)")->check(CLI::ExistingFile);
    disc_samples->excludes(disc_model);
    discover_cmd->add_option("--a", disc.a, "Rescaling factor (> 1)")->check(CLI::Range(1.0, 1e6));
    discover_cmd->add_option("--epsilon", disc.epsilon, "Relative selection tolerance")->check(CLI::NonNegativeNumber);
    discover_cmd->add_option("--k", disc.k, "Upper order statistics (default floor(n^0.4))")->check(CLI::NonNegativeNumber);
    discover_cmd->add_option("--margins", disc.margins, "Margin state of the samples")->check(CLI::IsMember(kMarginChoices));
    discover_cmd->add_option("--seed", disc.seed, "Seed recorded in the output");
    discover_cmd->add_option("--out", disc.out, "Output JSON (default stdout)");

    // scalings
    struct {
        std::string samples, model, out, margins = "raw", format = "json";
        int i = 0, j = 0, k = 0;
        std::vector<int> identified;
        double a = 1.3;
    } scal;
    auto* scalings_cmd = app.add_subcommand("scalings", "Estimate the scalings of partially rescaled maxima");
    scalings_cmd->add_option("--samples", scal.samples, "Sample CSV")->required()->check(CLI::ExistingFile);
    scalings_cmd->add_option("--model", scal.model, "Model JSON; adds the exact values")->check(CLI::ExistingFile);
    scalings_cmd->add_option("--i", scal.i, "Unscaled node")->required();
    scalings_cmd->add_option("--j", scal.j, "Rescaled node")->required();
    scalings_cmd->add_option("--identified", scal.identified, "Comma-separated identified nodes")->delimiter(',');
    scalings_cmd->add_option("--a", scal.a, "Rescaling factor")->check(CLI::PositiveNumber);
    scalings_cmd->add_option("--k", scal.k, "Upper order statistics (default floor(n^0.4))")->check(CLI::NonNegativeNumber);
    scalings_cmd->add_option("--margins", scal.margins, "Margin state of the samples")->check(CLI::IsMember(kMarginChoices));
    scalings_cmd->add_option("--format", scal.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    scalings_cmd->add_option("--out", scal.out, "Output file (default stdout)");

    // evaluate
    struct {
        std::string dag, ordering, est_dag, out, format = "json";
    } eval;
    auto* evaluate_cmd = app.add_subcommand("evaluate", "Structural intervention distance to a true DAG");
    evaluate_cmd->add_option("--dag", eval.dag, "True DAG (text format)")->required()->check(CLI::ExistingFile);
    auto* eval_ordering =
        evaluate_cmd->add_option("--ordering", eval.ordering, "Ordering JSON from discover")->check(CLI::ExistingFile);
    auto* eval_est = evaluate_cmd->add_option("--est-dag", eval.est_dag, "Estimated DAG (text format)")->check(CLI::ExistingFile);
    eval_ordering->excludes(eval_est);
    evaluate_cmd->add_option("--format", eval.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    evaluate_cmd->add_option("--out", eval.out, "Output file (default stdout)");

    // benchmark
    BenchmarkGrid grid;
    std::vector<double> a_sweep;
    std::string bench_out, bench_summary;
    bool no_gamma = false;
    auto* benchmark_cmd = app.add_subcommand("benchmark", "Seeded simulation study; long-format SID table");
    benchmark_cmd->add_option("--d", grid.d, "Node counts")->delimiter(',')->check(CLI::PositiveNumber);
    benchmark_cmd->add_option("--p", grid.p, "Edge probabilities")->delimiter(',')->check(CLI::Range(0.0, 1.0));
    benchmark_cmd->add_option("--alpha", grid.alpha, "Tail indices")->delimiter(',')->check(CLI::PositiveNumber);
    benchmark_cmd->add_option("--n", grid.n, "Sample sizes")->delimiter(',')->check(CLI::PositiveNumber);
    benchmark_cmd->add_option("--reps", grid.replicates, "Random models per grid cell")->check(CLI::PositiveNumber);
    benchmark_cmd->add_option("--k", grid.k, "Threshold sweep (default floor(n^0.4))")->delimiter(',')->check(CLI::PositiveNumber);
    benchmark_cmd->add_option("--epsilon", grid.epsilon, "Tolerances")->delimiter(',')->check(CLI::NonNegativeNumber);
    auto* bench_a = benchmark_cmd->add_option("--a", grid.a, "Rescaling factor")->delimiter(',')->check(CLI::Range(1.0, 1e6));
    benchmark_cmd->add_option("--a-sweep", a_sweep, "Rescaling factors to compare (e.g. 1.0001,1.15,1.3,1.5,2)")
        ->delimiter(',')
        ->check(CLI::Range(1.0, 1e6))
        ->excludes(bench_a);
    benchmark_cmd->add_flag("--control", grid.reversed_control, "Add the reversed true order as a control method");
    benchmark_cmd->add_flag("--no-gamma", no_gamma, "Skip the Gamma baseline");
    benchmark_cmd->add_option("--seed", grid.seed, "Master seed")->required();
    benchmark_cmd->add_option("--out", bench_out, "Long-format CSV (default stdout)");
    benchmark_cmd->add_option("--summary", bench_summary, "Per-method summary CSV");

    // bootstrap
    struct {
        std::string samples, dag, out, margins = "raw";
        int replicates = 100;
        std::uint64_t seed = 0;
        AlgoParams params;
    } boot;
    auto* bootstrap_cmd = app.add_subcommand("bootstrap", "Bootstrap distribution of the SID");
    bootstrap_cmd->add_option("--samples", boot.samples, "Sample CSV")->required()->check(CLI::ExistingFile);
    bootstrap_cmd->add_option("--dag", boot.dag, "True DAG (text format)")->required()->check(CLI::ExistingFile);
    bootstrap_cmd->add_option("--B", boot.replicates, "Replicates")->check(CLI::PositiveNumber);
    bootstrap_cmd->add_option("--seed", boot.seed, "Random seed")->required();
    bootstrap_cmd->add_option("--a", boot.params.a, "Rescaling factor")->check(CLI::Range(1.0, 1e6));
    bootstrap_cmd->add_option("--epsilon", boot.params.epsilon, "Tolerance")->check(CLI::NonNegativeNumber);
    bootstrap_cmd->add_option("--k", boot.params.k, "Upper order statistics")->check(CLI::NonNegativeNumber);
    bootstrap_cmd->add_option("--out", boot.out, "CSV output (default stdout)");

    // decluster
    struct {
        std::string samples, out, segments, na = "error";
        int window = 1;
        bool timestamp_column = false;
    } decl;
    auto* decluster_cmd = app.add_subcommand("decluster", "Keep one peak per time window");
    decluster_cmd->add_option("--samples", decl.samples, "Panel CSV")->required()->check(CLI::ExistingFile);
    decluster_cmd->add_option("--window", decl.window, "Window width l in rows")->required()->check(CLI::PositiveNumber);
    decluster_cmd->add_option("--segments", decl.segments,
                              "Segment boundary file (0-based start rows) or 1-based data column index");
    decluster_cmd->add_option("--na", decl.na, "Missing values: drop or error")->check(CLI::IsMember({"drop", "error"}));
    decluster_cmd->add_flag("--timestamp-column", decl.timestamp_column, "First column holds the time index");
    decluster_cmd->add_option("--out", decl.out, "CSV output (default stdout)");

    // gamma
    struct {
        std::string samples, out;
        int k = 0;
    } gam;
    auto* gamma_cmd = app.add_subcommand("gamma", "Matrix of empirical causal tail coefficients");
    gamma_cmd->add_option("--samples", gam.samples, "Sample CSV")->required()->check(CLI::ExistingFile);
    gamma_cmd->add_option("--k", gam.k, "Upper order statistics (default floor(n^0.4))")->check(CLI::NonNegativeNumber);
    gamma_cmd->add_option("--out", gam.out, "CSV output (default stdout)");

    std::vector<std::string> argv_storage{"lsemplus"};
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_storage) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return usage_error;
    }

    try {
        if (*simulate_cmd) {
            Rng rng(sim.seed);
            const LsemModel model = random_lsem(sim.d, sim.p, rng, sim.alpha);
            const CoefficientMatrix abar = standardize(coefficient_matrix(model), sim.alpha);
            const SampleMatrix x = simulate(abar, sim.n, sim.alpha, rng);
            emit_json(sim.out + ".model.json", out, io::model_to_json(model));
            emit(sim.out + ".dag.txt", out, [&](std::ostream& os) { io::write_dag(os, model.dag); });
            emit(sim.out + ".samples.csv", out, [&](std::ostream& os) { io::write_samples(os, x.values); });
        } else if (*discover_cmd) {
            if (disc.samples.empty() && disc.model.empty()) {
                err << "discover: one of --samples or --model is required\n";
                return usage_error;
            }
            if (!(disc.a > 1.0)) {
                err << "discover: --a must exceed 1\n";
                return usage_error;
            }
            OrderingResult result;
            if (!disc.model.empty()) {
                const LsemModel model = io::load_model(disc.model);
                result = causal_order_oracle(standardize(coefficient_matrix(model), 2.0), disc.a, disc.epsilon);
            } else {
                result = causal_order(read_samples(disc.samples, disc.margins), {disc.a, disc.epsilon, disc.k});
            }
            for (const auto& w : result.warnings) err << "warning: " << w << '\n';
            emit_json(disc.out, out, io::ordering_to_json(result, disc.seed));
        } else if (*scalings_cmd) {
            SampleMatrix x = read_samples(scal.samples, scal.margins);
            if (x.margins == Margins::raw) {
                err << "warning: raw margins: applied empirical PIT to Frechet(2)\n";
                x = pit_frechet2(x);
            }
            const int k = scal.k > 0 ? scal.k : default_threshold(static_cast<int>(x.rows()));
            NodeSet all{scal.i, scal.j};
            all.insert(all.end(), scal.identified.begin(), scal.identified.end());
            nlohmann::json doc{{"i", scal.i}, {"j", scal.j}, {"identified", scal.identified}, {"a", scal.a}, {"k", k}};
            doc["scaled"] = estimate_scaling_scaled(x, scal.i, scal.j, scal.identified, scal.a, k);
            doc["unscaled"] = estimate_scaling_unscaled(x, scal.i, scal.j, scal.identified, scal.a, k);
            doc["init"] = estimate_scaling_init(x, all, k);
            if (!scal.model.empty()) {
                const CoefficientMatrix abar = standardize(coefficient_matrix(io::load_model(scal.model)), 2.0);
                doc["theoretical_scaled"] = theoretical_scaled_max_scaling(abar, scal.i, scal.j, scal.identified, scal.a);
                doc["theoretical_unscaled"] = theoretical_max_scaling(abar, all);
            }
            if (scal.format == "json") {
                emit_json(scal.out, out, doc);
            } else {
                emit(scal.out, out, [&](std::ostream& os) {
                    os << "quantity,value\n";
                    for (const char* key : {"scaled", "unscaled", "init", "theoretical_scaled", "theoretical_unscaled"})
                        if (doc.contains(key)) os << key << ',' << io::format_double(doc[key].get<double>()) << '\n';
                });
            }
        } else if (*evaluate_cmd) {
            const Dag truth = io::load_dag(eval.dag);
            Dag estimate = truth;
            if (!eval.ordering.empty()) {
                estimate = full_dag_from_order(io::ancestral_order_from_json(io::read_json(eval.ordering)));
            } else if (!eval.est_dag.empty()) {
                estimate = io::load_dag(eval.est_dag);
            } else {
                err << "evaluate: one of --ordering or --est-dag is required\n";
                return usage_error;
            }
            const SidScore score = sid(truth, estimate);
            if (eval.format == "json")
                emit_json(eval.out, out, io::sid_to_json(score));
            else
                emit(eval.out, out, [&](std::ostream& os) {
                    os << "raw,normalized\n" << score.raw << ',' << io::format_double(score.normalized) << '\n';
                });
        } else if (*benchmark_cmd) {
            if (!a_sweep.empty()) grid.a = a_sweep;
            for (double a : grid.a)
                if (!(a > 1.0)) {
                    err << "benchmark: every a must exceed 1\n";
                    return usage_error;
                }
            grid.gamma_baseline = !no_gamma;
            const auto rows = run_benchmark(grid);
            emit(bench_out, out, [&](std::ostream& os) { write_benchmark_csv(os, rows); });
            if (!bench_summary.empty())
                emit(bench_summary, out, [&](std::ostream& os) { write_summary_csv(os, summarize(rows)); });
        } else if (*bootstrap_cmd) {
            const SampleMatrix x = io::load_samples(boot.samples);
            const Dag truth = io::load_dag(boot.dag);
            const auto reps = bootstrap_sid(x, truth, boot.params, boot.replicates, boot.seed);
            emit(boot.out, out, [&](std::ostream& os) { io::write_bootstrap_csv(os, reps); });
        } else if (*decluster_cmd) {
            CsvConfig config;
            config.timestamp_column = decl.timestamp_column;
            config.na = decl.na == "drop" ? NaPolicy::drop : NaPolicy::error;
            std::vector<std::string> log;
            TimeSeriesPanel panel = load_csv(decl.samples, config, &log);
            for (const auto& line : log) err << "info: " << line << '\n';
            if (!decl.segments.empty()) {
                if (std::filesystem::is_regular_file(decl.segments)) {
                    panel.segment_starts = load_segment_starts(decl.segments);
                } else {
                    int column = 0;
                    try {
                        std::size_t used = 0;
                        column = std::stoi(decl.segments, &used);
                        if (used != decl.segments.size()) throw std::invalid_argument("trailing characters");
                    } catch (const std::exception&) {
                        err << "decluster: --segments must be an existing file or a column index\n";
                        return usage_error;
                    }
                    if (column < 1 || column > panel.cols()) {
                        err << "decluster: segment column out of range\n";
                        return usage_error;
                    }
                    panel.segment_starts = segments_from_column(panel.values.col(column - 1));
                    Eigen::MatrixXd rest(panel.rows(), panel.cols() - 1);
                    for (Eigen::Index c = 0, o = 0; c < panel.cols(); ++c)
                        if (c != column - 1) rest.col(o++) = panel.values.col(c);
                    if (!panel.names.empty()) panel.names.erase(panel.names.begin() + (column - 1));
                    panel.values = std::move(rest);
                }
            }
            const TimeSeriesPanel kept = decluster(panel, decl.window);
            emit(decl.out, out, [&](std::ostream& os) { io::write_samples(os, kept.values, kept.names); });
        } else if (*gamma_cmd) {
            const SampleMatrix x = io::load_samples(gam.samples);
            const int k = gam.k > 0 ? gam.k : default_threshold(static_cast<int>(x.rows()));
            emit(gam.out, out, [&](std::ostream& os) { io::write_matrix_csv(os, gamma_matrix(x, k)); });
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return runtime_failure;
    }
    return success;
}

}  // namespace lsemplus::cli
