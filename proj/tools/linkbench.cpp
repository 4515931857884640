#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "linkbench/harness.hpp"

namespace {

using namespace linkbench;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitPartial = 3;

struct RunArgs {
    std::string manifest_path;
    std::string config_path;
    std::string results_path;
    std::string samplers, predictors;
    std::optional<std::uint64_t> seed;
    std::optional<double> rho;
    std::optional<int> repeats, folds, workers;
    std::optional<bool> redraw;
};

int cmd_run(const RunArgs& args) {
    RunConfig config;
    try {
        if (!args.config_path.empty()) config = parse_config_file(args.config_path);
        // CLI flags win over the config file
        if (args.seed) config.master_seed = *args.seed;
        if (args.rho) config.rho = *args.rho;
        if (args.repeats) config.repeats = *args.repeats;
        if (args.folds) config.folds = *args.folds;
        if (args.workers) config.workers = *args.workers;
        if (args.redraw) config.redraw_per_fold = *args.redraw;
        if (!args.results_path.empty()) config.results_path = args.results_path;
        if (!args.samplers.empty()) {
            std::string text = "samplers = " + args.samplers;
            config.samplers = parse_config_text(text).samplers;
        }
        if (!args.predictors.empty()) {
            std::string text = "predictors = " + args.predictors;
            config.predictors = parse_config_text(text).predictors;
        }
        config.validate();
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    }

    const std::vector<ManifestEntry> manifest = load_manifest(args.manifest_path);
    std::vector<AucRecord> records;
    const RunSummary summary = run_experiment(manifest, config, records);
    write_run_metadata(config.results_path + ".meta.json", config, summary);

    std::cout << "cells: " << summary.cells << "\nrecords: " << summary.records
              << "\nfailed records: " << summary.failed_records << "\n";
    for (const std::string& s : summary.skipped_networks)
        std::cout << "skipped network: " << s << "\n";
    std::cout << "results: " << config.results_path << "\n";
    return (summary.failed_records > 0 || !summary.skipped_networks.empty()) ? kExitPartial
                                                                             : kExitOk;
}

int cmd_sample(const std::string& graph_path, const std::string& sampler, double rho,
               std::uint64_t seed, const std::string& out_path) {
    const auto kind = sampler_from_name(sampler);
    if (!kind) {
        std::cerr << "unknown sampler: " << sampler << "\n";
        return kExitUsage;
    }
    const Graph g = load_edge_list(graph_path);
    const SampleOutcome outcome = draw_sample(g, SamplerSpec{*kind, {}}, rho, seed);

    std::ofstream out(out_path, std::ios::trunc);
    if (!out) throw DataError("cannot write sample: " + out_path);
    for (const NodePair& e : outcome.retained.sorted())
        out << g.label(e.u) << "\t" << g.label(e.v) << "\n";

    std::printf("retained %zu of %zu edges (achieved retention %.4f)\n",
                outcome.retained.size(), g.edge_count(), outcome.achieved_retention);
    std::printf("touched nodes: %zu of %u\n", outcome.touched.size(), g.node_count());

    const SamplerCategory cat = sampler_category(*kind);
    if (cat == SamplerCategory::NeighborBased || *kind == SamplerKind::LoopErasedWalk) {
        const Graph sub(g.node_count(), outcome.retained.sorted());
        std::size_t with_edges = 0;
        for (NodeId v = 0; v < sub.node_count(); ++v)
            if (sub.degree(v) > 0) ++with_edges;
        const Components comp = connected_components(sub);
        const std::size_t isolated = sub.node_count() - with_edges;
        const std::size_t sample_components = comp.count - isolated;
        if (*kind == SamplerKind::LoopErasedWalk) {
            const bool tree = outcome.retained.size() + sample_components ==
                              outcome.touched.size();
            std::printf("tree diagnostic: %zu edges over %zu touched nodes (%s)\n",
                        outcome.retained.size(), outcome.touched.size(),
                        tree ? "acyclic" : "cycle detected");
        } else {
            std::printf("connectivity diagnostic: %zu component%s over sampled nodes\n",
                        sample_components, sample_components == 1 ? "" : "s");
        }
    }
    return kExitOk;
}

int cmd_aggregate(const std::string& results_path, const std::string& out_dir) {
    const std::vector<AucRecord> records = read_results_csv(results_path);
    if (records.empty()) throw DataError("results file has no records: " + results_path);
    std::filesystem::create_directories(out_dir);
    for (const std::string& domain : record_domains(records)) {
        const AggregateTable table = aggregate(records, domain);
        const std::string path =
            (std::filesystem::path(out_dir) / ("table_" + domain + ".csv")).string();
        write_aggregate_csv(path, table);
        std::cout << "wrote " << path << "\n";
    }
    return kExitOk;
}

int cmd_pca(const std::string& results_path, const std::string& mode, const std::string& domain,
            const std::string& predictor, const std::string& out_path) {
    const std::vector<AucRecord> records = read_results_csv(results_path);
    PcaResult result;
    if (mode == "networks") {
        result = pca_networks(records);
        for (const std::string& net : result.excluded)
            std::cout << "excluded (incomplete AUC vector): " << net << "\n";
    } else if (mode == "samplers") {
        if (domain.empty() || predictor.empty())
            throw DataError("pca samplers mode needs --domain and --predictor");
        result = pca_samplers(records, domain, predictor);
    } else {
        std::cerr << "unknown PCA mode: " << mode << " (expected networks|samplers)\n";
        return kExitUsage;
    }
    write_pca_csv(out_path, result);
    std::cout << "wrote " << out_path << "\n";
    return kExitOk;
}

int cmd_list_samplers() {
    for (SamplerKind k : all_samplers())
        std::cout << sampler_name(k) << "\t" << category_name(sampler_category(k)) << "\n";
    return kExitOk;
}

int cmd_list_predictors() {
    for (PredictorKind k : all_predictors()) std::cout << predictor_name(k) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"link-prediction benchmark under non-uniform missing-edge patterns"};
    app.require_subcommand(1);

    RunArgs run_args;
    auto* run = app.add_subcommand("run", "execute a network x sampler x predictor sweep");
    run->add_option("--manifest", run_args.manifest_path, "corpus manifest CSV")->required();
    run->add_option("--config", run_args.config_path, "run config file");
    run->add_option("--results", run_args.results_path, "results CSV path");
    run->add_option("--seed", run_args.seed, "master seed");
    run->add_option("--rho", run_args.rho, "retention fraction");
    run->add_option("--repeats", run_args.repeats, "CV repeats");
    run->add_option("--folds", run_args.folds, "CV folds");
    run->add_option("--workers", run_args.workers, "worker threads");
    run->add_option("--samplers", run_args.samplers, "comma-separated sampler names or 'all'");
    run->add_option("--predictors", run_args.predictors,
                    "comma-separated predictor names or 'all'");
    run->add_flag("--redraw-per-fold", [&run_args](std::int64_t) { run_args.redraw = true; },
                  "redraw the sample per fold (sensitivity mode)");

    std::string sample_graph, sample_name, sample_out = "sample.edges";
    double sample_rho = 0.8;
    std::uint64_t sample_seed = 1;
    auto* sample = app.add_subcommand("sample", "write one retained-edge sample");
    sample->add_option("graph", sample_graph, "edge-list file")->required();
    sample->add_option("sampler", sample_name, "sampler name")->required();
    sample->add_option("--rho", sample_rho, "retention fraction");
    sample->add_option("--seed", sample_seed, "seed");
    sample->add_option("--out", sample_out, "output edge list");

    std::string agg_results, agg_out = ".";
    auto* agg = app.add_subcommand("aggregate", "emit per-domain mean-AUC tables");
    agg->add_option("results", agg_results, "results CSV")->required();
    agg->add_option("--out-dir", agg_out, "output directory");

    std::string pca_results, pca_mode = "networks", pca_domain, pca_predictor,
                             pca_out = "pca.csv";
    auto* pca = app.add_subcommand("pca", "emit PCA scores over AUC vectors");
    pca->add_option("results", pca_results, "results CSV")->required();
    pca->add_option("--mode", pca_mode, "networks|samplers");
    pca->add_option("--domain", pca_domain, "domain (samplers mode)");
    pca->add_option("--predictor", pca_predictor, "predictor (samplers mode)");
    pca->add_option("--out", pca_out, "output CSV");

    auto* ls = app.add_subcommand("list-samplers", "print sampler names and categories");
    auto* lp = app.add_subcommand("list-predictors", "print predictor names");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (run->parsed()) return cmd_run(run_args);
        if (sample->parsed())
            return cmd_sample(sample_graph, sample_name, sample_rho, sample_seed, sample_out);
        if (agg->parsed()) return cmd_aggregate(agg_results, agg_out);
        if (pca->parsed())
            return cmd_pca(pca_results, pca_mode, pca_domain, pca_predictor, pca_out);
        if (ls->parsed()) return cmd_list_samplers();
        if (lp->parsed()) return cmd_list_predictors();
    } catch (const InfeasibleSample& e) {
        std::cerr << "infeasible sample: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitUsage;
}
