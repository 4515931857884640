#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "linkbench/analysis.hpp"
#include "linkbench/evalpipe.hpp"

namespace linkbench {

struct ManifestEntry {
    std::string name, path, domain;
};

/// Domain labels accepted by the manifest.
const std::vector<std::string>& known_domains();

/// CSV with header name,path,domain. Duplicate names, unknown domains, or
/// malformed rows are errors; paths are resolved relative to the manifest
/// file's directory.
std::vector<ManifestEntry> load_manifest(const std::string& path);

struct RunConfig {
    std::uint64_t master_seed = 1;
    double rho = 0.8;
    int repeats = 5;
    int folds = 5;
    int workers = 0;  // 0: LINKBENCH_WORKERS env var, else hardware concurrency
    std::size_t pool_cap = 200000;
    std::size_t balanced_size = 10000;
    bool redraw_per_fold = false;
    std::vector<SamplerKind> samplers = all_samplers_vec();
    std::vector<PredictorKind> predictors = all_predictors();
    SamplerParams sampler_params;
    PredictorConfig predictor;
    std::string results_path = "results.csv";

    static std::vector<SamplerKind> all_samplers_vec();
    void validate() const;  // DataError on violated bounds
    int effective_workers() const;
    std::uint64_t config_hash() const;
    EvalOptions eval_options() const;
};

/// Declarative key = value config with [sections] for hyperparameters; '#'
/// and ';' start comments. Unknown keys or names are rejected.
RunConfig parse_config_text(const std::string& text, const std::string& origin = "<config>");
RunConfig parse_config_file(const std::string& path);

struct RunSummary {
    std::size_t cells = 0;
    std::size_t records = 0;
    std::size_t failed_records = 0;
    std::vector<std::string> skipped_networks;  // "name: reason"
};

/// Execute every (network x sampler x predictor) cell on a bounded worker
/// pool. Completed cells are appended to <results>.partial as they finish, so
/// an interrupted run resumes by skipping cells already present there. The
/// final CSV is sorted and byte-deterministic in (manifest, config, seed).
RunSummary run_experiment(const std::vector<ManifestEntry>& manifest, const RunConfig& config,
                          std::vector<AucRecord>& out_records);

/// Results CSV: network,domain,sampler,predictor,repeat,fold,auc,n,m,seed,status
/// sorted by the first six columns; auc empty on failed records.
void write_results_csv(const std::string& path, std::vector<AucRecord> records);
std::vector<AucRecord> read_results_csv(const std::string& path);

/// JSON sidecar with config hash, master seed, version, and failure counts.
void write_run_metadata(const std::string& path, const RunConfig& config,
                        const RunSummary& summary);

void write_aggregate_csv(const std::string& path, const AggregateTable& table);
void write_pca_csv(const std::string& path, const PcaResult& result);

extern const char* kToolkitVersion;

}  // namespace linkbench
