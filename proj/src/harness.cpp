#include "linkbench/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "linkbench/rng.hpp"

namespace linkbench {

const char* kToolkitVersion = "0.1.0";

namespace {

// ---------------------------------------------------------------------------
// CSV helpers

std::string csv_quote(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::vector<std::string> csv_split(const std::string& line, const std::string& origin,
                                   std::size_t lineno) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (quoted)
        throw ParseError(origin + ":" + std::to_string(lineno) + ": unterminated quote");
    fields.push_back(cur);
    return fields;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", x);
    return buf;
}

// ---------------------------------------------------------------------------

constexpr const char* kResultsHeader =
    "network,domain,sampler,predictor,repeat,fold,auc,n,m,seed,status";

std::string record_row(const AucRecord& r) {
    std::ostringstream os;
    os << csv_quote(r.network) << ',' << csv_quote(r.domain) << ',' << r.sampler << ','
       << r.predictor << ',' << r.repeat << ',' << r.fold << ','
       << (r.auc ? format_double(*r.auc) : std::string()) << ',' << r.n << ',' << r.m << ','
       << r.seed << ',' << csv_quote(r.status);
    return os.str();
}

void sort_records(std::vector<AucRecord>& records) {
    std::sort(records.begin(), records.end(), [](const AucRecord& a, const AucRecord& b) {
        return std::tie(a.network, a.domain, a.sampler, a.predictor, a.repeat, a.fold) <
               std::tie(b.network, b.domain, b.sampler, b.predictor, b.repeat, b.fold);
    });
}

AucRecord parse_record(const std::vector<std::string>& f, const std::string& origin,
                       std::size_t lineno) {
    if (f.size() != 11)
        throw ParseError(origin + ":" + std::to_string(lineno) + ": expected 11 fields, got " +
                         std::to_string(f.size()));
    AucRecord r;
    try {
        r.network = f[0];
        r.domain = f[1];
        r.sampler = f[2];
        r.predictor = f[3];
        r.repeat = std::stoi(f[4]);
        r.fold = std::stoi(f[5]);
        if (!f[6].empty()) r.auc = std::stod(f[6]);
        r.n = static_cast<NodeId>(std::stoul(f[7]));
        r.m = std::stoull(f[8]);
        r.seed = std::stoull(f[9]);
        r.status = f[10];
    } catch (const std::logic_error&) {
        throw ParseError(origin + ":" + std::to_string(lineno) + ": malformed numeric field");
    }
    return r;
}

std::vector<AucRecord> read_records_stream(std::istream& in, const std::string& origin) {
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(in, line)) throw ParseError(origin + ": empty results file");
    ++lineno;
    if (trim(line) != kResultsHeader)
        throw ParseError(origin + ": bad results header (expected '" +
                         std::string(kResultsHeader) + "')");
    std::vector<AucRecord> records;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        records.push_back(parse_record(csv_split(line, origin, lineno), origin, lineno));
    }
    return records;
}

}  // namespace

// ---------------------------------------------------------------------------
// manifest

const std::vector<std::string>& known_domains() {
    static const std::vector<std::string> domains = {
        "biological",    "economic",       "informational", "social",
        "technological", "transportation", "other"};
    return domains;
}

std::vector<ManifestEntry> load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open manifest: " + path);
    const std::filesystem::path base = std::filesystem::path(path).parent_path();

    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(in, line)) throw ParseError(path + ": empty manifest");
    ++lineno;
    if (trim(line) != "name,path,domain")
        throw ParseError(path + ": manifest header must be 'name,path,domain'");

    std::vector<ManifestEntry> entries;
    std::set<std::string> names;
    const auto& domains = known_domains();
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto f = csv_split(line, path, lineno);
        if (f.size() != 3)
            throw ParseError(path + ":" + std::to_string(lineno) + ": expected 3 fields");
        ManifestEntry e{trim(f[0]), trim(f[1]), trim(f[2])};
        if (e.name.empty())
            throw ParseError(path + ":" + std::to_string(lineno) + ": empty network name");
        if (!names.insert(e.name).second)
            throw DataError(path + ":" + std::to_string(lineno) + ": duplicate name " + e.name);
        if (std::find(domains.begin(), domains.end(), e.domain) == domains.end())
            throw DataError(path + ":" + std::to_string(lineno) + ": unknown domain " + e.domain);
        if (std::filesystem::path(e.path).is_relative())
            e.path = (base / e.path).string();
        entries.push_back(std::move(e));
    }
    return entries;
}

// ---------------------------------------------------------------------------
// config

std::vector<SamplerKind> RunConfig::all_samplers_vec() { return all_samplers(); }

void RunConfig::validate() const {
    if (repeats < 1) throw DataError("config: repeats must be >= 1");
    if (folds < 2) throw DataError("config: folds must be >= 2");
    if (!(rho > 0.0 && rho < 1.0) && rho != 1.0)
        throw DataError("config: rho must be in (0, 1]");
    if (workers < 0) throw DataError("config: workers must be >= 0");
    if (balanced_size == 0) throw DataError("config: balanced_size must be positive");
    if (pool_cap == 0) throw DataError("config: pool_cap must be positive");
    if (samplers.empty()) throw DataError("config: sampler list is empty");
    if (predictors.empty()) throw DataError("config: predictor list is empty");
    sampler_params.validate();
}

int RunConfig::effective_workers() const {
    if (workers > 0) return workers;
    if (const char* env = std::getenv("LINKBENCH_WORKERS")) {
        const int w = std::atoi(env);
        if (w > 0) return w;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

EvalOptions RunConfig::eval_options() const {
    EvalOptions opts;
    opts.repeats = repeats;
    opts.folds = folds;
    opts.rho = rho;
    opts.balanced_size = balanced_size;
    opts.pool_cap = pool_cap;
    opts.redraw_per_fold = redraw_per_fold;
    opts.sampler_params = sampler_params;
    opts.predictor = predictor;
    return opts;
}

namespace {

std::string canonical_config(const RunConfig& c) {
    std::ostringstream os;
    os << "master_seed=" << c.master_seed << ";rho=" << format_double(c.rho)
       << ";repeats=" << c.repeats << ";folds=" << c.folds << ";pool_cap=" << c.pool_cap
       << ";balanced_size=" << c.balanced_size << ";redraw_per_fold=" << c.redraw_per_fold
       << ";samplers=";
    for (SamplerKind s : c.samplers) os << sampler_name(s) << "+";
    os << ";predictors=";
    for (PredictorKind p : c.predictors) os << predictor_name(p) << "+";
    os << ";embedding=" << c.predictor.embedding.dims << "/"
       << c.predictor.embedding.walks_per_node << "/" << c.predictor.embedding.walk_length << "/"
       << c.predictor.embedding.window << "/" << c.predictor.embedding.negatives << "/"
       << c.predictor.embedding.epochs << "/" << format_double(c.predictor.embedding.learning_rate)
       << ";spectral=" << c.predictor.spectral_dims << ";logistic="
       << format_double(c.predictor.logistic.learning_rate) << "/" << c.predictor.logistic.epochs
       << "/" << format_double(c.predictor.logistic.l2) << ";forest=" << c.predictor.forest.trees
       << "/" << c.predictor.forest.max_depth << "/" << c.predictor.forest.min_leaf << "/"
       << c.predictor.forest.histogram_bins << ";dcsbm=" << c.predictor.dcsbm_restarts
       << ";sampler_params=" << format_double(c.sampler_params.hybrid_mix) << "/"
       << format_double(c.sampler_params.induction_keep) << "/"
       << format_double(c.sampler_params.burn_prob) << "/"
       << format_double(c.sampler_params.restart_prob) << "/"
       << format_double(c.sampler_params.jump_prob) << "/"
       << format_double(c.sampler_params.mh_exponent);
    return os.str();
}

std::uint64_t parse_u64(const std::string& v, const std::string& key) {
    try {
        std::size_t pos = 0;
        const std::uint64_t x = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::logic_error&) {
        throw DataError("config: bad integer for " + key + ": " + v);
    }
}

double parse_f64(const std::string& v, const std::string& key) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::logic_error&) {
        throw DataError("config: bad number for " + key + ": " + v);
    }
}

bool parse_bool(const std::string& v, const std::string& key) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw DataError("config: bad boolean for " + key + ": " + v);
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(v);
    while (std::getline(is, cur, ',')) {
        cur = trim(cur);
        if (!cur.empty()) out.push_back(cur);
    }
    return out;
}

}  // namespace

std::uint64_t RunConfig::config_hash() const {
    return SeedHasher().mix(canonical_config(*this)).value();
}

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line, section;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto comment = line.find_first_of("#;");
        if (comment != std::string::npos) line.resize(comment);
        line = trim(line);
        if (line.empty()) continue;
        const std::string where = origin + ":" + std::to_string(lineno);
        if (line.front() == '[') {
            if (line.back() != ']') throw ParseError(where + ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(where + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (section.empty()) {
            if (key == "master_seed") cfg.master_seed = parse_u64(value, key);
            else if (key == "rho") cfg.rho = parse_f64(value, key);
            else if (key == "repeats") cfg.repeats = static_cast<int>(parse_u64(value, key));
            else if (key == "folds") cfg.folds = static_cast<int>(parse_u64(value, key));
            else if (key == "workers") cfg.workers = static_cast<int>(parse_u64(value, key));
            else if (key == "pool_cap") cfg.pool_cap = parse_u64(value, key);
            else if (key == "balanced_size") cfg.balanced_size = parse_u64(value, key);
            else if (key == "redraw_per_fold") cfg.redraw_per_fold = parse_bool(value, key);
            else if (key == "results") cfg.results_path = value;
            else if (key == "samplers") {
                cfg.samplers.clear();
                if (value == "all") cfg.samplers = all_samplers();
                else
                    for (const std::string& name : split_list(value)) {
                        const auto kind = sampler_from_name(name);
                        if (!kind) throw DataError(where + ": unknown sampler " + name);
                        cfg.samplers.push_back(*kind);
                    }
            } else if (key == "predictors") {
                cfg.predictors.clear();
                if (value == "all") cfg.predictors = all_predictors();
                else
                    for (const std::string& name : split_list(value))
                        cfg.predictors.push_back(predictor_from_name(name));
            } else {
                throw DataError(where + ": unknown key " + key);
            }
        } else if (section == "embedding") {
            auto& e = cfg.predictor.embedding;
            if (key == "dims") e.dims = parse_u64(value, key);
            else if (key == "walks_per_node") e.walks_per_node = parse_u64(value, key);
            else if (key == "walk_length") e.walk_length = parse_u64(value, key);
            else if (key == "window") e.window = parse_u64(value, key);
            else if (key == "negatives") e.negatives = parse_u64(value, key);
            else if (key == "epochs") e.epochs = parse_u64(value, key);
            else if (key == "learning_rate") e.learning_rate = parse_f64(value, key);
            else throw DataError(where + ": unknown key " + key);
        } else if (section == "logistic") {
            auto& l = cfg.predictor.logistic;
            if (key == "learning_rate") l.learning_rate = parse_f64(value, key);
            else if (key == "epochs") l.epochs = parse_u64(value, key);
            else if (key == "l2") l.l2 = parse_f64(value, key);
            else throw DataError(where + ": unknown key " + key);
        } else if (section == "forest") {
            auto& f = cfg.predictor.forest;
            if (key == "trees") f.trees = parse_u64(value, key);
            else if (key == "max_depth") f.max_depth = parse_u64(value, key);
            else if (key == "min_leaf") f.min_leaf = parse_u64(value, key);
            else if (key == "histogram_bins") f.histogram_bins = parse_u64(value, key);
            else if (key == "size_grid") {
                f.size_grid.clear();
                for (const std::string& t : split_list(value))
                    f.size_grid.push_back(parse_u64(t, key));
                if (f.size_grid.empty()) throw DataError(where + ": empty size_grid");
            } else throw DataError(where + ": unknown key " + key);
        } else if (section == "spectral") {
            if (key == "dims") cfg.predictor.spectral_dims = parse_u64(value, key);
            else throw DataError(where + ": unknown key " + key);
        } else if (section == "dcsbm") {
            if (key == "restarts") cfg.predictor.dcsbm_restarts = static_cast<int>(parse_u64(value, key));
            else throw DataError(where + ": unknown key " + key);
        } else if (section == "sampler-params") {
            auto& p = cfg.sampler_params;
            if (key == "hybrid_mix") p.hybrid_mix = parse_f64(value, key);
            else if (key == "induction_keep") p.induction_keep = parse_f64(value, key);
            else if (key == "burn_prob") p.burn_prob = parse_f64(value, key);
            else if (key == "restart_prob") p.restart_prob = parse_f64(value, key);
            else if (key == "jump_prob") p.jump_prob = parse_f64(value, key);
            else if (key == "mh_exponent") p.mh_exponent = parse_f64(value, key);
            else throw DataError(where + ": unknown key " + key);
        } else {
            throw DataError(where + ": unknown section " + section);
        }
    }
    cfg.validate();
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

// ---------------------------------------------------------------------------
// orchestration

RunSummary run_experiment(const std::vector<ManifestEntry>& manifest, const RunConfig& config,
                          std::vector<AucRecord>& out_records) {
    config.validate();
    RunSummary summary;

    struct LoadedNetwork {
        ManifestEntry entry;
        Graph graph;
    };
    std::vector<LoadedNetwork> networks;
    for (const ManifestEntry& entry : manifest) {
        try {
            networks.push_back({entry, load_edge_list(entry.path)});
        } catch (const std::exception& e) {
            summary.skipped_networks.push_back(entry.name + ": " + e.what());
        }
    }

    struct Cell {
        std::size_t network;
        SamplerKind sampler;
        PredictorKind predictor;
    };
    std::vector<Cell> cells;
    for (std::size_t i = 0; i < networks.size(); ++i)
        for (SamplerKind s : config.samplers)
            for (PredictorKind p : config.predictors) cells.push_back({i, s, p});
    summary.cells = cells.size();

    // resume support: cells fully present in the partial shard are skipped
    const std::string shard_path = config.results_path + ".partial";
    out_records.clear();
    std::set<std::string> done;
    if (std::filesystem::exists(shard_path) && std::filesystem::file_size(shard_path) > 0) {
        std::map<std::string, std::size_t> counts;
        std::vector<AucRecord> prior;
        {
            std::ifstream in(shard_path);
            prior = read_records_stream(in, shard_path);
        }
        const std::size_t per_cell =
            static_cast<std::size_t>(config.repeats) * static_cast<std::size_t>(config.folds);
        for (const AucRecord& r : prior)
            ++counts[r.network + "|" + r.sampler + "|" + r.predictor];
        for (const AucRecord& r : prior) {
            const std::string id = r.network + "|" + r.sampler + "|" + r.predictor;
            if (counts[id] == per_cell) {
                done.insert(id);
                out_records.push_back(r);
            }
        }
    }

    std::ofstream shard(shard_path, std::ios::app);
    if (!shard) throw DataError("cannot open result shard: " + shard_path);
    if (std::filesystem::file_size(shard_path) == 0) shard << kResultsHeader << "\n";

    std::mutex sink_mutex;
    std::atomic<std::size_t> next{0};
    const EvalOptions eval = config.eval_options();

    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cells.size()) return;
            const Cell& cell = cells[i];
            const LoadedNetwork& net = networks[cell.network];
            const std::string id = net.entry.name + "|" + sampler_name(cell.sampler) + "|" +
                                   predictor_name(cell.predictor);
            {
                std::lock_guard<std::mutex> lock(sink_mutex);
                if (done.count(id)) continue;
            }
            std::vector<AucRecord> records =
                run_cell(net.graph, net.entry.name, net.entry.domain, cell.sampler,
                         cell.predictor, eval, config.master_seed);
            std::lock_guard<std::mutex> lock(sink_mutex);
            for (AucRecord& r : records) {
                shard << record_row(r) << "\n";
                out_records.push_back(std::move(r));
            }
            shard.flush();
        }
    };

    const int nworkers = std::max(1, std::min<int>(config.effective_workers(),
                                                   static_cast<int>(cells.size())));
    std::vector<std::thread> threads;
    for (int w = 1; w < nworkers; ++w) threads.emplace_back(worker);
    worker();
    for (std::thread& t : threads) t.join();
    shard.close();

    sort_records(out_records);
    summary.records = out_records.size();
    for (const AucRecord& r : out_records)
        if (r.status != "ok") ++summary.failed_records;

    write_results_csv(config.results_path, out_records);
    std::filesystem::remove(shard_path);
    return summary;
}

// ---------------------------------------------------------------------------
// persistence

void write_results_csv(const std::string& path, std::vector<AucRecord> records) {
    sort_records(records);
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError("cannot write results: " + path);
    out << kResultsHeader << "\n";
    for (const AucRecord& r : records) out << record_row(r) << "\n";
}

std::vector<AucRecord> read_results_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open results: " + path);
    return read_records_stream(in, path);
}

void write_run_metadata(const std::string& path, const RunConfig& config,
                        const RunSummary& summary) {
    nlohmann::json meta;
    meta["toolkit_version"] = kToolkitVersion;
    meta["config_hash"] = config.config_hash();
    meta["master_seed"] = config.master_seed;
    meta["rho"] = config.rho;
    meta["repeats"] = config.repeats;
    meta["folds"] = config.folds;
    meta["cells"] = summary.cells;
    meta["records"] = summary.records;
    meta["failed_records"] = summary.failed_records;
    meta["skipped_networks"] = summary.skipped_networks;
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError("cannot write metadata: " + path);
    out << meta.dump(2) << "\n";
}

void write_aggregate_csv(const std::string& path, const AggregateTable& table) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError("cannot write aggregate table: " + path);
    out << "category,sampler";
    for (const std::string& p : table.predictors) out << ',' << p;
    out << ",best\n";
    for (std::size_t i = 0; i < table.samplers.size(); ++i) {
        out << table.categories[i] << ',' << table.samplers[i];
        std::string best;
        for (std::size_t j = 0; j < table.predictors.size(); ++j) {
            const AggregateCell& cell = table.cells[i][j];
            out << ',' << (cell.has_value() ? format_double(cell.mean) : std::string());
            if (cell.best) {
                if (!best.empty()) best += '|';
                best += table.predictors[j];
            }
        }
        out << ',' << csv_quote(best) << "\n";
    }

    // per-cell support counts, for auditing which means rest on failed cells
    std::filesystem::path support_path(path);
    support_path.replace_extension();
    support_path += "_support.csv";
    std::ofstream sup(support_path, std::ios::trunc);
    if (!sup) throw DataError("cannot write support table: " + support_path.string());
    sup << "category,sampler";
    for (const std::string& p : table.predictors) sup << ',' << p;
    sup << "\n";
    for (std::size_t i = 0; i < table.samplers.size(); ++i) {
        sup << table.categories[i] << ',' << table.samplers[i];
        for (std::size_t j = 0; j < table.predictors.size(); ++j)
            sup << ',' << table.cells[i][j].support;
        sup << "\n";
    }
}

void write_pca_csv(const std::string& path, const PcaResult& result) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError("cannot write PCA output: " + path);
    out << "entity,domain_or_predictor,pc1,pc2,explained_variance_1,explained_variance_2\n";
    for (std::size_t i = 0; i < result.entities.size(); ++i)
        out << csv_quote(result.entities[i]) << ',' << csv_quote(result.labels[i]) << ','
            << format_double(result.pc1[i]) << ',' << format_double(result.pc2[i]) << ','
            << format_double(result.explained_1) << ',' << format_double(result.explained_2)
            << "\n";
}

}  // namespace linkbench
