#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "linkbench/harness.hpp"
#include "linkbench/rng.hpp"

#include <sys/wait.h>
#include <unistd.h>

using namespace linkbench;
namespace fs = std::filesystem;

namespace {

// ---------------------------------------------------------------------------
// scratch-directory helpers

struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() /
               ("linkbench_harness_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string operator/(const std::string& name) const { return (path / name).string(); }
};

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::trunc);
    REQUIRE(out.good());
    out << content;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

std::string karate_path() { return std::string(LINKBENCH_TEST_DATA) + "/karate.edges"; }

// ring of 30 nodes plus long chords; connected, 60 edges
std::string write_ring_graph(const TempDir& dir) {
    std::ostringstream os;
    for (int i = 0; i < 30; ++i) {
        os << "r" << i << "\tr" << (i + 1) % 30 << "\n";
        os << "r" << i << "\tr" << (i + 7) % 30 << "\n";
    }
    const std::string path = dir / "ring.edges";
    write_file(path, os.str());
    return path;
}

RunConfig small_run_config(const std::string& results_path) {
    RunConfig cfg;
    cfg.master_seed = 99;
    cfg.rho = 0.8;
    cfg.repeats = 2;
    cfg.folds = 3;
    cfg.workers = 1;
    cfg.balanced_size = 400;
    cfg.samplers = {SamplerKind::RandomEdge, SamplerKind::RandomNode};
    cfg.predictors = {predictor_from_name("jaccard"), predictor_from_name("adamic-adar")};
    cfg.predictor.embedding.dims = 8;
    cfg.results_path = results_path;
    return cfg;
}

// ---------------------------------------------------------------------------
// CLI subprocess helper

struct CliResult {
    int code = -1;
    std::string out, err;
};

CliResult run_cli(const std::string& args) {
    static int counter = 0;
    const fs::path base =
        fs::temp_directory_path() /
        ("linkbench_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    const std::string out_path = base.string() + ".out";
    const std::string err_path = base.string() + ".err";
    const std::string cmd = std::string(LINKBENCH_CLI) + " " + args + " > " + out_path +
                            " 2> " + err_path;
    const int status = std::system(cmd.c_str());
    CliResult result;
    result.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.out = slurp(out_path);
    result.err = slurp(err_path);
    fs::remove(out_path);
    fs::remove(err_path);
    return result;
}

AucRecord make_record(const std::string& network, const std::string& sampler,
                      const std::string& predictor, int repeat, int fold, double auc) {
    AucRecord r;
    r.network = network;
    r.domain = "social";
    r.sampler = sampler;
    r.predictor = predictor;
    r.repeat = repeat;
    r.fold = fold;
    r.auc = auc;
    r.n = 10;
    r.m = 20;
    r.seed = 7;
    return r;
}

bool records_equal(const AucRecord& a, const AucRecord& b) {
    const bool auc_equal = a.auc.has_value() == b.auc.has_value() &&
                           (!a.auc || *a.auc == doctest::Approx(*b.auc).epsilon(1e-9));
    return a.network == b.network && a.domain == b.domain && a.sampler == b.sampler &&
           a.predictor == b.predictor && a.repeat == b.repeat && a.fold == b.fold &&
           auc_equal && a.n == b.n && a.m == b.m && a.seed == b.seed && a.status == b.status;
}

}  // namespace

// ---------------------------------------------------------------------------
// manifest

TEST_CASE("manifest: parsing, trimming, and path resolution") {
    TempDir dir;
    const std::string manifest = dir / "corpus.csv";

    SUBCASE("relative paths resolve against the manifest directory") {
        write_file(manifest,
                   "name,path,domain\n"
                   " alpha , alpha.edges , social \n"
                   "\n"
                   "beta,/abs/beta.edges,other\n");
        const auto entries = load_manifest(manifest);
        REQUIRE(entries.size() == 2);
        CHECK(entries[0].name == "alpha");
        CHECK(entries[0].domain == "social");
        CHECK(entries[0].path == (dir.path / "alpha.edges").string());
        CHECK(entries[1].name == "beta");
        CHECK(entries[1].path == "/abs/beta.edges");  // absolute paths untouched
    }

    SUBCASE("all seven domain labels are accepted") {
        const auto& domains = known_domains();
        REQUIRE(domains.size() == 7);
        std::ostringstream os;
        os << "name,path,domain\n";
        for (std::size_t i = 0; i < domains.size(); ++i)
            os << "net" << i << ",x.edges," << domains[i] << "\n";
        write_file(manifest, os.str());
        const auto entries = load_manifest(manifest);
        REQUIRE(entries.size() == 7);
        for (std::size_t i = 0; i < domains.size(); ++i) CHECK(entries[i].domain == domains[i]);
        CHECK(std::find(domains.begin(), domains.end(), "social") != domains.end());
        CHECK(std::find(domains.begin(), domains.end(), "other") != domains.end());
    }

    SUBCASE("duplicate network names are rejected with the offending line") {
        write_file(manifest,
                   "name,path,domain\n"
                   "alpha,a.edges,social\n"
                   "alpha,b.edges,other\n");
        CHECK_THROWS_WITH_AS(load_manifest(manifest), doctest::Contains(":3: duplicate name"),
                             DataError);
    }

    SUBCASE("unknown domains are rejected") {
        write_file(manifest,
                   "name,path,domain\n"
                   "alpha,a.edges,astrological\n");
        CHECK_THROWS_WITH_AS(load_manifest(manifest),
                             doctest::Contains("unknown domain astrological"), DataError);
    }

    SUBCASE("structural errors") {
        write_file(manifest, "wrong,header,line\nalpha,a.edges,social\n");
        CHECK_THROWS_WITH_AS(load_manifest(manifest),
                             doctest::Contains("manifest header must be 'name,path,domain'"),
                             ParseError);

        write_file(manifest, "name,path,domain\nalpha,a.edges\n");
        CHECK_THROWS_WITH_AS(load_manifest(manifest), doctest::Contains("expected 3 fields"),
                             ParseError);

        write_file(manifest, "name,path,domain\n,a.edges,social\n");
        CHECK_THROWS_WITH_AS(load_manifest(manifest), doctest::Contains("empty network name"),
                             ParseError);

        write_file(manifest, "");
        CHECK_THROWS_WITH_AS(load_manifest(manifest), doctest::Contains("empty manifest"),
                             ParseError);

        CHECK_THROWS_WITH_AS(load_manifest(dir / "no_such_manifest.csv"),
                             doctest::Contains("cannot open manifest"), ParseError);
    }
}

// ---------------------------------------------------------------------------
// config parsing

TEST_CASE("config: defaults and full key coverage") {
    SUBCASE("empty text yields the documented defaults") {
        const RunConfig cfg = parse_config_text("");
        CHECK(cfg.master_seed == 1);
        CHECK(cfg.rho == doctest::Approx(0.8));
        CHECK(cfg.repeats == 5);
        CHECK(cfg.folds == 5);
        CHECK(cfg.workers == 0);
        CHECK(cfg.pool_cap == 200000);
        CHECK(cfg.balanced_size == 10000);
        CHECK(cfg.redraw_per_fold == false);
        CHECK(cfg.results_path == "results.csv");
        CHECK(cfg.samplers.size() == 20);
        CHECK(cfg.predictors.size() == 9);
    }

    SUBCASE("every section and key is honoured") {
        const std::string text =
            "# comment line\n"
            "master_seed = 42   ; trailing comment\n"
            "rho = 0.6\n"
            "repeats = 3\n"
            "folds = 4\n"
            "workers = 2\n"
            "pool_cap = 5000\n"
            "balanced_size = 1234\n"
            "redraw_per_fold = yes\n"
            "results = out/my_results.csv\n"
            "samplers = random-edge, forest-fire\n"
            "predictors = jaccard, top-stacking\n"
            "[embedding]\n"
            "dims = 32\n"
            "walks_per_node = 5\n"
            "walk_length = 30\n"
            "window = 4\n"
            "negatives = 3\n"
            "epochs = 2\n"
            "learning_rate = 0.05\n"
            "[logistic]\n"
            "learning_rate = 0.2\n"
            "epochs = 150\n"
            "l2 = 0.001\n"
            "[forest]\n"
            "trees = 64\n"
            "max_depth = 6\n"
            "min_leaf = 3\n"
            "histogram_bins = 16\n"
            "size_grid = 16, 32, 64\n"
            "[spectral]\n"
            "dims = 12\n"
            "[dcsbm]\n"
            "restarts = 4\n"
            "[sampler-params]\n"
            "hybrid_mix = 0.25\n"
            "induction_keep = 0.4\n"
            "burn_prob = 0.3\n"
            "restart_prob = 0.15\n"
            "jump_prob = 0.2\n"
            "mh_exponent = 0.5\n";
        const RunConfig cfg = parse_config_text(text, "my.conf");
        CHECK(cfg.master_seed == 42);
        CHECK(cfg.rho == doctest::Approx(0.6));
        CHECK(cfg.repeats == 3);
        CHECK(cfg.folds == 4);
        CHECK(cfg.workers == 2);
        CHECK(cfg.pool_cap == 5000);
        CHECK(cfg.balanced_size == 1234);
        CHECK(cfg.redraw_per_fold == true);
        CHECK(cfg.results_path == "out/my_results.csv");
        REQUIRE(cfg.samplers.size() == 2);
        CHECK(cfg.samplers[0] == SamplerKind::RandomEdge);
        CHECK(sampler_name(cfg.samplers[1]) == "forest-fire");
        REQUIRE(cfg.predictors.size() == 2);
        CHECK(std::string(predictor_name(cfg.predictors[0])) == "jaccard");
        CHECK(std::string(predictor_name(cfg.predictors[1])) == "top-stacking");
        CHECK(cfg.predictor.embedding.dims == 32);
        CHECK(cfg.predictor.embedding.walks_per_node == 5);
        CHECK(cfg.predictor.embedding.walk_length == 30);
        CHECK(cfg.predictor.embedding.window == 4);
        CHECK(cfg.predictor.embedding.negatives == 3);
        CHECK(cfg.predictor.embedding.epochs == 2);
        CHECK(cfg.predictor.embedding.learning_rate == doctest::Approx(0.05));
        CHECK(cfg.predictor.logistic.learning_rate == doctest::Approx(0.2));
        CHECK(cfg.predictor.logistic.epochs == 150);
        CHECK(cfg.predictor.logistic.l2 == doctest::Approx(0.001));
        CHECK(cfg.predictor.forest.trees == 64);
        CHECK(cfg.predictor.forest.max_depth == 6);
        CHECK(cfg.predictor.forest.min_leaf == 3);
        CHECK(cfg.predictor.forest.histogram_bins == 16);
        CHECK(cfg.predictor.forest.size_grid == std::vector<std::size_t>{16, 32, 64});
        CHECK(cfg.predictor.spectral_dims == 12);
        CHECK(cfg.predictor.dcsbm_restarts == 4);
        CHECK(cfg.sampler_params.hybrid_mix == doctest::Approx(0.25));
        CHECK(cfg.sampler_params.induction_keep == doctest::Approx(0.4));
        CHECK(cfg.sampler_params.burn_prob == doctest::Approx(0.3));
        CHECK(cfg.sampler_params.restart_prob == doctest::Approx(0.15));
        CHECK(cfg.sampler_params.jump_prob == doctest::Approx(0.2));
        CHECK(cfg.sampler_params.mh_exponent == doctest::Approx(0.5));
    }

    SUBCASE("'all' restores the full sampler and predictor sets") {
        const RunConfig cfg =
            parse_config_text("samplers = all\npredictors = all\n");
        CHECK(cfg.samplers == RunConfig::all_samplers_vec());
        CHECK(cfg.predictors.size() == 9);
    }

    SUBCASE("rho = 1 is allowed (no held-out positives, still a valid draw)") {
        CHECK(parse_config_text("rho = 1.0\n").rho == doctest::Approx(1.0));
    }
}

TEST_CASE("config: rejection diagnostics carry origin and line") {
    CHECK_THROWS_WITH_AS(parse_config_text("bogus_key = 1\n", "f.conf"),
                         doctest::Contains("f.conf:1: unknown key bogus_key"), DataError);
    CHECK_THROWS_WITH_AS(parse_config_text("\n[embedding]\nbogus = 1\n", "f.conf"),
                         doctest::Contains("f.conf:3: unknown key bogus"), DataError);
    CHECK_THROWS_WITH_AS(parse_config_text("[turbines]\ndims = 1\n", "f.conf"),
                         doctest::Contains("f.conf:2: unknown section turbines"), DataError);
    CHECK_THROWS_WITH_AS(parse_config_text("[embedding\n", "f.conf"),
                         doctest::Contains("f.conf:1: unterminated section header"), ParseError);
    CHECK_THROWS_WITH_AS(parse_config_text("rho 0.5\n", "f.conf"),
                         doctest::Contains("f.conf:1: expected key = value"), ParseError);
    CHECK_THROWS_WITH_AS(parse_config_text("samplers = random-edge, bogus-walk\n", "f.conf"),
                         doctest::Contains("unknown sampler bogus-walk"), DataError);
    CHECK_THROWS_WITH_AS(parse_config_text("predictors = jaccard, bogus\n"),
                         doctest::Contains("unknown predictor name"), DataError);
    CHECK_THROWS_WITH_AS(parse_config_text("repeats = five\n"),
                         doctest::Contains("bad integer for repeats"), DataError);
    CHECK_THROWS_WITH_AS(parse_config_text("repeats = 5x\n"),
                         doctest::Contains("bad integer for repeats"), DataError);
    CHECK_THROWS_WITH_AS(parse_config_text("rho = high\n"),
                         doctest::Contains("bad number for rho"), DataError);
    CHECK_THROWS_WITH_AS(parse_config_text("redraw_per_fold = maybe\n"),
                         doctest::Contains("bad boolean for redraw_per_fold"), DataError);
    CHECK_THROWS_WITH_AS(parse_config_text("[forest]\nsize_grid =\n"),
                         doctest::Contains("empty size_grid"), DataError);

    SUBCASE("validate() enforces bounds") {
        CHECK_THROWS_WITH_AS(parse_config_text("repeats = 0\n"),
                             doctest::Contains("repeats must be >= 1"), DataError);
        CHECK_THROWS_WITH_AS(parse_config_text("folds = 1\n"),
                             doctest::Contains("folds must be >= 2"), DataError);
        CHECK_THROWS_WITH_AS(parse_config_text("rho = 0\n"),
                             doctest::Contains("rho must be in (0, 1]"), DataError);
        CHECK_THROWS_WITH_AS(parse_config_text("rho = 1.5\n"),
                             doctest::Contains("rho must be in (0, 1]"), DataError);
        CHECK_THROWS_WITH_AS(parse_config_text("balanced_size = 0\n"),
                             doctest::Contains("balanced_size must be positive"), DataError);
        CHECK_THROWS_WITH_AS(parse_config_text("pool_cap = 0\n"),
                             doctest::Contains("pool_cap must be positive"), DataError);
        CHECK_THROWS_WITH_AS(parse_config_text("samplers =\n"),
                             doctest::Contains("sampler list is empty"), DataError);
        CHECK_THROWS_WITH_AS(parse_config_text("predictors =\n"),
                             doctest::Contains("predictor list is empty"), DataError);
        RunConfig cfg;
        cfg.workers = -1;
        CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("workers must be >= 0"),
                             DataError);
        cfg = RunConfig{};
        cfg.sampler_params.burn_prob = 1.5;
        CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("burn_prob"), DataError);
    }

    SUBCASE("parse_config_file") {
        TempDir dir;
        const std::string path = dir / "run.conf";
        write_file(path, "master_seed = 7\nrepeats = 2\n");
        const RunConfig cfg = parse_config_file(path);
        CHECK(cfg.master_seed == 7);
        CHECK(cfg.repeats == 2);
        CHECK_THROWS_WITH_AS(parse_config_file(dir / "missing.conf"),
                             doctest::Contains("cannot open config"), ParseError);
    }
}

TEST_CASE("config: hash covers the science, not the plumbing") {
    const RunConfig base;
    const std::uint64_t h = base.config_hash();
    CHECK(h == base.config_hash());  // stable

    auto hash_of = [](auto&& mutate) {
        RunConfig c;
        mutate(c);
        return c.config_hash();
    };
    CHECK(hash_of([](RunConfig& c) { c.master_seed = 2; }) != h);
    CHECK(hash_of([](RunConfig& c) { c.rho = 0.5; }) != h);
    CHECK(hash_of([](RunConfig& c) { c.repeats = 4; }) != h);
    CHECK(hash_of([](RunConfig& c) { c.folds = 4; }) != h);
    CHECK(hash_of([](RunConfig& c) { c.balanced_size = 9999; }) != h);
    CHECK(hash_of([](RunConfig& c) { c.redraw_per_fold = true; }) != h);
    CHECK(hash_of([](RunConfig& c) { c.samplers.pop_back(); }) != h);
    CHECK(hash_of([](RunConfig& c) { c.predictors.pop_back(); }) != h);
    CHECK(hash_of([](RunConfig& c) { c.predictor.embedding.dims = 128; }) != h);
    CHECK(hash_of([](RunConfig& c) { c.predictor.forest.trees = 7; }) != h);
    CHECK(hash_of([](RunConfig& c) { c.sampler_params.jump_prob = 0.3; }) != h);

    // execution details must not perturb the hash: the same science re-run with
    // more threads or a different output file is the same experiment
    CHECK(hash_of([](RunConfig& c) { c.workers = 16; }) == h);
    CHECK(hash_of([](RunConfig& c) { c.results_path = "elsewhere.csv"; }) == h);
}

TEST_CASE("config: effective worker selection") {
    RunConfig cfg;
    cfg.workers = 3;
    CHECK(cfg.effective_workers() == 3);

    cfg.workers = 0;
    ::setenv("LINKBENCH_WORKERS", "5", 1);
    CHECK(cfg.effective_workers() == 5);
    ::setenv("LINKBENCH_WORKERS", "not-a-number", 1);
    CHECK(cfg.effective_workers() >= 1);  // falls through to hardware concurrency
    ::unsetenv("LINKBENCH_WORKERS");
    CHECK(cfg.effective_workers() >= 1);

    cfg.workers = 2;
    ::setenv("LINKBENCH_WORKERS", "7", 1);
    CHECK(cfg.effective_workers() == 2);  // explicit setting wins over the env
    ::unsetenv("LINKBENCH_WORKERS");
}

// ---------------------------------------------------------------------------
// results CSV persistence

TEST_CASE("results csv: write/read round trip preserves every field") {
    TempDir dir;
    const std::string path = dir / "results.csv";

    std::vector<AucRecord> records;
    records.push_back(make_record("plain", "random-edge", "jaccard", 0, 0, 0.5));
    records.push_back(make_record("we,ird \"net\"", "random-node", "adamic-adar", 1, 2, 0.875));
    AucRecord failed = make_record("plain", "loop-erased-random-walk", "jaccard", 0, 1, 0.0);
    failed.auc.reset();
    failed.status = "infeasible: needs n-1 edges, got 40";
    records.push_back(failed);

    write_results_csv(path, records);
    const auto lines = lines_of(slurp(path));
    REQUIRE(lines.size() == 4);
    CHECK(lines[0] == "network,domain,sampler,predictor,repeat,fold,auc,n,m,seed,status");
    // sorted by (network, domain, sampler, predictor, repeat, fold)
    CHECK(lines[1] == "plain,social,loop-erased-random-walk,jaccard,0,1,,10,20,7,"
                      "\"infeasible: needs n-1 edges, got 40\"");
    CHECK(lines[2] == "plain,social,random-edge,jaccard,0,0,0.500000,10,20,7,ok");
    CHECK(lines[3] == "\"we,ird \"\"net\"\"\",social,random-node,adamic-adar,1,2,0.875000,"
                      "10,20,7,ok");

    const auto back = read_results_csv(path);
    REQUIRE(back.size() == 3);
    CHECK(records_equal(back[0], failed));
    CHECK(records_equal(back[1], records[0]));
    CHECK(records_equal(back[2], records[1]));
}

TEST_CASE("results csv: malformed inputs are diagnosed") {
    TempDir dir;
    const std::string path = dir / "bad.csv";

    CHECK_THROWS_WITH_AS(read_results_csv(dir / "missing.csv"),
                         doctest::Contains("cannot open results"), ParseError);

    write_file(path, "");
    CHECK_THROWS_WITH_AS(read_results_csv(path), doctest::Contains("empty results file"),
                         ParseError);

    write_file(path, "network,sampler,auc\n");
    CHECK_THROWS_WITH_AS(read_results_csv(path), doctest::Contains("bad results header"),
                         ParseError);

    const std::string header = "network,domain,sampler,predictor,repeat,fold,auc,n,m,seed,status\n";
    write_file(path, header + "a,social,s,p,0,0,0.5,10,20\n");
    CHECK_THROWS_WITH_AS(read_results_csv(path),
                         doctest::Contains(":2: expected 11 fields, got 9"), ParseError);

    write_file(path, header + "a,social,s,p,zero,0,0.5,10,20,7,ok\n");
    CHECK_THROWS_WITH_AS(read_results_csv(path),
                         doctest::Contains(":2: malformed numeric field"), ParseError);

    write_file(path, header + "\"a,social,s,p,0,0,0.5,10,20,7,ok\n");
    CHECK_THROWS_WITH_AS(read_results_csv(path), doctest::Contains("unterminated quote"),
                         ParseError);
}

// ---------------------------------------------------------------------------
// experiment orchestration

TEST_CASE("run_experiment: sweep arithmetic, determinism, resume, and skips") {
    TempDir dir;
    const std::string ring = write_ring_graph(dir);
    const std::vector<ManifestEntry> manifest = {
        {"karate", karate_path(), "social"},
        {"ring", ring, "other"},
    };

    const std::string base_path = dir / "results.csv";
    RunConfig cfg = small_run_config(base_path);

    std::vector<AucRecord> records;
    const RunSummary summary = run_experiment(manifest, cfg, records);

    // 2 networks x 2 samplers x 2 predictors cells, each repeats x folds records
    CHECK(summary.cells == 8);
    CHECK(summary.records == 8 * 2 * 3);
    CHECK(summary.failed_records == 0);
    CHECK(summary.skipped_networks.empty());
    REQUIRE(records.size() == 48);
    CHECK(fs::exists(base_path));
    CHECK_FALSE(fs::exists(base_path + ".partial"));  // shard is cleaned up

    for (const AucRecord& r : records) {
        CHECK(r.status == "ok");
        REQUIRE(r.auc.has_value());
        CHECK(*r.auc >= 0.0);
        CHECK(*r.auc <= 1.0);
        CHECK((r.network == "karate" || r.network == "ring"));
        CHECK(r.domain == (r.network == "karate" ? "social" : "other"));
        CHECK(r.seed == derive_seed(cfg.master_seed, r.network, r.sampler, r.predictor,
                                    r.repeat, r.fold));
    }
    const std::string baseline = slurp(base_path);

    SUBCASE("re-running the identical experiment is byte-identical") {
        RunConfig again = small_run_config(dir / "rerun.csv");
        std::vector<AucRecord> rerun;
        run_experiment(manifest, again, rerun);
        CHECK(slurp(dir / "rerun.csv") == baseline);
    }

    SUBCASE("worker count does not change the results") {
        RunConfig wide = small_run_config(dir / "wide.csv");
        wide.workers = 8;
        std::vector<AucRecord> wide_records;
        run_experiment(manifest, wide, wide_records);
        CHECK(slurp(dir / "wide.csv") == baseline);
    }

    SUBCASE("an unreadable network is skipped and reported, not fatal") {
        std::vector<ManifestEntry> with_ghost = manifest;
        with_ghost.push_back({"ghost", dir / "no_such.edges", "social"});
        RunConfig cfg2 = small_run_config(dir / "skip.csv");
        std::vector<AucRecord> out;
        const RunSummary s = run_experiment(with_ghost, cfg2, out);
        CHECK(s.cells == 8);  // only loadable networks contribute cells
        CHECK(s.records == 48);
        REQUIRE(s.skipped_networks.size() == 1);
        CHECK(s.skipped_networks[0].rfind("ghost: ", 0) == 0);
        CHECK(slurp(dir / "skip.csv") == baseline);
    }

    SUBCASE("complete cells in the partial shard are reused verbatim") {
        // fabricate a shard where one full cell carries sentinel AUCs; if the
        // harness re-ran that cell the sentinels would disappear
        std::ostringstream shard;
        shard << "network,domain,sampler,predictor,repeat,fold,auc,n,m,seed,status\n";
        std::size_t sentinels = 0;
        for (const AucRecord& r : records) {
            if (r.network == "karate" && r.sampler == "random-edge" &&
                r.predictor == "jaccard") {
                AucRecord tagged = r;
                tagged.auc = 0.123456;
                shard << "karate,social,random-edge,jaccard," << tagged.repeat << ','
                      << tagged.fold << ",0.123456," << tagged.n << ',' << tagged.m << ','
                      << tagged.seed << ",ok\n";
                ++sentinels;
            }
        }
        REQUIRE(sentinels == 6);
        // a second cell left incomplete: only its first record is present, so
        // the harness must recompute it from scratch
        const AucRecord& partial = *std::find_if(
            records.begin(), records.end(), [](const AucRecord& r) {
                return r.network == "ring" && r.sampler == "random-node" &&
                       r.predictor == "adamic-adar" && r.repeat == 0 && r.fold == 0;
            });
        shard << "ring,other,random-node,adamic-adar,0,0,0.999999," << partial.n << ','
              << partial.m << ',' << partial.seed << ",ok\n";

        const std::string resume_path = dir / "resume.csv";
        write_file(resume_path + ".partial", shard.str());
        RunConfig cfg3 = small_run_config(resume_path);
        std::vector<AucRecord> resumed;
        const RunSummary s = run_experiment(manifest, cfg3, resumed);
        CHECK(s.records == 48);
        CHECK_FALSE(fs::exists(resume_path + ".partial"));

        std::size_t sentinel_hits = 0;
        for (const AucRecord& r : resumed) {
            if (r.network == "karate" && r.sampler == "random-edge" &&
                r.predictor == "jaccard") {
                REQUIRE(r.auc.has_value());
                CHECK(*r.auc == doctest::Approx(0.123456));  // reused, not recomputed
                ++sentinel_hits;
            }
            if (r.network == "ring" && r.sampler == "random-node" &&
                r.predictor == "adamic-adar") {
                REQUIRE(r.auc.has_value());
                CHECK(*r.auc != doctest::Approx(0.999999));  // recomputed from scratch
            }
        }
        CHECK(sentinel_hits == 6);
    }

    SUBCASE("resuming from a faithful shard reproduces the uninterrupted run") {
        // simulate an interruption after three cells: their 18 rows land in the
        // shard, and the resumed run must complete to the same bytes
        std::ostringstream shard;
        shard << "network,domain,sampler,predictor,repeat,fold,auc,n,m,seed,status\n";
        std::set<std::string> keep = {"karate|random-edge|jaccard",
                                      "karate|random-node|jaccard",
                                      "ring|random-edge|adamic-adar"};
        char buf[32];
        for (const AucRecord& r : records) {
            if (!keep.count(r.network + "|" + r.sampler + "|" + r.predictor)) continue;
            std::snprintf(buf, sizeof(buf), "%.6f", *r.auc);
            shard << r.network << ',' << r.domain << ',' << r.sampler << ',' << r.predictor
                  << ',' << r.repeat << ',' << r.fold << ',' << buf << ',' << r.n << ','
                  << r.m << ',' << r.seed << ",ok\n";
        }
        const std::string path = dir / "faithful.csv";
        write_file(path + ".partial", shard.str());
        RunConfig cfg4 = small_run_config(path);
        std::vector<AucRecord> resumed;
        run_experiment(manifest, cfg4, resumed);
        CHECK(slurp(path) == baseline);
    }

    SUBCASE("a zero-byte leftover shard is tolerated") {
        const std::string path = dir / "empty_shard.csv";
        write_file(path + ".partial", "");
        RunConfig cfg5 = small_run_config(path);
        std::vector<AucRecord> out;
        const RunSummary s = run_experiment(manifest, cfg5, out);
        CHECK(s.records == 48);
        CHECK(slurp(path) == baseline);
    }

    SUBCASE("a different master seed changes the results") {
        RunConfig other = small_run_config(dir / "other_seed.csv");
        other.master_seed = 100;
        std::vector<AucRecord> out;
        run_experiment(manifest, other, out);
        CHECK(slurp(dir / "other_seed.csv") != baseline);
    }

    SUBCASE("infeasible cells surface as failed records and a partial summary") {
        RunConfig hard = small_run_config(dir / "hard.csv");
        hard.samplers = {SamplerKind::LoopErasedWalk};  // rho 0.8 needs > n-1 edges
        std::vector<AucRecord> out;
        const RunSummary s = run_experiment(manifest, hard, out);
        CHECK(s.cells == 4);
        CHECK(s.records == 24);
        CHECK(s.failed_records == 24);
        for (const AucRecord& r : out) {
            CHECK_FALSE(r.auc.has_value());
            CHECK(r.status != "ok");
        }
    }
}

TEST_CASE("run metadata: JSON sidecar carries the audit trail") {
    TempDir dir;
    RunConfig cfg;
    cfg.master_seed = 31337;
    cfg.rho = 0.75;
    RunSummary summary;
    summary.cells = 12;
    summary.records = 300;
    summary.failed_records = 25;
    summary.skipped_networks = {"ghost: cannot open edge list"};

    const std::string path = dir / "meta.json";
    write_run_metadata(path, cfg, summary);
    const nlohmann::json meta = nlohmann::json::parse(slurp(path));
    CHECK(meta.at("toolkit_version").get<std::string>() == kToolkitVersion);
    CHECK(meta.at("config_hash").get<std::uint64_t>() == cfg.config_hash());
    CHECK(meta.at("master_seed").get<std::uint64_t>() == 31337);
    CHECK(meta.at("rho").get<double>() == doctest::Approx(0.75));
    CHECK(meta.at("repeats").get<int>() == 5);
    CHECK(meta.at("folds").get<int>() == 5);
    CHECK(meta.at("cells").get<std::size_t>() == 12);
    CHECK(meta.at("records").get<std::size_t>() == 300);
    CHECK(meta.at("failed_records").get<std::size_t>() == 25);
    REQUIRE(meta.at("skipped_networks").size() == 1);
    CHECK(meta["skipped_networks"][0].get<std::string>() == "ghost: cannot open edge list");
}

// ---------------------------------------------------------------------------
// table writers

TEST_CASE("aggregate csv: table plus support companion") {
    TempDir dir;
    AggregateTable table;
    table.domain = "social";
    table.categories = {"edge-based", "edge-based", "node-based"};
    table.samplers = {"random-edge", "random-node-edge", "random-node"};
    table.predictors = {"jaccard", "adamic-adar"};
    table.cells = {
        {{0.8, 50, false}, {0.9, 50, true}},
        {{0.7, 25, true}, {0.0, 0, false}},   // empty cell: no support
        {{0.6, 10, true}, {0.6, 10, true}},   // tie: both best
    };

    const std::string path = dir / "table_social.csv";
    write_aggregate_csv(path, table);

    const auto lines = lines_of(slurp(path));
    REQUIRE(lines.size() == 4);
    CHECK(lines[0] == "category,sampler,jaccard,adamic-adar,best");
    CHECK(lines[1] == "edge-based,random-edge,0.800000,0.900000,adamic-adar");
    CHECK(lines[2] == "edge-based,random-node-edge,0.700000,,jaccard");
    CHECK(lines[3] == "node-based,random-node,0.600000,0.600000,jaccard|adamic-adar");

    const auto sup = lines_of(slurp(dir / "table_social_support.csv"));
    REQUIRE(sup.size() == 4);
    CHECK(sup[0] == "category,sampler,jaccard,adamic-adar");
    CHECK(sup[1] == "edge-based,random-edge,50,50");
    CHECK(sup[2] == "edge-based,random-node-edge,25,0");
    CHECK(sup[3] == "node-based,random-node,10,10");
}

TEST_CASE("pca csv: schema and formatting") {
    TempDir dir;
    PcaResult result;
    result.entities = {"alpha", "be,ta"};
    result.labels = {"social", "other"};
    result.pc1 = {1.5, -0.25};
    result.pc2 = {0.0, 2.0};
    result.explained_1 = 0.625;
    result.explained_2 = 0.25;

    const std::string path = dir / "pca.csv";
    write_pca_csv(path, result);
    const auto lines = lines_of(slurp(path));
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == "entity,domain_or_predictor,pc1,pc2,explained_variance_1,"
                      "explained_variance_2");
    CHECK(lines[1] == "alpha,social,1.500000,0.000000,0.625000,0.250000");
    CHECK(lines[2] == "\"be,ta\",other,-0.250000,2.000000,0.625000,0.250000");
}

// ---------------------------------------------------------------------------
// command-line interface

TEST_CASE("cli: listing commands") {
    const CliResult samplers = run_cli("list-samplers");
    CHECK(samplers.code == 0);
    const auto slines = lines_of(samplers.out);
    REQUIRE(slines.size() == 20);
    CHECK(slines[0] == "random-edge\tedge-based");
    std::size_t neighbor = 0;
    bool saw_lerw = false;
    for (const std::string& line : slines) {
        if (line.find("\tneighbor-based") != std::string::npos) ++neighbor;
        if (line == "loop-erased-random-walk\tnode-jump-based") saw_lerw = true;
    }
    CHECK(neighbor == 8);
    CHECK(saw_lerw);

    const CliResult predictors = run_cli("list-predictors");
    CHECK(predictors.code == 0);
    const auto plines = lines_of(predictors.out);
    REQUIRE(plines.size() == 9);
    CHECK(plines[0] == "adamic-adar");
    CHECK(plines[8] == "top-stacking");
}

TEST_CASE("cli: sample command diagnostics and exit codes") {
    TempDir dir;
    const std::string karate = karate_path();

    SUBCASE("random-edge at rho 0.8 writes round(rho*m) edges") {
        const std::string out = dir / "sample.edges";
        const CliResult r =
            run_cli("sample " + karate + " random-edge --rho 0.8 --seed 7 --out " + out);
        CHECK(r.code == 0);
        CHECK(r.out.find("retained 62 of 78 edges") != std::string::npos);
        CHECK(lines_of(slurp(out)).size() == 62);
    }

    SUBCASE("rho 1 retains the whole graph") {
        const std::string out = dir / "full.edges";
        const CliResult r =
            run_cli("sample " + karate + " random-edge --rho 1.0 --out " + out);
        CHECK(r.code == 0);
        CHECK(r.out.find("retained 78 of 78 edges") != std::string::npos);
        CHECK(r.out.find("achieved retention 1.0000") != std::string::npos);
        CHECK(lines_of(slurp(out)).size() == 78);
    }

    SUBCASE("loop-erased walk reports a tree diagnostic when feasible") {
        const std::string out = dir / "lerw.edges";
        const CliResult r = run_cli("sample " + karate +
                                    " loop-erased-random-walk --rho 0.25 --seed 3 --out " + out);
        CHECK(r.code == 0);
        CHECK(r.out.find("retained 20 of 78 edges") != std::string::npos);
        CHECK(r.out.find("tree diagnostic") != std::string::npos);
        CHECK(r.out.find("(acyclic)") != std::string::npos);
    }

    SUBCASE("neighbor-based samplers report connectivity") {
        const std::string out = dir / "walk.edges";
        const CliResult r =
            run_cli("sample " + karate + " random-walk --rho 0.5 --seed 11 --out " + out);
        CHECK(r.code == 0);
        CHECK(r.out.find("connectivity diagnostic: 1 component over sampled nodes") !=
              std::string::npos);
    }

    SUBCASE("infeasible draws exit 2 with a diagnosis") {
        const CliResult r = run_cli("sample " + karate +
                                    " loop-erased-random-walk --rho 0.8 --out " +
                                    (dir / "never.edges"));
        CHECK(r.code == 2);
        CHECK(r.err.find("infeasible sample") != std::string::npos);
    }

    SUBCASE("usage errors exit 1") {
        CHECK(run_cli("sample " + karate + " bogus-sampler --out " + (dir / "x.edges")).code ==
              1);
        CHECK(run_cli("").code == 1);                 // missing subcommand
        CHECK(run_cli("sample").code == 1);           // missing positional arguments
        CHECK(run_cli("frobnicate " + karate).code == 1);
    }

    SUBCASE("unreadable graphs exit 2") {
        const CliResult r =
            run_cli("sample " + (dir / "missing.edges") + " random-edge --out " +
                    (dir / "y.edges"));
        CHECK(r.code == 2);
    }
}

TEST_CASE("cli: run, aggregate, and pca end to end") {
    TempDir dir;
    write_file(dir / "manifest.csv", "name,path,domain\nkarate," + karate_path() + ",social\n");
    write_file(dir / "run.conf",
               "repeats = 2\n"
               "folds = 2\n"
               "balanced_size = 400\n"
               "workers = 2\n"
               "samplers = random-edge\n"
               "predictors = jaccard\n");
    const std::string results = dir / "results.csv";

    const CliResult run = run_cli("run --manifest " + (dir / "manifest.csv") + " --config " +
                                  (dir / "run.conf") + " --results " + results + " --seed 5");
    CHECK(run.code == 0);
    CHECK(run.out.find("cells: 1") != std::string::npos);
    CHECK(run.out.find("records: 4") != std::string::npos);
    CHECK(run.out.find("failed records: 0") != std::string::npos);
    REQUIRE(fs::exists(results));
    CHECK(read_results_csv(results).size() == 4);
    REQUIRE(fs::exists(results + ".meta.json"));
    const nlohmann::json meta = nlohmann::json::parse(slurp(results + ".meta.json"));
    CHECK(meta.at("master_seed").get<std::uint64_t>() == 5);
    CHECK(meta.at("records").get<std::size_t>() == 4);

    SUBCASE("aggregate writes one table per domain") {
        const std::string agg_dir = dir / "agg";
        const CliResult agg = run_cli("aggregate " + results + " --out-dir " + agg_dir);
        CHECK(agg.code == 0);
        const std::string table = agg_dir + "/table_social.csv";
        REQUIRE(fs::exists(table));
        const auto lines = lines_of(slurp(table));
        REQUIRE(lines.size() == 21);  // header + all 20 sampler rows
        CHECK(lines[0].rfind("category,sampler,adamic-adar,jaccard,", 0) == 0);
        bool found = false;
        for (const std::string& line : lines)
            if (line.rfind("edge-based,random-edge,", 0) == 0) found = true;
        CHECK(found);
        CHECK(fs::exists(agg_dir + "/table_social_support.csv"));
    }

    SUBCASE("pca over an incomplete grid excludes every network and fails loudly") {
        // one sampler/predictor pair cannot fill the 180-column grid
        const CliResult pca =
            run_cli("pca " + results + " --mode networks --out " + (dir / "pca.csv"));
        CHECK(pca.code == 2);
    }

    SUBCASE("pca usage errors") {
        CHECK(run_cli("pca " + results + " --mode turbines --out " + (dir / "p.csv")).code == 1);
        CHECK(run_cli("pca " + results + " --mode samplers --out " + (dir / "p.csv")).code == 2);
    }

    SUBCASE("aggregate on a missing results file exits 2") {
        CHECK(run_cli("aggregate " + (dir / "nothing.csv")).code == 2);
    }

    SUBCASE("a skipped network downgrades the run to exit 3") {
        write_file(dir / "ghostly.csv", "name,path,domain\nkarate," + karate_path() +
                                            ",social\nghost,missing.edges,social\n");
        const CliResult r = run_cli("run --manifest " + (dir / "ghostly.csv") + " --config " +
                                    (dir / "run.conf") + " --results " + (dir / "r2.csv"));
        CHECK(r.code == 3);
        CHECK(r.out.find("skipped network: ghost") != std::string::npos);
    }

    SUBCASE("a config error exits 1 before any work") {
        const CliResult r = run_cli("run --manifest " + (dir / "manifest.csv") +
                                    " --samplers bogus-walk --results " + (dir / "r3.csv"));
        CHECK(r.code == 1);
        CHECK(r.err.find("config error") != std::string::npos);
        CHECK_FALSE(fs::exists(dir / "r3.csv"));
    }
}
