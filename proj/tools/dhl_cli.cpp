// command-line front end: build, query, update, workload, verify
//
// exit codes: 0 success, 1 usage, 2 data error, 3 verification failure

#include <dhl/index.hpp>
#include <dhl/maintenance.hpp>
#include <dhl/serialize.hpp>
#include <dhl/verify.hpp>
#include <dhl/workload.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>

using namespace dhl;
using std::cout;
using std::cerr;
using std::endl;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_usage = 1;
constexpr int exit_data = 2;
constexpr int exit_verify = 3;

double seconds_since(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

HierarchicalIndex load_index(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw data_error("cannot open index file " + path);
    return read_index(in);
}

void store_index(const std::string &path, const HierarchicalIndex &index)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw data_error("cannot write index file " + path);
    write_index(out, index);
}

unsigned worker_count(unsigned from_flag)
{
    if (from_flag > 0)
        return from_flag;
    if (const char *env = std::getenv("DHL_WORKERS"))
        return static_cast<unsigned>(std::max(1l, std::strtol(env, nullptr, 10)));
    return std::max(1u, std::thread::hardware_concurrency());
}

std::string show_distance(distance_t d)
{
    return d >= infinity ? "inf" : std::to_string(d);
}

struct BuildArgs {
    std::string gr, co, out, dataset;
    double beta = 0.2;
    uint32_t leaf_size = 16;
    uint64_t seed = 0;
};

int run_build(const BuildArgs &args)
{
    std::ifstream gr(args.gr);
    if (!gr)
        throw data_error("cannot open " + args.gr);
    auto t0 = std::chrono::steady_clock::now();
    Graph g = parse_dimacs_gr(gr);
    cout << "graph: " << g.node_count() << " vertices, " << g.edge_count()
         << " edges (" << g.arcs_read << " arcs";
    if (g.merge_conflicts)
        cout << ", " << g.merge_conflicts << " merge conflicts";
    if (g.self_loops_dropped)
        cout << ", " << g.self_loops_dropped << " self-loops dropped";
    cout << ")" << endl;
    if (!args.co.empty()) {
        std::ifstream co(args.co);
        if (!co)
            throw data_error("cannot open " + args.co);
        uint32_t missing = parse_dimacs_co(co, g);
        if (missing)
            cout << "coordinates: " << missing
                 << " vertices without coordinates, partitioner falls back" << endl;
    }
    BuildOptions opt;
    opt.hierarchy.beta = args.beta;
    opt.hierarchy.leaf_size = args.leaf_size;
    opt.seed = args.seed;
    opt.dataset = args.dataset.empty()
        ? std::filesystem::path(args.gr).stem().string() : args.dataset;
    HierarchicalIndex index = HierarchicalIndex::build(std::move(g), opt,
        static_cast<uint64_t>(std::time(nullptr)));
    double secs = seconds_since(t0);

    LabelStats stats = label_stats(index.labels);
    cout << "construction time: " << secs << " s" << endl;
    cout << "labelling: " << stats.entries << " entries, "
         << stats.bytes / (1024.0 * 1024.0) << " MB, max length " << stats.max_length << endl;
    cout << "shortcuts: " << index.hu.shortcut_count() << " ("
         << index.hu.shortcut_count() * 16 / (1024.0 * 1024.0) << " MB)" << endl;
    cout << "hierarchy: " << index.hq.node_count() << " nodes, depth "
         << int(index.hq.tree_depth()) << endl;
    store_index(args.out, index);
    cout << "index written to " << args.out << endl;
    return exit_ok;
}

struct QueryArgs {
    std::string index, pairs, out;
    uint64_t random_count = 0;
    uint64_t seed = 0;
};

int run_query(const QueryArgs &args)
{
    HierarchicalIndex index = load_index(args.index);
    const Graph &g = index.graph;
    std::vector<std::pair<NodeID,NodeID>> pairs;     // external IDs
    if (!args.pairs.empty()) {
        std::ifstream in(args.pairs);
        if (!in)
            throw data_error("cannot open " + args.pairs);
        pairs = workload::parse_pair_file(in);
    } else {
        Rng rng(args.seed);
        for (uint64_t i = 0; i < args.random_count; i++)
            pairs.emplace_back(
                g.external_id(static_cast<NodeID>(rng.next_below(g.node_count()))),
                g.external_id(static_cast<NodeID>(rng.next_below(g.node_count()))));
    }

    std::ofstream csv;
    if (!args.out.empty()) {
        csv.open(args.out);
        if (!csv)
            throw data_error("cannot write " + args.out);
        csv << "u,v,distance\n";
    }
    std::vector<uint64_t> lat;
    lat.reserve(pairs.size());
    size_t bad = 0;
    for (auto [eu, ev] : pairs) {
        auto s = g.to_internal(eu), t = g.to_internal(ev);
        if (!s || !t) {
            cerr << "skipping unknown pair (" << eu << "," << ev << ")" << endl;
            bad++;
            continue;
        }
        auto q0 = std::chrono::steady_clock::now();
        distance_t d = index.query(*s, *t);
        auto q1 = std::chrono::steady_clock::now();
        lat.push_back(std::chrono::duration_cast<std::chrono::nanoseconds>(q1 - q0).count());
        if (csv.is_open())
            csv << eu << ',' << ev << ',' << show_distance(d) << '\n';
    }
    if (!lat.empty()) {
        std::vector<uint64_t> sorted = lat;
        std::sort(sorted.begin(), sorted.end());
        uint64_t total = 0;
        for (uint64_t v : lat)
            total += v;
        cout << "queries: " << lat.size() << " (skipped " << bad << ")" << endl;
        cout << "mean " << total / double(lat.size()) / 1000.0 << " us, p50 "
             << sorted[sorted.size() / 2] / 1000.0 << " us, p99 "
             << sorted[sorted.size() * 99 / 100] / 1000.0 << " us" << endl;
    } else {
        cout << "no valid query pairs" << endl;
    }
    return exit_ok;
}

struct UpdateArgs {
    std::string index, batch, out, report, mode = "seq";
    unsigned workers = 0;
    bool inplace = false;
};

int run_update(const UpdateArgs &args)
{
    HierarchicalIndex index = load_index(args.index);
    std::ifstream in(args.batch);
    if (!in)
        throw data_error("cannot open " + args.batch);
    UpdateBatch batch = workload::to_update_batch(workload::parse_batch_lines(in), index.graph);
    if (batch.duplicates_collapsed)
        cout << "collapsed " << batch.duplicates_collapsed
             << " duplicate edge updates (last writer wins)" << endl;
    UpdateMode mode = args.mode == "par" ? UpdateMode::parallel : UpdateMode::sequential;
    MaintenanceReport rep;
    try {
        rep = apply_batch(index, batch, mode, worker_count(args.workers));
    } catch (const std::invalid_argument &e) {
        throw data_error(std::string("batch rejected: ") + e.what());
    }
    cout << MaintenanceReport::csv_header() << endl << rep.csv_row() << endl;
    if (!args.report.empty()) {
        bool fresh = !std::filesystem::exists(args.report);
        std::ofstream rf(args.report, std::ios::app);
        if (!rf)
            throw data_error("cannot write " + args.report);
        if (fresh)
            rf << MaintenanceReport::csv_header() << '\n';
        rf << rep.csv_row() << '\n';
    }
    store_index(args.inplace ? args.index : args.out, index);
    return exit_ok;
}

struct WorkloadArgs {
    std::string gr, protocol, out;
    uint64_t seed = 0;
    size_t batches = 10;
    size_t batch_size = 1000;
    size_t pool = 5000;
    size_t steps = 10;
    uint64_t lmin = 1000;
    size_t per_band = 10000;
};

int run_workload(const WorkloadArgs &args)
{
    std::ifstream in(args.gr);
    if (!in)
        throw data_error("cannot open " + args.gr);
    Graph g = parse_dimacs_gr(in);
    std::filesystem::create_directories(args.out);
    workload::GeneratedWorkload result;
    if (args.protocol == "x2-restore") {
        result = workload::generate_x2_restore(g, args.seed, args.batches, args.batch_size, args.out);
    } else if (args.protocol == "multiplier-sweep") {
        result = workload::generate_multiplier_sweep(g, args.seed, std::min<size_t>(args.batches, 9),
            args.batch_size, args.out);
    } else if (args.protocol == "distance-bands") {
        workload::BandSpec spec;
        spec.l_min = args.lmin;
        spec.pairs_per_band = args.per_band;
        result = workload::generate_distance_bands(g, args.seed, spec, args.out);
    } else if (args.protocol == "scalability") {
        result = workload::generate_scalability(g, args.seed, args.pool, args.steps, args.out);
    } else {
        throw CLI::ValidationError("--protocol", "unknown protocol " + args.protocol);
    }
    for (const std::string &w : result.warnings)
        cerr << "warning: " << w << endl;
    for (const std::string &f : result.files)
        cout << f << endl;
    return exit_ok;
}

struct VerifyArgs {
    std::string index, level = "query";
    size_t samples = 1000;
    uint64_t seed = 0;
};

int run_verify(const VerifyArgs &args)
{
    HierarchicalIndex index = load_index(args.index);
    VerifyResult res;
    if (args.level == "query") {
        res = verify_queries(index, args.samples, args.seed);
    } else if (args.level == "labels") {
        res = verify_labels(index, args.samples, args.seed);
    } else if (args.level == "shortcuts") {
        res = verify_shortcuts(index, args.samples, args.seed);
    } else if (args.level == "full") {
        res = verify_full(index, index.meta.beta);
    } else {
        throw CLI::ValidationError("--level", "unknown level " + args.level);
    }
    if (res.ok()) {
        cout << "OK: " << res.checked << " checks passed (level " << args.level << ")" << endl;
        return exit_ok;
    }
    cerr << res.mismatches.size() << "+ mismatches among " << res.checked << " checks:" << endl;
    for (const std::string &m : res.mismatches)
        cerr << "  " << m << endl;
    return exit_verify;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"dual-hierarchy 2-hop labelling for dynamic road networks"};
    app.require_subcommand(1);

    BuildArgs build_args;
    CLI::App *build = app.add_subcommand("build", "construct an index from a DIMACS graph");
    build->add_option("--gr", build_args.gr, "DIMACS .gr file")->required();
    build->add_option("--co", build_args.co, "DIMACS .co coordinate file");
    build->add_option("--beta", build_args.beta, "balance parameter in (0,0.5]")
        ->default_val(0.2);
    build->add_option("--leaf-size", build_args.leaf_size, "partition leaf threshold")
        ->default_val(16);
    build->add_option("--seed", build_args.seed, "build seed (recorded in metadata)");
    build->add_option("--dataset", build_args.dataset, "dataset name for metadata");
    build->add_option("--out", build_args.out, "output index file")->required();

    QueryArgs query_args;
    CLI::App *query = app.add_subcommand("query", "answer distance queries");
    query->add_option("--index", query_args.index, "index file")->required();
    auto *pairs_opt = query->add_option("--pairs", query_args.pairs, "file of 'u v' lines");
    query->add_option("--random", query_args.random_count, "number of random pairs")
        ->excludes(pairs_opt);
    query->add_option("--seed", query_args.seed, "seed for random pairs");
    query->add_option("--out", query_args.out, "CSV output path");

    UpdateArgs update_args;
    CLI::App *update = app.add_subcommand("update", "apply a weight update batch");
    update->add_option("--index", update_args.index, "index file")->required();
    update->add_option("--batch", update_args.batch, "batch file of 'u v w' lines")->required();
    update->add_option("--mode", update_args.mode, "seq or par")
        ->check(CLI::IsMember({"seq", "par"}))->default_val("seq");
    update->add_option("--workers", update_args.workers,
        "worker threads (default: DHL_WORKERS or hardware)");
    auto *inplace_opt = update->add_flag("--inplace", update_args.inplace,
        "overwrite the input index");
    update->add_option("--out", update_args.out, "output index file")->excludes(inplace_opt);
    update->add_option("--report", update_args.report, "append a CSV report row here");

    WorkloadArgs workload_args;
    CLI::App *wl = app.add_subcommand("workload", "generate update/query workloads");
    wl->add_option("--gr", workload_args.gr, "DIMACS .gr file")->required();
    wl->add_option("--protocol", workload_args.protocol,
        "x2-restore | multiplier-sweep | distance-bands | scalability")->required();
    wl->add_option("--seed", workload_args.seed, "generator seed");
    wl->add_option("--batches", workload_args.batches, "number of batches")->default_val(10);
    wl->add_option("--batch-size", workload_args.batch_size, "updates per batch")
        ->default_val(1000);
    wl->add_option("--pool", workload_args.pool, "scalability update pool size")
        ->default_val(5000);
    wl->add_option("--steps", workload_args.steps, "scalability batch count")->default_val(10);
    wl->add_option("--lmin", workload_args.lmin, "smallest band boundary")->default_val(1000);
    wl->add_option("--per-band", workload_args.per_band, "query pairs per band")
        ->default_val(10000);
    wl->add_option("--out", workload_args.out, "output directory")->required();

    VerifyArgs verify_args;
    CLI::App *verify = app.add_subcommand("verify", "check an index against oracles");
    verify->add_option("--index", verify_args.index, "index file")->required();
    verify->add_option("--samples", verify_args.samples, "checks per level")->default_val(1000);
    verify->add_option("--seed", verify_args.seed, "sampling seed");
    verify->add_option("--level", verify_args.level, "query | labels | shortcuts | full")
        ->check(CLI::IsMember({"query", "labels", "shortcuts", "full"}))->default_val("query");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (build->parsed())
            return run_build(build_args);
        if (query->parsed())
            return run_query(query_args);
        if (update->parsed()) {
            if (!update_args.inplace && update_args.out.empty()) {
                cerr << "update requires --inplace or --out" << endl;
                return exit_usage;
            }
            return run_update(update_args);
        }
        if (wl->parsed())
            return run_workload(workload_args);
        if (verify->parsed())
            return run_verify(verify_args);
    } catch (const CLI::ValidationError &e) {
        cerr << e.what() << endl;
        return exit_usage;
    } catch (const parse_error &e) {
        cerr << "parse error: " << e.what() << endl;
        return exit_data;
    } catch (const data_error &e) {
        cerr << "data error: " << e.what() << endl;
        return exit_data;
    } catch (const std::invalid_argument &e) {
        cerr << "error: " << e.what() << endl;
        return exit_data;
    } catch (const std::exception &e) {
        cerr << "error: " << e.what() << endl;
        return exit_data;
    }
    return exit_usage;
}
