// Command-line front door: offline indexing, top-k union search, and
// benchmark evaluation over an indexed lake.
#include <chrono>
#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "santos/errors.hpp"
#include "santos/eval.hpp"
#include "santos/index.hpp"
#include "santos/log.hpp"
#include "santos/query.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitQuerySemantics = 3;

struct Config {
    std::string lake_dir;
    std::string kb_dir;
    std::string index_dir;
    std::string table;
    std::string intent;
    std::string queries_dir;
    std::string truth_file;
    std::string out_dir = ".";
    std::string mode = "full";
    std::string map_variant = "paper";
    std::string log_level;
    int k = 10;
    bool no_kb = false;
    bool no_synth = false;
};

int cmd_index(const Config& cfg) {
    santos::BuildOptions options;
    options.use_kb = !cfg.no_kb;
    options.use_synth = !cfg.no_synth;
    if (options.use_kb && cfg.kb_dir.empty()) {
        std::cerr << "error: --kb is required unless --no-kb is given\n";
        return kExitUsage;
    }

    auto t0 = std::chrono::steady_clock::now();
    santos::StageTimings timings;
    santos::SearchIndex idx = santos::build_index(cfg.lake_dir, cfg.kb_dir, options, &timings);
    santos::save_index(idx, cfg.index_dir);
    double total_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    double write_ms = total_ms - timings.ingest_ms - timings.cs_ms - timings.rs_ms -
                      timings.fd_ms - timings.synth_ms;

    std::fprintf(stderr,
                 "indexed %lld tables into %s\n"
                 "  ingest  %8.1f ms\n"
                 "  cs      %8.1f ms\n"
                 "  rs      %8.1f ms\n"
                 "  fd      %8.1f ms\n"
                 "  synth   %8.1f ms\n"
                 "  write   %8.1f ms\n",
                 static_cast<long long>(idx.meta.stats.at("tables")), cfg.index_dir.c_str(),
                 timings.ingest_ms, timings.cs_ms, timings.rs_ms, timings.fd_ms, timings.synth_ms,
                 write_ms);
    return kExitOk;
}

int cmd_query(const Config& cfg) {
    santos::SearchIndex idx = santos::load_index(cfg.index_dir);
    santos::KbStore kb = idx.meta.kb_enabled && !idx.meta.kb_dir.empty()
                             ? santos::load_kb(idx.meta.kb_dir)
                             : santos::empty_kb();
    santos::LakeTable q = santos::ingest_table(cfg.table);
    int intent = santos::resolve_column(q, cfg.intent);
    santos::SearchMode mode = santos::search_mode_from_string(cfg.mode);

    santos::QuerySemanticTree tree = santos::build_query_tree(q, intent, kb, idx.synth);
    auto results = santos::search_top_k(idx, kb, tree, cfg.k, mode);
    std::cout << santos::results_to_tsv(results);
    return kExitOk;
}

int cmd_eval(const Config& cfg) {
    santos::SearchMode mode = santos::search_mode_from_string(cfg.mode);
    santos::MapVariant variant = santos::map_variant_from_string(cfg.map_variant);
    santos::EvalReport report =
        santos::run_benchmark(cfg.index_dir, cfg.queries_dir, cfg.truth_file, cfg.k, mode, variant);
    santos::write_report(report, cfg.out_dir);
    std::fprintf(stderr, "evaluated %d queries (%d skipped); report in %s\n", report.evaluated,
                 report.skipped, cfg.out_dir.c_str());
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"table union search over a CSV data lake"};
    app.require_subcommand(1);

    Config cfg;
    app.add_option("--log", cfg.log_level, "log level: debug|info|warn|error|off");

    auto* index = app.add_subcommand("index", "pre-process a lake into a search index");
    index->add_option("--lake", cfg.lake_dir, "directory of *.csv tables")->required();
    index->add_option("--kb", cfg.kb_dir, "directory with the KB tsv files");
    index->add_option("--out", cfg.index_dir, "output index directory")->required();
    index->add_flag("--no-kb", cfg.no_kb, "skip the external KB side");
    index->add_flag("--no-synth", cfg.no_synth, "skip the synthesized side");

    auto* query = app.add_subcommand("query", "rank unionable tables for a query table");
    query->add_option("--index", cfg.index_dir, "index directory")->required();
    query->add_option("--table", cfg.table, "query table csv")->required();
    query->add_option("--intent", cfg.intent, "intent column: header name or 0-based index")
        ->required();
    query->add_option("--k", cfg.k, "number of results")->check(CLI::PositiveNumber);
    query->add_option("--mode", cfg.mode, "full|kb|synth");

    auto* eval = app.add_subcommand("eval", "run a benchmark and report P@k/R@k/MAP@k");
    eval->add_option("--index", cfg.index_dir, "index directory")->required();
    eval->add_option("--queries", cfg.queries_dir, "directory with query csvs + manifest.csv")
        ->required();
    eval->add_option("--truth", cfg.truth_file, "ground truth csv")->required();
    eval->add_option("--k", cfg.k, "cutoff")->check(CLI::PositiveNumber);
    eval->add_option("--out", cfg.out_dir, "report output directory");
    eval->add_option("--mode", cfg.mode, "full|kb|synth");
    eval->add_option("--map-variant", cfg.map_variant, "paper|standard");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (!cfg.log_level.empty())
        santos::log::set_level(santos::log::level_from_string(cfg.log_level));

    try {
        if (index->parsed()) return cmd_index(cfg);
        if (query->parsed()) return cmd_query(cfg);
        if (eval->parsed()) return cmd_eval(cfg);
    } catch (const santos::IntentNotTextualError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitQuerySemantics;
    } catch (const santos::EmptyIntentSemanticsError& e) {
        std::cerr << "error: " << e.what()
                  << " (the query cannot anchor a search; try another intent column)\n";
        return kExitQuerySemantics;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
