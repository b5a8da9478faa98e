#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "santos/query.hpp"

namespace santos {

// Binary relevance labels: presence of (query, table) means unionable.
struct GroundTruth {
    std::map<std::string, std::set<std::string>> unionable;

    const std::set<std::string>* for_query(const std::string& query_id) const;
};

// CSV with a header row: query_table_id,data_lake_table_id.
GroundTruth load_ground_truth(const std::filesystem::path& path);

enum class MapVariant { PaperLiteral, StandardAp };

MapVariant map_variant_from_string(const std::string& name);

struct PrAtK {
    double precision = 0.0;          // hits / k, unreturned slots count as wrong
    std::optional<double> recall;    // hits / |truth|; empty truth -> unset
    int hits = 0;
};

PrAtK precision_recall_at_k(const std::vector<std::string>& ranked,
                            const std::set<std::string>& truth, int k);

// PaperLiteral: mean of P@i over positions 1..min(k, |ranked|).
// StandardAp: sum of P@i at relevant positions over min(k, |truth|).
double map_at_k(const std::vector<std::string>& ranked, const std::set<std::string>& truth, int k,
                MapVariant variant = MapVariant::PaperLiteral);

struct QueryEval {
    std::string query_id;
    int intent_column = -1;
    int returned = 0;
    double precision = 0.0;
    std::optional<double> recall;
    double map = 0.0;
    bool skipped = false;
    std::string skip_reason;
};

struct EvalReport {
    int k = 0;
    SearchMode mode = SearchMode::Full;
    MapVariant variant = MapVariant::PaperLiteral;
    std::vector<QueryEval> per_query;
    double avg_precision = 0.0;
    double avg_map = 0.0;
    std::optional<double> avg_recall; // over queries with non-empty truth
    int evaluated = 0;
    int skipped = 0;
};

// Runs every query listed in <queries_dir>/manifest.csv (header row,
// columns: query,intent) against an index and aggregates the metrics.
// Queries missing from the manifest, or failing to annotate, are skipped
// with a warning.
EvalReport run_benchmark(const std::filesystem::path& index_dir,
                         const std::filesystem::path& queries_dir,
                         const std::filesystem::path& truth_file, int k,
                         SearchMode mode = SearchMode::Full,
                         MapVariant variant = MapVariant::PaperLiteral);

// report.tsv (spreadsheet-friendly) and report.json (per-query rows).
void write_report(const EvalReport& report, const std::filesystem::path& out_dir);

} // namespace santos
