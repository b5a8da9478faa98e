#include "santos/eval.hpp"

#include <algorithm>
#include <fstream>

#include <nlohmann/json.hpp>

#include "santos/csv.hpp"
#include "santos/errors.hpp"
#include "santos/log.hpp"
#include "santos/numfmt.hpp"

namespace santos {

namespace {

using nlohmann::json;

} // namespace

const std::set<std::string>* GroundTruth::for_query(const std::string& query_id) const {
    auto it = unionable.find(query_id);
    return it == unionable.end() ? nullptr : &it->second;
}

GroundTruth load_ground_truth(const std::filesystem::path& path) {
    GroundTruth truth;
    auto records = csv::read_file(path);
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        if (rec.size() != 2)
            throw FormatError(path.string() + ": row " + std::to_string(r) +
                              " needs exactly 2 fields");
        if (rec[0].empty() || rec[1].empty()) continue;
        truth.unionable[rec[0]].insert(rec[1]);
    }
    return truth;
}

MapVariant map_variant_from_string(const std::string& name) {
    if (name == "paper") return MapVariant::PaperLiteral;
    if (name == "standard") return MapVariant::StandardAp;
    throw FormatError("unknown map variant '" + name + "' (expected paper|standard)");
}

PrAtK precision_recall_at_k(const std::vector<std::string>& ranked,
                            const std::set<std::string>& truth, int k) {
    PrAtK out;
    std::size_t depth = std::min<std::size_t>(static_cast<std::size_t>(k), ranked.size());
    for (std::size_t i = 0; i < depth; ++i)
        if (truth.count(ranked[i])) ++out.hits;
    out.precision = static_cast<double>(out.hits) / static_cast<double>(k);
    if (!truth.empty())
        out.recall = static_cast<double>(out.hits) / static_cast<double>(truth.size());
    return out;
}

double map_at_k(const std::vector<std::string>& ranked, const std::set<std::string>& truth, int k,
                MapVariant variant) {
    std::size_t depth = std::min<std::size_t>(static_cast<std::size_t>(k), ranked.size());
    if (depth == 0) return 0.0;
    int hits = 0;
    double sum = 0.0;
    int relevant_positions = 0;
    for (std::size_t i = 0; i < depth; ++i) {
        bool rel = truth.count(ranked[i]) > 0;
        if (rel) ++hits;
        double p_at_i = static_cast<double>(hits) / static_cast<double>(i + 1);
        if (variant == MapVariant::PaperLiteral) {
            sum += p_at_i;
        } else if (rel) {
            sum += p_at_i;
            ++relevant_positions;
        }
    }
    if (variant == MapVariant::PaperLiteral) return sum / static_cast<double>(depth);
    std::size_t denom = std::min<std::size_t>(static_cast<std::size_t>(k), truth.size());
    if (denom == 0) return 0.0;
    return sum / static_cast<double>(denom);
}

EvalReport run_benchmark(const std::filesystem::path& index_dir,
                         const std::filesystem::path& queries_dir,
                         const std::filesystem::path& truth_file, int k, SearchMode mode,
                         MapVariant variant) {
    EvalReport report;
    report.k = k;
    report.mode = mode;
    report.variant = variant;

    SearchIndex idx = load_index(index_dir);
    TableViews views = build_table_views(idx);
    KbStore kb =
        idx.meta.kb_enabled && !idx.meta.kb_dir.empty() ? load_kb(idx.meta.kb_dir) : empty_kb();
    GroundTruth truth = load_ground_truth(truth_file);
    if (truth.unionable.empty()) log::warn("ground truth " + truth_file.string() + " is empty");

    // Sidecar manifest naming each query's intent column.
    std::map<std::string, std::string> manifest;
    auto manifest_path = queries_dir / "manifest.csv";
    if (std::filesystem::exists(manifest_path)) {
        auto records = csv::read_file(manifest_path);
        for (std::size_t r = 1; r < records.size(); ++r) {
            if (records[r].size() != 2)
                throw FormatError(manifest_path.string() + ": row " + std::to_string(r) +
                                  " needs exactly 2 fields (query,intent)");
            std::string stem = std::filesystem::path(records[r][0]).stem().string();
            manifest[stem] = records[r][1];
        }
    } else {
        log::warn("no manifest.csv in " + queries_dir.string() + "; all queries will be skipped");
    }

    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(queries_dir)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".csv") continue;
        if (entry.path().filename() == "manifest.csv") continue;
        files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());

    double sum_p = 0, sum_map = 0, sum_r = 0;
    int recall_count = 0;

    for (const auto& file : files) {
        QueryEval row;
        row.query_id = file.stem().string();

        auto mit = manifest.find(row.query_id);
        if (mit == manifest.end()) {
            row.skipped = true;
            row.skip_reason = "no manifest entry";
            log::warn("skipping query " + row.query_id + ": no manifest entry");
            report.per_query.push_back(std::move(row));
            ++report.skipped;
            continue;
        }

        std::vector<std::string> ranked_ids;
        try {
            LakeTable q = ingest_table(file);
            row.intent_column = resolve_column(q, mit->second);
            QuerySemanticTree tree = build_query_tree(q, row.intent_column, kb, idx.synth);
            auto results = search_top_k(idx, views, kb, tree, k, mode);
            for (const auto& r : results) ranked_ids.push_back(r.table_id);
        } catch (const EmptyIntentSemanticsError& e) {
            // No semantics anywhere: the query runs but returns nothing.
            log::warn(std::string("query ") + row.query_id + ": " + e.what());
        } catch (const std::exception& e) {
            row.skipped = true;
            row.skip_reason = e.what();
            log::warn("skipping query " + row.query_id + ": " + e.what());
            report.per_query.push_back(std::move(row));
            ++report.skipped;
            continue;
        }

        const std::set<std::string>* expected = truth.for_query(row.query_id);
        static const std::set<std::string> kNone;
        const std::set<std::string>& t = expected ? *expected : kNone;
        PrAtK pr = precision_recall_at_k(ranked_ids, t, k);
        row.returned = static_cast<int>(ranked_ids.size());
        row.precision = pr.precision;
        row.recall = pr.recall;
        row.map = map_at_k(ranked_ids, t, k, variant);

        sum_p += row.precision;
        sum_map += row.map;
        if (row.recall) {
            sum_r += *row.recall;
            ++recall_count;
        }
        ++report.evaluated;
        report.per_query.push_back(std::move(row));
    }

    if (report.evaluated > 0) {
        report.avg_precision = sum_p / report.evaluated;
        report.avg_map = sum_map / report.evaluated;
    }
    if (recall_count > 0) report.avg_recall = sum_r / recall_count;
    return report;
}

void write_report(const EvalReport& report, const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);

    std::ofstream tsv(out_dir / "report.tsv", std::ios::binary);
    if (!tsv) throw IoError("cannot write report.tsv in " + out_dir.string());
    tsv << "query_id\tintent_column\treturned\tP@" << report.k << "\tR@" << report.k << "\tMAP@"
        << report.k << "\tskipped\n";
    for (const auto& row : report.per_query) {
        tsv << row.query_id << "\t" << row.intent_column << "\t" << row.returned << "\t"
            << format_score(row.precision) << "\t"
            << (row.recall ? format_score(*row.recall) : "-") << "\t" << format_score(row.map)
            << "\t" << (row.skipped ? "yes" : "no") << "\n";
    }
    tsv << "average\t-\t-\t" << format_score(report.avg_precision) << "\t"
        << (report.avg_recall ? format_score(*report.avg_recall) : "-") << "\t"
        << format_score(report.avg_map) << "\t-\n";

    json j = json::object();
    j["k"] = report.k;
    j["mode"] = to_string(report.mode);
    j["map_variant"] = report.variant == MapVariant::PaperLiteral ? "paper" : "standard";
    j["evaluated"] = report.evaluated;
    j["skipped"] = report.skipped;
    j["avg_precision"] = report.avg_precision;
    j["avg_map"] = report.avg_map;
    if (report.avg_recall) j["avg_recall"] = *report.avg_recall;
    json rows = json::array();
    for (const auto& row : report.per_query) {
        json r = json::object();
        r["query_id"] = row.query_id;
        r["intent_column"] = row.intent_column;
        r["returned"] = row.returned;
        r["precision"] = row.precision;
        if (row.recall) r["recall"] = *row.recall;
        r["map"] = row.map;
        r["skipped"] = row.skipped;
        if (!row.skip_reason.empty()) r["skip_reason"] = row.skip_reason;
        rows.push_back(std::move(r));
    }
    j["queries"] = std::move(rows);

    std::ofstream out(out_dir / "report.json", std::ios::binary);
    if (!out) throw IoError("cannot write report.json in " + out_dir.string());
    out << j.dump(2) << "\n";
}

} // namespace santos
