#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "santos/kb.hpp"
#include "santos/lake.hpp"
#include "santos/synth.hpp"

namespace santos {

struct BuildOptions {
    bool use_kb = true;
    bool use_synth = true;
};

struct NodePosting {
    std::string table_id;
    int column = 0;
    double confidence = 0.0;

    bool operator==(const NodePosting&) const = default;
};

struct EdgePosting {
    std::string table_id;
    int left_column = 0;
    int right_column = 0;
    double left_conf = 0.0;
    double rel_conf = 0.0;
    double right_conf = 0.0;

    bool operator==(const EdgePosting&) const = default;
};

struct TableInfo {
    std::string table_id;
    std::uint64_t rows = 0;
    std::uint64_t columns = 0;
    std::vector<int> textual_columns;

    bool operator==(const TableInfo&) const = default;
};

struct IndexMeta {
    int format_version = 1;
    bool kb_enabled = true;
    bool synth_enabled = true;
    std::string kb_dir; // where the KB fixtures live; needed again at query time
    std::vector<TableInfo> tables;
    std::map<std::string, std::int64_t> stats;

    bool operator==(const IndexMeta&) const = default;
};

// Offline product of the pre-processing phase. The node index maps an
// annotation to the columns carrying it; the edge index maps a (type,
// predicate, type) triple (KB side, key "a1\tp\ta2") or a synthesized
// relationship id (synth side) to the column pairs carrying it. Per table
// and edge key only the best-scoring column pair is kept.
struct SearchIndex {
    std::map<std::string, std::vector<NodePosting>> node_kb;
    std::map<std::string, std::vector<NodePosting>> node_synth;
    std::map<std::string, std::vector<EdgePosting>> edge_kb;
    std::map<std::string, std::vector<EdgePosting>> edge_synth;
    SynthKb synth;
    IndexMeta meta;

    bool operator==(const SearchIndex&) const = default;
};

inline constexpr int kIndexFormatVersion = 1;

std::string kb_edge_key(const std::string& a1, const std::string& p, const std::string& a2);

struct StageTimings {
    double ingest_ms = 0;
    double cs_ms = 0;
    double rs_ms = 0;
    double fd_ms = 0;
    double synth_ms = 0;
};

// Pre-processing: annotate every table, mine FDs, build the synthesized
// KB and fill both inverted indexes. Tables that fail ingestion are
// skipped with a warning. `timings`, when given, receives per-stage times
// (they are never persisted so builds stay byte-identical).
SearchIndex build_index(const std::filesystem::path& lake_dir,
                        const std::filesystem::path& kb_dir, const BuildOptions& options,
                        StageTimings* timings = nullptr);

// Same, over already-loaded inputs.
SearchIndex build_index(const std::vector<LakeTable>& lake, const KbStore& kb,
                        const BuildOptions& options, const std::string& kb_dir = {},
                        StageTimings* timings = nullptr);

// Directory layout: node_index.json, edge_index.json, synth_type_dict.json,
// synth_rel_dict.json, meta.json. Sorted keys throughout; load(save(idx))
// is the identity.
void save_index(const SearchIndex& idx, const std::filesystem::path& dir);
SearchIndex load_index(const std::filesystem::path& dir);

} // namespace santos
