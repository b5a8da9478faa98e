#include "santos/index.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>

#include <nlohmann/json.hpp>

#include "santos/errors.hpp"
#include "santos/log.hpp"
#include "santos/semantics.hpp"

namespace santos {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

double posting_score(const EdgePosting& p) {
    return (p.left_conf * p.rel_conf) * p.right_conf;
}

// Per (edge key, table) keep only the best pair: higher combined score,
// ties to the smaller column pair.
void insert_edge_posting(std::map<std::string, std::map<std::string, EdgePosting>>& slots,
                         const std::string& key, EdgePosting posting) {
    auto& per_table = slots[key];
    auto it = per_table.find(posting.table_id);
    if (it == per_table.end()) {
        per_table.emplace(posting.table_id, std::move(posting));
        return;
    }
    EdgePosting& held = it->second;
    double old_score = posting_score(held);
    double new_score = posting_score(posting);
    bool replace = new_score > old_score;
    if (new_score == old_score) {
        replace = std::pair{posting.left_column, posting.right_column} <
                  std::pair{held.left_column, held.right_column};
    }
    if (replace) held = std::move(posting);
}

void write_json(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << j.dump(2) << "\n";
}

json read_json(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
    return j;
}

json node_postings_to_json(const std::map<std::string, std::vector<NodePosting>>& m) {
    json out = json::object();
    for (const auto& [key, postings] : m) {
        json arr = json::array();
        for (const auto& p : postings) arr.push_back({p.table_id, p.column, p.confidence});
        out[key] = std::move(arr);
    }
    return out;
}

std::map<std::string, std::vector<NodePosting>> node_postings_from_json(const json& obj) {
    std::map<std::string, std::vector<NodePosting>> m;
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        auto& postings = m[it.key()];
        for (const auto& row : it.value())
            postings.push_back({row[0].get<std::string>(), row[1].get<int>(),
                                row[2].get<double>()});
    }
    return m;
}

json edge_postings_to_json(const std::map<std::string, std::vector<EdgePosting>>& m) {
    json out = json::object();
    for (const auto& [key, postings] : m) {
        json arr = json::array();
        for (const auto& p : postings)
            arr.push_back({p.table_id, p.left_column, p.right_column, p.left_conf, p.rel_conf,
                           p.right_conf});
        out[key] = std::move(arr);
    }
    return out;
}

std::map<std::string, std::vector<EdgePosting>> edge_postings_from_json(const json& obj) {
    std::map<std::string, std::vector<EdgePosting>> m;
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        auto& postings = m[it.key()];
        for (const auto& row : it.value())
            postings.push_back({row[0].get<std::string>(), row[1].get<int>(), row[2].get<int>(),
                                row[3].get<double>(), row[4].get<double>(),
                                row[5].get<double>()});
    }
    return m;
}

} // namespace

std::string kb_edge_key(const std::string& a1, const std::string& p, const std::string& a2) {
    return a1 + "\t" + p + "\t" + a2;
}

SearchIndex build_index(const std::filesystem::path& lake_dir,
                        const std::filesystem::path& kb_dir, const BuildOptions& options,
                        StageTimings* timings) {
    auto t0 = Clock::now();
    auto lake = ingest_lake(lake_dir);
    KbStore kb = options.use_kb ? load_kb(kb_dir) : empty_kb();
    StageTimings local;
    local.ingest_ms = ms_since(t0);
    SearchIndex idx =
        build_index(lake, kb, options, options.use_kb ? kb_dir.string() : std::string{}, &local);
    if (timings) *timings = local;
    return idx;
}

SearchIndex build_index(const std::vector<LakeTable>& lake_in, const KbStore& kb,
                        const BuildOptions& options, const std::string& kb_dir,
                        StageTimings* timings) {
    std::vector<const LakeTable*> lake;
    lake.reserve(lake_in.size());
    for (const auto& t : lake_in) lake.push_back(&t);
    std::sort(lake.begin(), lake.end(),
              [](const LakeTable* a, const LakeTable* b) { return a->table_id < b->table_id; });

    SearchIndex idx;
    idx.meta.format_version = kIndexFormatVersion;
    idx.meta.kb_enabled = options.use_kb;
    idx.meta.synth_enabled = options.use_synth;
    idx.meta.kb_dir = kb_dir;

    std::int64_t cs_columns = 0;
    std::int64_t kb_pairs_scored = 0;
    std::int64_t fd_pairs_checked = 0;
    std::int64_t fd_found = 0;

    std::map<std::string, std::map<std::string, EdgePosting>> kb_slots;
    std::map<std::string, std::map<std::string, EdgePosting>> synth_slots;
    std::map<std::string, std::vector<UnaryFd>> fds_per_table;

    StageTimings local;

    for (const LakeTable* tp : lake) {
        const LakeTable& t = *tp;
        idx.meta.tables.push_back(
            TableInfo{t.table_id, t.row_count, t.columns.size(), t.textual_columns()});

        std::map<int, ColumnSemantics> cs;
        if (options.use_kb) {
            auto t1 = Clock::now();
            for (int c : t.textual_columns()) {
                ++cs_columns;
                auto sem = compute_column_semantics(kb, t.table_id, t.column(c), Context::DataLake);
                if (!sem.empty()) cs.emplace(c, std::move(sem));
            }
            for (const auto& [c, sem] : cs)
                for (const auto& [type, conf] : sem.annotations)
                    idx.node_kb[type].push_back(NodePosting{t.table_id, c, conf});
            local.cs_ms += ms_since(t1);

            auto t2 = Clock::now();
            for (const auto& [i, left_cs] : cs) {
                for (const auto& [j, right_cs] : cs) {
                    if (i == j) continue;
                    ++kb_pairs_scored;
                    auto rs = compute_relationship_semantics(kb, t, i, j);
                    if (rs.empty()) continue;
                    const auto& [pred, rel_conf] = *rs.annotations.begin();
                    for (const auto& [a1, l] : left_cs.annotations) {
                        for (const auto& [a2, r] : right_cs.annotations) {
                            insert_edge_posting(kb_slots, kb_edge_key(a1, pred, a2),
                                                EdgePosting{t.table_id, i, j, l, rel_conf, r});
                        }
                    }
                }
            }
            local.rs_ms += ms_since(t2);
        }

        if (options.use_synth) {
            auto t3 = Clock::now();
            auto fds = discover_unary_fds(t);
            auto textual = t.textual_columns();
            fd_pairs_checked +=
                static_cast<std::int64_t>(textual.size()) * (static_cast<std::int64_t>(textual.size()) - 1);
            fd_found += static_cast<std::int64_t>(fds.size());
            fds_per_table[t.table_id] = std::move(fds);
            local.fd_ms += ms_since(t3);
        }
    }

    if (options.use_synth) {
        auto t4 = Clock::now();
        idx.synth = build_synth_kb(lake_in, kb, fds_per_table);

        auto column_profiles = synth_all_column_profiles(idx.synth);
        auto pair_profiles = synth_all_pair_profiles(idx.synth);

        for (const LakeTable* tp : lake) {
            const LakeTable& t = *tp;
            for (int c : t.textual_columns()) {
                auto pit = column_profiles.find(synth_cs_id(t.table_id, c));
                if (pit == column_profiles.end()) continue;
                for (const auto& [id, score] : pit->second)
                    idx.node_synth[id].push_back(NodePosting{t.table_id, c, score});
            }
            for (const auto& fd : fds_per_table[t.table_id]) {
                auto pit = pair_profiles.find(synth_rs_id(t.table_id, fd.determinant, fd.dependent));
                if (pit == pair_profiles.end()) continue;
                for (const auto& [id, score] : pit->second) {
                    insert_edge_posting(synth_slots, id,
                                        EdgePosting{t.table_id, fd.determinant, fd.dependent, 1.0,
                                                    score, 1.0});
                }
            }
        }
        local.synth_ms += ms_since(t4);
    }

    for (auto& [key, per_table] : kb_slots) {
        auto& postings = idx.edge_kb[key];
        for (auto& [table, posting] : per_table) postings.push_back(std::move(posting));
    }
    for (auto& [key, per_table] : synth_slots) {
        auto& postings = idx.edge_synth[key];
        for (auto& [table, posting] : per_table) postings.push_back(std::move(posting));
    }

    idx.meta.stats["cs_columns"] = cs_columns;
    idx.meta.stats["kb_pairs_scored"] = kb_pairs_scored;
    idx.meta.stats["fd_pairs_checked"] = fd_pairs_checked;
    idx.meta.stats["fd_found"] = fd_found;
    idx.meta.stats["tables"] = static_cast<std::int64_t>(lake.size());

    if (timings) {
        local.ingest_ms = timings->ingest_ms;
        *timings = local;
    }
    return idx;
}

void save_index(const SearchIndex& idx, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);

    json node = json::object();
    node["kb"] = node_postings_to_json(idx.node_kb);
    node["synth"] = node_postings_to_json(idx.node_synth);
    write_json(dir / "node_index.json", node);

    json edge = json::object();
    edge["kb"] = edge_postings_to_json(idx.edge_kb);
    edge["synth"] = edge_postings_to_json(idx.edge_synth);
    write_json(dir / "edge_index.json", edge);

    save_synth_kb(idx.synth, dir);

    json meta = json::object();
    meta["format_version"] = idx.meta.format_version;
    meta["kb_enabled"] = idx.meta.kb_enabled;
    meta["synth_enabled"] = idx.meta.synth_enabled;
    meta["kb_dir"] = idx.meta.kb_dir;
    json tables = json::array();
    for (const auto& t : idx.meta.tables) {
        json row = json::object();
        row["id"] = t.table_id;
        row["rows"] = t.rows;
        row["columns"] = t.columns;
        row["textual"] = t.textual_columns;
        tables.push_back(std::move(row));
    }
    meta["tables"] = std::move(tables);
    json stats = json::object();
    for (const auto& [key, value] : idx.meta.stats) stats[key] = value;
    meta["stats"] = std::move(stats);
    write_json(dir / "meta.json", meta);
}

SearchIndex load_index(const std::filesystem::path& dir) {
    json meta = read_json(dir / "meta.json");
    int version = meta.at("format_version").get<int>();
    if (version != kIndexFormatVersion)
        throw VersionError("index format version " + std::to_string(version) + ", expected " +
                           std::to_string(kIndexFormatVersion));

    SearchIndex idx;
    idx.meta.format_version = version;
    idx.meta.kb_enabled = meta.at("kb_enabled").get<bool>();
    idx.meta.synth_enabled = meta.at("synth_enabled").get<bool>();
    idx.meta.kb_dir = meta.at("kb_dir").get<std::string>();
    for (const auto& row : meta.at("tables")) {
        TableInfo info;
        info.table_id = row.at("id").get<std::string>();
        info.rows = row.at("rows").get<std::uint64_t>();
        info.columns = row.at("columns").get<std::uint64_t>();
        info.textual_columns = row.at("textual").get<std::vector<int>>();
        idx.meta.tables.push_back(std::move(info));
    }
    for (auto it = meta.at("stats").begin(); it != meta.at("stats").end(); ++it)
        idx.meta.stats[it.key()] = it.value().get<std::int64_t>();

    json node = read_json(dir / "node_index.json");
    idx.node_kb = node_postings_from_json(node.at("kb"));
    idx.node_synth = node_postings_from_json(node.at("synth"));

    json edge = read_json(dir / "edge_index.json");
    idx.edge_kb = edge_postings_from_json(edge.at("kb"));
    idx.edge_synth = edge_postings_from_json(edge.at("synth"));

    idx.synth = load_synth_kb(dir);
    return idx;
}

} // namespace santos
