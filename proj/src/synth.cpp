#include "santos/synth.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "santos/errors.hpp"
#include "santos/numfmt.hpp"

namespace santos {

namespace {

using nlohmann::json;

// Overlap tallies of one host's members against all hosts sharing a value,
// turned into scores against the host's own size.
template <typename Member>
std::map<std::string, double> host_profile(const std::set<Member>& members,
                                           const std::map<Member, std::set<std::string>>& lookup,
                                           const std::string& own_id) {
    std::map<std::string, int> tally;
    for (const auto& m : members) {
        auto it = lookup.find(m);
        if (it == lookup.end()) continue;
        for (const auto& id : it->second) ++tally[id];
    }
    std::map<std::string, double> scores;
    for (const auto& [id, hits] : tally) {
        scores[id] = id == own_id
                         ? 1.0
                         : round12(static_cast<double>(hits) / static_cast<double>(members.size()));
    }
    return scores;
}

template <typename Member>
void merge_max(std::map<Member, std::map<std::string, double>>& dict, const Member& key,
               const std::map<std::string, double>& scores) {
    auto& slot = dict[key];
    for (const auto& [id, score] : scores) {
        auto it = slot.find(id);
        if (it == slot.end() || score > it->second) slot[id] = score;
    }
}

json scores_to_json(const std::map<std::string, double>& scores) {
    json obj = json::object();
    for (const auto& [id, score] : scores) obj[id] = format_score(score);
    return obj;
}

std::map<std::string, double> scores_from_json(const json& obj) {
    std::map<std::string, double> scores;
    for (auto it = obj.begin(); it != obj.end(); ++it)
        scores[it.key()] = std::strtod(it.value().get<std::string>().c_str(), nullptr);
    return scores;
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

} // namespace

std::string synth_cs_id(const std::string& table_id, int col) {
    return "CS(" + table_id + "#" + std::to_string(col) + ")";
}

std::string synth_rs_id(const std::string& table_id, int i, int j) {
    return "RS(" + table_id + "#" + std::to_string(i) + "," + std::to_string(j) + ")";
}

SynthKb build_synth_kb(const std::vector<LakeTable>& lake, const KbStore& kb,
                       const std::map<std::string, std::vector<UnaryFd>>& fds_per_table) {
    SynthKb s;

    // Pass 1: membership sets restricted to values the KB does not know.
    for (const auto& t : lake) {
        for (int c : t.textual_columns()) {
            std::set<std::string> members;
            for (const auto& v : t.column(c).unique_values)
                if (types_of_value(kb, v).empty()) members.insert(v);
            if (!members.empty()) s.column_members[synth_cs_id(t.table_id, c)] = std::move(members);
        }
        auto fit = fds_per_table.find(t.table_id);
        if (fit == fds_per_table.end()) continue;
        for (const auto& fd : fit->second) {
            std::set<ValuePair> members;
            for (const auto& p : unique_value_pairs(t, fd.determinant, fd.dependent))
                if (predicates_of_pair(kb, p).empty()) members.insert(p);
            if (!members.empty())
                s.pair_members[synth_rs_id(t.table_id, fd.determinant, fd.dependent)] =
                    std::move(members);
        }
    }

    // Pass 2: lookup dictionaries, then per-host overlap scores broadcast
    // onto every member, max-merged across hosts.
    std::map<std::string, std::set<std::string>> value_lookup;
    for (const auto& [id, members] : s.column_members)
        for (const auto& v : members) value_lookup[v].insert(id);
    std::map<ValuePair, std::set<std::string>> pair_lookup;
    for (const auto& [id, members] : s.pair_members)
        for (const auto& p : members) pair_lookup[p].insert(id);

    for (const auto& [id, members] : s.column_members) {
        auto scores = host_profile(members, value_lookup, id);
        for (const auto& v : members) merge_max(s.type_dict, v, scores);
    }
    for (const auto& [id, members] : s.pair_members) {
        auto scores = host_profile(members, pair_lookup, id);
        for (const auto& p : members) merge_max(s.rel_dict, p, scores);
    }
    return s;
}

std::map<std::string, double> synth_types_of_value(const SynthKb& s, const std::string& v) {
    auto it = s.type_dict.find(v);
    return it == s.type_dict.end() ? std::map<std::string, double>{} : it->second;
}

std::map<std::string, double> synth_predicates_of_pair(const SynthKb& s, const ValuePair& p) {
    auto it = s.rel_dict.find(p);
    return it == s.rel_dict.end() ? std::map<std::string, double>{} : it->second;
}

std::map<std::string, std::map<std::string, double>> synth_all_column_profiles(const SynthKb& s) {
    std::map<std::string, std::set<std::string>> lookup;
    for (const auto& [id, members] : s.column_members)
        for (const auto& v : members) lookup[v].insert(id);
    std::map<std::string, std::map<std::string, double>> out;
    for (const auto& [id, members] : s.column_members)
        out[id] = host_profile(members, lookup, id);
    return out;
}

std::map<std::string, std::map<std::string, double>> synth_all_pair_profiles(const SynthKb& s) {
    std::map<ValuePair, std::set<std::string>> lookup;
    for (const auto& [id, members] : s.pair_members)
        for (const auto& p : members) lookup[p].insert(id);
    std::map<std::string, std::map<std::string, double>> out;
    for (const auto& [id, members] : s.pair_members)
        out[id] = host_profile(members, lookup, id);
    return out;
}

std::map<std::string, double> synth_column_profile(const SynthKb& s, const std::string& cs_id) {
    if (!s.column_members.count(cs_id)) return {};
    return synth_all_column_profiles(s)[cs_id];
}

std::map<std::string, double> synth_pair_profile(const SynthKb& s, const std::string& rs_id) {
    if (!s.pair_members.count(rs_id)) return {};
    return synth_all_pair_profiles(s)[rs_id];
}

void save_synth_kb(const SynthKb& s, const std::filesystem::path& dir) {
    json types = json::object();
    for (const auto& [v, scores] : s.type_dict) types[v] = scores_to_json(scores);
    write_json(dir / "synth_type_dict.json", types);

    json rels = json::object();
    for (const auto& [p, scores] : s.rel_dict) rels[p.left + "\t" + p.right] = scores_to_json(scores);
    write_json(dir / "synth_rel_dict.json", rels);
}

SynthKb load_synth_kb(const std::filesystem::path& dir) {
    SynthKb s;
    json types = read_json(dir / "synth_type_dict.json");
    for (auto it = types.begin(); it != types.end(); ++it) {
        auto scores = scores_from_json(it.value());
        for (const auto& [id, score] : scores)
            if (score == 1.0) s.column_members[id].insert(it.key());
        s.type_dict[it.key()] = std::move(scores);
    }
    json rels = read_json(dir / "synth_rel_dict.json");
    for (auto it = rels.begin(); it != rels.end(); ++it) {
        const std::string& key = it.key();
        auto tab = key.find('\t');
        if (tab == std::string::npos) throw FormatError("synth_rel_dict.json: bad pair key");
        ValuePair p{key.substr(0, tab), key.substr(tab + 1)};
        auto scores = scores_from_json(it.value());
        for (const auto& [id, score] : scores)
            if (score == 1.0) s.pair_members[id].insert(p);
        s.rel_dict[p] = std::move(scores);
    }
    return s;
}

} // namespace santos
