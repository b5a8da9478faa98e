#include "santos/kb.hpp"

#include <cctype>
#include <fstream>

#include "santos/errors.hpp"

namespace santos {

namespace {

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::string trim_ws(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return s.substr(b, e - b);
}

std::vector<std::vector<std::string>> read_tsv(const std::filesystem::path& path,
                                               std::size_t fields) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<std::vector<std::string>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> parts;
        std::size_t start = 0;
        while (true) {
            std::size_t tab = line.find('\t', start);
            if (tab == std::string::npos) {
                parts.push_back(line.substr(start));
                break;
            }
            parts.push_back(line.substr(start, tab - start));
            start = tab + 1;
        }
        if (parts.size() != fields)
            throw IoError(path.string() + ":" + std::to_string(lineno) + ": expected " +
                          std::to_string(fields) + " tab-separated fields");
        for (auto& p : parts) p = trim_ws(p);
        rows.push_back(std::move(parts));
    }
    return rows;
}

} // namespace

std::string KbStore::top_level_ancestor(const std::string& type) const {
    if (top_level_types.count(type)) return type;
    std::string cur = type;
    while (true) {
        auto it = inheritance.find(cur);
        if (it == inheritance.end()) return {}; // reached the root or unknown
        cur = it->second;
        if (top_level_types.count(cur)) return cur;
    }
}

KbStore empty_kb() { return KbStore{}; }

KbStore load_kb(const std::filesystem::path& dir) {
    KbStore kb;

    for (auto& row : read_tsv(dir / "entities.tsv", 2)) {
        std::string label = normalize_value(row[0]);
        std::string entity = lower(row[1]);
        if (label.empty() || entity.empty()) continue;
        kb.entity_dict[label].insert(entity);
    }

    std::set<std::string> declared_entities;
    for (const auto& [label, ids] : kb.entity_dict)
        declared_entities.insert(ids.begin(), ids.end());

    std::set<std::string> declared_types;
    for (auto& row : read_tsv(dir / "hierarchy.tsv", 2)) {
        std::string child = lower(row[0]);
        std::string parent = lower(row[1]);
        if (child.empty() || parent.empty())
            throw FormatError("hierarchy.tsv: empty type id");
        auto [it, inserted] = kb.inheritance.emplace(child, parent);
        if (!inserted && it->second != parent)
            throw FormatError("hierarchy.tsv: conflicting parents for " + child);
        declared_types.insert(child);
        declared_types.insert(parent);
    }

    // Single root, acyclic: every type must reach one parentless type.
    std::set<std::string> roots;
    for (const auto& t : declared_types)
        if (!kb.inheritance.count(t)) roots.insert(t);
    if (!declared_types.empty()) {
        if (roots.empty()) throw CycleError("hierarchy has no root");
        if (roots.size() > 1) {
            std::string msg = "hierarchy has multiple roots:";
            for (const auto& r : roots) msg += " " + r;
            throw MultiRootError(msg);
        }
        kb.root_type = *roots.begin();
        for (const auto& t : declared_types) {
            std::string cur = t;
            std::size_t steps = 0;
            while (kb.inheritance.count(cur)) {
                cur = kb.inheritance.at(cur);
                if (++steps > declared_types.size()) throw CycleError("hierarchy cycle at " + t);
            }
        }
        for (const auto& [child, parent] : kb.inheritance)
            if (parent == kb.root_type) kb.top_level_types.insert(child);
    }

    std::map<std::string, std::set<std::string>> entities_under; // type -> entity set
    for (auto& row : read_tsv(dir / "types.tsv", 2)) {
        std::string entity = lower(row[0]);
        std::string type = lower(row[1]);
        if (!declared_entities.count(entity))
            throw DanglingRefError("types.tsv: undeclared entity " + entity);
        if (!declared_types.count(type))
            throw DanglingRefError("types.tsv: undeclared type " + type);
        kb.type_dict[entity].insert(type);
        // ancestor counts include descendants' entities
        std::string cur = type;
        while (true) {
            entities_under[cur].insert(entity);
            auto it = kb.inheritance.find(cur);
            if (it == kb.inheritance.end()) break;
            cur = it->second;
        }
    }
    for (const auto& [type, ents] : entities_under)
        kb.type_counts[type] = static_cast<std::int64_t>(ents.size());

    std::map<std::string, std::set<std::pair<std::string, std::string>>> pairs_per_pred;
    for (auto& row : read_tsv(dir / "facts.tsv", 3)) {
        std::string subject = lower(row[0]);
        std::string predicate = lower(row[1]);
        std::string object = lower(row[2]);
        if (!declared_entities.count(subject))
            throw DanglingRefError("facts.tsv: undeclared subject " + subject);
        if (!declared_entities.count(object))
            throw DanglingRefError("facts.tsv: undeclared object " + object);
        if (predicate.empty()) throw FormatError("facts.tsv: empty predicate");
        kb.relationship_dict[{subject, object}].insert(predicate);
        pairs_per_pred[predicate].insert({subject, object});
    }
    for (const auto& [pred, pairs] : pairs_per_pred)
        kb.predicate_counts[pred] = static_cast<std::int64_t>(pairs.size());

    return kb;
}

std::set<std::string> types_of_value(const KbStore& kb, const std::string& v) {
    std::set<std::string> out;
    auto it = kb.entity_dict.find(v);
    if (it == kb.entity_dict.end()) return out;
    for (const auto& entity : it->second) {
        auto tit = kb.type_dict.find(entity);
        if (tit == kb.type_dict.end()) continue;
        for (const auto& type : tit->second) {
            if (type == kb.root_type) continue;
            std::string cur = type;
            while (true) {
                out.insert(cur);
                if (kb.top_level_types.count(cur)) break;
                auto pit = kb.inheritance.find(cur);
                if (pit == kb.inheritance.end() || pit->second == kb.root_type) break;
                cur = pit->second;
            }
        }
    }
    return out;
}

std::set<std::string> predicates_of_pair(const KbStore& kb, const ValuePair& p) {
    std::set<std::string> out;
    auto lit = kb.entity_dict.find(p.left);
    auto rit = kb.entity_dict.find(p.right);
    if (lit == kb.entity_dict.end() || rit == kb.entity_dict.end()) return out;
    for (const auto& e1 : lit->second) {
        for (const auto& e2 : rit->second) {
            auto fit = kb.relationship_dict.find({e1, e2});
            if (fit == kb.relationship_dict.end()) continue;
            out.insert(fit->second.begin(), fit->second.end());
        }
    }
    return out;
}

} // namespace santos
