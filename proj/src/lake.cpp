#include "santos/lake.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>

#include "santos/csv.hpp"
#include "santos/errors.hpp"
#include "santos/log.hpp"

namespace santos {

namespace {

bool is_space_byte(char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f';
}

bool is_stripped_punct(char c) {
    switch (c) {
    case '.': case ',': case ';': case ':': case '!': case '?':
    case '"': case '\'': case '(': case ')': case '[': case ']':
    case '{': case '}':
        return true;
    default:
        return false;
    }
}

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && is_space_byte(s[b])) ++b;
    while (e > b && is_space_byte(s[e - 1])) --e;
    return s.substr(b, e - b);
}

bool parses_as_number(const std::string& s) {
    if (s.empty()) return false;
    char first = s[0];
    if (!(std::isdigit(static_cast<unsigned char>(first)) || first == '+' || first == '-' ||
          first == '.'))
        return false; // rejects strtod's "inf"/"nan" words
    char* end = nullptr;
    std::strtod(s.c_str(), &end);
    return end != nullptr && *end == '\0' && end != s.c_str();
}

// Three digit groups joined by -, / or . (e.g. 2021-03-17, 3/17/2021).
bool parses_as_date(const std::string& s) {
    int groups = 0;
    std::size_t i = 0;
    char sep = '\0';
    while (i < s.size()) {
        std::size_t digits = 0;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
            ++digits;
            ++i;
        }
        if (digits == 0 || digits > 4) return false;
        ++groups;
        if (i == s.size()) break;
        char c = s[i];
        if (c != '-' && c != '/' && c != '.') return false;
        if (sep != '\0' && c != sep) return false;
        sep = c;
        ++i;
        if (i == s.size()) return false; // trailing separator
    }
    return groups == 3;
}

} // namespace

const ColumnData& LakeTable::column(int index) const {
    if (index < 0 || static_cast<std::size_t>(index) >= columns.size())
        throw BadColumnError("column index " + std::to_string(index) + " out of range in table " +
                             table_id);
    return columns[static_cast<std::size_t>(index)];
}

bool LakeTable::is_textual(int index) const {
    return column(index).kind == ColumnKind::Textual;
}

std::vector<int> LakeTable::textual_columns() const {
    std::vector<int> out;
    for (const auto& c : columns)
        if (c.kind == ColumnKind::Textual) out.push_back(c.column_index);
    return out;
}

std::string normalize_value(std::string_view raw) {
    std::string stripped;
    stripped.reserve(raw.size());
    for (char c : raw) {
        if (is_stripped_punct(c)) continue;
        stripped.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    std::string out;
    out.reserve(stripped.size());
    bool pending_space = false;
    for (char c : stripped) {
        if (is_space_byte(c)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        out.push_back(c);
    }
    return out;
}

ColumnKind classify_column(const std::vector<std::string>& raw_values) {
    std::size_t non_empty = 0;
    std::size_t textual = 0;
    for (const auto& raw : raw_values) {
        std::string v = trim(raw);
        if (v.empty()) continue;
        ++non_empty;
        if (!parses_as_number(v) && !parses_as_date(v)) ++textual;
    }
    if (non_empty == 0) return ColumnKind::NonTextual;
    return 2 * textual >= non_empty ? ColumnKind::Textual : ColumnKind::NonTextual;
}

LakeTable ingest_table(const std::filesystem::path& path) {
    auto records = csv::read_file(path);
    if (records.empty()) throw FormatError(path.string() + ": no header row");
    const auto& header = records.front();
    if (header.empty() || (header.size() == 1 && header[0].empty() && records.size() == 1))
        throw FormatError(path.string() + ": zero columns");
    const std::size_t width = header.size();

    LakeTable t;
    t.table_id = path.stem().string();
    t.row_count = records.size() - 1;
    t.columns.resize(width);
    t.rows.reserve(t.row_count);

    std::vector<std::vector<std::string>> raw_columns(width);
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        if (rec.size() != width)
            throw FormatError(path.string() + ": row " + std::to_string(r) + " has " +
                              std::to_string(rec.size()) + " fields, expected " +
                              std::to_string(width));
        std::vector<std::string> row(width);
        for (std::size_t c = 0; c < width; ++c) {
            raw_columns[c].push_back(rec[c]);
            row[c] = normalize_value(rec[c]);
        }
        t.rows.push_back(std::move(row));
    }

    for (std::size_t c = 0; c < width; ++c) {
        ColumnData& col = t.columns[c];
        col.column_index = static_cast<int>(c);
        col.header = header[c];
        col.kind = classify_column(raw_columns[c]);
        for (const auto& row : t.rows) {
            const std::string& v = row[c];
            if (v.empty()) continue;
            ++col.raw_cardinality;
            col.unique_values.insert(v);
        }
    }
    return t;
}

std::vector<LakeTable> ingest_lake(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) throw IoError("not a directory: " + dir.string());
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".csv")
            files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    std::vector<LakeTable> tables;
    for (const auto& f : files) {
        try {
            tables.push_back(ingest_table(f));
        } catch (const std::exception& e) {
            log::warn("skipping table " + f.string() + ": " + e.what());
        }
    }
    return tables;
}

int resolve_column(const LakeTable& t, const std::string& spec) {
    for (const auto& c : t.columns)
        if (c.header == spec) return c.column_index;
    auto lower = [](std::string s) {
        for (char& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
        return s;
    };
    std::string want = lower(spec);
    int found = -1;
    for (const auto& c : t.columns) {
        if (lower(c.header) != want) continue;
        if (found >= 0) {
            found = -1; // ambiguous
            break;
        }
        found = c.column_index;
    }
    if (found >= 0) return found;
    if (!spec.empty() && spec.find_first_not_of("0123456789") == std::string::npos) {
        int idx = std::atoi(spec.c_str());
        if (idx >= 0 && static_cast<std::size_t>(idx) < t.columns.size()) return idx;
    }
    throw BadColumnError("no column matches '" + spec + "' in table " + t.table_id);
}

std::set<ValuePair> unique_value_pairs(const LakeTable& t, int i, int j) {
    if (i == j) throw BadColumnError("value pairs need two distinct columns");
    if (!t.is_textual(i))
        throw BadColumnError("column " + std::to_string(i) + " is not textual");
    if (!t.is_textual(j))
        throw BadColumnError("column " + std::to_string(j) + " is not textual");
    std::set<ValuePair> pairs;
    for (const auto& row : t.rows) {
        const std::string& a = row[static_cast<std::size_t>(i)];
        const std::string& b = row[static_cast<std::size_t>(j)];
        if (a.empty() || b.empty()) continue;
        pairs.insert(ValuePair{a, b});
    }
    return pairs;
}

} // namespace santos
