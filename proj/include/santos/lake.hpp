#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace santos {

enum class ColumnKind { Textual, NonTextual };

// Ordered pair of normalized cell values; (a,b) != (b,a).
struct ValuePair {
    std::string left;
    std::string right;

    auto operator<=>(const ValuePair&) const = default;
};

struct ColumnData {
    int column_index = 0;
    std::string header; // metadata only, may be empty
    ColumnKind kind = ColumnKind::NonTextual;
    std::set<std::string> unique_values; // normalized, no empties
    int raw_cardinality = 0;             // non-empty cells, duplicates included
};

// An ingested, normalized table. Immutable after ingestion.
struct LakeTable {
    std::string table_id; // file stem
    std::vector<ColumnData> columns;
    std::size_t row_count = 0;
    std::vector<std::vector<std::string>> rows; // normalized cells, row-major

    const ColumnData& column(int index) const;
    bool is_textual(int index) const;
    std::vector<int> textual_columns() const;
};

// Lowercase, trim, collapse internal whitespace runs, strip sentence
// punctuation (.,;:!?"'()[]{}); hyphens kept; no stemming. Idempotent.
std::string normalize_value(std::string_view raw);

// Textual iff at least half of the non-empty cells are neither numbers
// nor dates. An all-empty column is NonTextual.
ColumnKind classify_column(const std::vector<std::string>& raw_values);

// Reads a headed CSV file into a LakeTable. Throws IoError on unreadable
// input, FormatError on ragged rows or a file with no header row.
LakeTable ingest_table(const std::filesystem::path& path);

// Loads every *.csv in a directory, sorted by file name. Tables that fail
// to ingest are skipped with a warning.
std::vector<LakeTable> ingest_lake(const std::filesystem::path& dir);

// Deduplicated (left,right) pairs over rows where both cells are
// non-empty. Throws BadColumnError for bad indexes or NonTextual columns.
std::set<ValuePair> unique_value_pairs(const LakeTable& t, int i, int j);

// Resolves a user-facing column spec: exact header match, then unique
// case-insensitive header match, then 0-based index. Throws BadColumnError.
int resolve_column(const LakeTable& t, const std::string& spec);

} // namespace santos
