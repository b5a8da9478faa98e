#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace santos::csv {

using Record = std::vector<std::string>;

// RFC 4180 reader: quoted fields, doubled-quote escapes, embedded
// commas/newlines inside quotes, LF or CRLF record ends. A UTF-8 BOM on
// the first record is stripped. Throws FormatError on a dangling quote.
std::vector<Record> parse(const std::string& text);

// Reads and parses a whole file; throws IoError if unreadable.
std::vector<Record> read_file(const std::filesystem::path& path);

std::string quote_field(const std::string& field);

} // namespace santos::csv
