#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace jobrel::csv {

// Dialect: UTF-8, comma delimiter, '"' quoting with doubled-quote escape,
// "\n" or "\r\n" record endings. Quoted fields may span lines.

struct Record {
    std::vector<std::string> fields;
    std::size_t number = 0; // 1-based record number; the header is record 1
};

struct Table {
    std::vector<std::string> header;
    std::vector<Record> rows;

    /// Case-insensitive lookup of a header column.
    std::optional<std::size_t> find_column(std::string_view name) const;
    /// As find_column, throwing DataError naming the missing column.
    std::size_t require_column(std::string_view name, std::string_view source) const;
};

/// Parses CSV text. The first record is the header. Blank records are skipped.
Table parse(std::string_view text);

Table read_file(const std::filesystem::path& path);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

/// Quotes a field only when it contains a delimiter, quote or line break.
std::string escape(std::string_view field);

std::string format_row(std::span<const std::string> fields);

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);

} // namespace jobrel::csv
