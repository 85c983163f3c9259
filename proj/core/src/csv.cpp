#include "jobrel/csv.hpp"

#include "jobrel/error.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace jobrel::csv {

namespace {

bool is_blank(const std::vector<std::string>& fields)
{
    return fields.size() == 1 && fields.front().empty();
}

} // namespace

std::string trim(std::string_view s)
{
    const auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
    auto first = std::find_if_not(s.begin(), s.end(), is_space);
    auto last = std::find_if_not(s.rbegin(), s.rend(), is_space).base();
    if (first >= last) return {};
    return std::string(first, last);
}

std::string to_lower(std::string_view s)
{
    std::string out(s);
    for (auto& c : out) {
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return out;
}

std::optional<std::size_t> Table::find_column(std::string_view name) const
{
    const auto wanted = to_lower(trim(name));
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (to_lower(trim(header[i])) == wanted) return i;
    }
    return std::nullopt;
}

std::size_t Table::require_column(std::string_view name, std::string_view source) const
{
    if (auto col = find_column(name)) return *col;
    throw DataError(std::string(source) + ": missing required column '" + std::string(name) + "'");
}

Table parse(std::string_view text)
{
    // strip a UTF-8 byte order mark
    if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

    Table table;
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> fields;
    std::string field;
    bool in_quotes = false;
    bool field_was_quoted = false;
    std::size_t record_number = 0;

    auto end_field = [&] {
        fields.push_back(std::move(field));
        field.clear();
        field_was_quoted = false;
    };
    auto end_record = [&] {
        end_field();
        ++record_number;
        if (!is_blank(fields)) {
            if (table.header.empty()) {
                table.header = std::move(fields);
            } else {
                table.rows.push_back(Record{std::move(fields), record_number});
            }
        }
        fields.clear();
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
        case '"':
            if (!field.empty() || field_was_quoted) {
                throw DataError("csv: stray quote in record " + std::to_string(record_number + 1));
            }
            in_quotes = true;
            field_was_quoted = true;
            break;
        case ',':
            end_field();
            break;
        case '\r':
            if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
            end_record();
            break;
        case '\n':
            end_record();
            break;
        default:
            if (field_was_quoted) {
                throw DataError("csv: text after closing quote in record " +
                                std::to_string(record_number + 1));
            }
            field.push_back(c);
        }
    }
    if (in_quotes) {
        throw DataError("csv: unterminated quoted field in record " + std::to_string(record_number + 1));
    }
    if (!field.empty() || !fields.empty() || field_was_quoted) end_record();
    return table;
}

std::string read_text(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text(const std::filesystem::path& path, std::string_view text)
{
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write '" + path.string() + "'");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw DataError("write failed for '" + path.string() + "'");
}

Table read_file(const std::filesystem::path& path)
{
    if (!std::filesystem::exists(path)) {
        throw DataError("file not found: '" + path.string() + "'");
    }
    try {
        return parse(read_text(path));
    } catch (const DataError& e) {
        throw DataError(path.filename().string() + ": " + e.what());
    }
}

std::string escape(std::string_view field)
{
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out;
    out.reserve(field.size() + 2);
    out.push_back('"');
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string format_row(std::span<const std::string> fields)
{
    std::string line;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) line.push_back(',');
        line += escape(fields[i]);
    }
    line.push_back('\n');
    return line;
}

} // namespace jobrel::csv
