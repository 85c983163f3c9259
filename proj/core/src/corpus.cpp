#include "jobrel/corpus.hpp"

#include "jobrel/csv.hpp"
#include "jobrel/error.hpp"

#include <array>
#include <map>
#include <set>

namespace jobrel {

namespace {

std::string where(std::string_view source, std::size_t record)
{
    return std::string(source) + " row " + std::to_string(record);
}

const std::string& field_or_empty(const csv::Record& r, std::size_t col)
{
    static const std::string empty;
    return col < r.fields.size() ? r.fields[col] : empty;
}

bool parse_bool(std::string_view raw, std::string_view source, std::size_t record)
{
    const auto v = csv::to_lower(csv::trim(raw));
    if (v.empty() || v == "0" || v == "false" || v == "no") return false;
    if (v == "1" || v == "true" || v == "yes") return true;
    throw DataError(where(source, record) + ": invalid boolean '" + std::string(raw) + "'");
}

} // namespace

std::vector<JobRecord> parse_jobs(std::string_view csv_text, std::string_view source)
{
    const auto table = csv::parse(csv_text);
    const auto id_col = table.require_column("id", source);
    const auto title_col = table.require_column("title", source);
    const auto desc_col = table.require_column("description", source);
    const auto summary_col = table.find_column("summary");

    std::vector<JobRecord> jobs;
    jobs.reserve(table.rows.size());
    std::map<std::string, std::size_t> seen; // id -> record number
    for (const auto& row : table.rows) {
        JobRecord job;
        job.id = csv::trim(field_or_empty(row, id_col));
        job.title = csv::trim(field_or_empty(row, title_col));
        job.description = csv::trim(field_or_empty(row, desc_col));
        if (summary_col) {
            auto s = csv::trim(field_or_empty(row, *summary_col));
            if (!s.empty()) job.summary = std::move(s);
        }
        if (job.id.empty()) throw DataError(where(source, row.number) + ": empty id");
        if (job.title.empty()) {
            throw DataError(where(source, row.number) + ": empty title for job '" + job.id + "'");
        }
        if (auto [it, inserted] = seen.emplace(job.id, row.number); !inserted) {
            throw DataError(std::string(source) + ": duplicate id '" + job.id + "' at rows " +
                            std::to_string(it->second) + " and " + std::to_string(row.number));
        }
        jobs.push_back(std::move(job));
    }
    return jobs;
}

std::vector<JobRecord> load_jobs(const std::filesystem::path& path)
{
    if (!std::filesystem::exists(path)) throw DataError("file not found: '" + path.string() + "'");
    return parse_jobs(csv::read_text(path), path.filename().string());
}

std::vector<SkillRecord> parse_skills(std::string_view csv_text, std::string_view source)
{
    const auto table = csv::parse(csv_text);
    const auto id_col = table.require_column("id", source);
    const auto name_col = table.require_column("name", source);
    const auto desc_col = table.find_column("description");
    const auto cat_col = table.find_column("is_category");

    std::vector<SkillRecord> skills;
    skills.reserve(table.rows.size());
    std::map<std::string, std::size_t> seen;
    for (const auto& row : table.rows) {
        SkillRecord skill;
        skill.id = csv::trim(field_or_empty(row, id_col));
        skill.name = csv::trim(field_or_empty(row, name_col));
        if (desc_col) skill.description = csv::trim(field_or_empty(row, *desc_col));
        if (cat_col) skill.is_category = parse_bool(field_or_empty(row, *cat_col), source, row.number);
        if (skill.id.empty()) throw DataError(where(source, row.number) + ": empty id");
        if (skill.name.empty()) {
            throw DataError(where(source, row.number) + ": empty name for skill '" + skill.id + "'");
        }
        if (auto [it, inserted] = seen.emplace(skill.id, row.number); !inserted) {
            throw DataError(std::string(source) + ": duplicate id '" + skill.id + "' at rows " +
                            std::to_string(it->second) + " and " + std::to_string(row.number));
        }
        skills.push_back(std::move(skill));
    }
    return skills;
}

std::vector<SkillRecord> load_skills(const std::filesystem::path& path)
{
    if (!std::filesystem::exists(path)) throw DataError("file not found: '" + path.string() + "'");
    return parse_skills(csv::read_text(path), path.filename().string());
}

std::vector<HierarchyEdge> parse_hierarchy(std::string_view csv_text,
                                           const std::vector<SkillRecord>& skills,
                                           std::string_view source)
{
    const auto table = csv::parse(csv_text);
    const auto child_col = table.require_column("child_id", source);
    const auto parent_col = table.require_column("parent_id", source);

    std::set<std::string> known;
    for (const auto& s : skills) known.insert(s.id);

    std::vector<HierarchyEdge> edges;
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& row : table.rows) {
        HierarchyEdge e{csv::trim(field_or_empty(row, child_col)),
                        csv::trim(field_or_empty(row, parent_col))};
        for (const auto* id : {&e.child_skill_id, &e.parent_skill_id}) {
            if (!known.contains(*id)) {
                throw DataError(where(source, row.number) + ": dangling reference to unknown skill '" +
                                *id + "'");
            }
        }
        if (e.child_skill_id == e.parent_skill_id) {
            throw DataError(where(source, row.number) + ": self-loop on skill '" + e.child_skill_id + "'");
        }
        if (!seen.emplace(e.child_skill_id, e.parent_skill_id).second) {
            throw DataError(where(source, row.number) + ": duplicate edge " + e.child_skill_id + " -> " +
                            e.parent_skill_id);
        }
        edges.push_back(std::move(e));
    }
    return edges;
}

std::vector<HierarchyEdge> load_hierarchy(const std::filesystem::path& path,
                                          const std::vector<SkillRecord>& skills)
{
    if (!std::filesystem::exists(path)) throw DataError("file not found: '" + path.string() + "'");
    return parse_hierarchy(csv::read_text(path), skills, path.filename().string());
}

std::string format_jobs(const std::vector<JobRecord>& jobs)
{
    bool with_summary = false;
    for (const auto& j : jobs) with_summary = with_summary || j.summary.has_value();

    std::string out;
    if (with_summary) {
        out += "id,title,description,summary\n";
        for (const auto& j : jobs) {
            const std::array<std::string, 4> f{j.id, j.title, j.description, j.summary.value_or("")};
            out += csv::format_row(f);
        }
    } else {
        out += "id,title,description\n";
        for (const auto& j : jobs) {
            const std::array<std::string, 3> f{j.id, j.title, j.description};
            out += csv::format_row(f);
        }
    }
    return out;
}

std::string format_skills(const std::vector<SkillRecord>& skills)
{
    std::string out = "id,name,description,is_category\n";
    for (const auto& s : skills) {
        const std::array<std::string, 4> f{s.id, s.name, s.description, s.is_category ? "true" : "false"};
        out += csv::format_row(f);
    }
    return out;
}

std::string format_hierarchy(const std::vector<HierarchyEdge>& edges)
{
    std::string out = "child_id,parent_id\n";
    for (const auto& e : edges) {
        const std::array<std::string, 2> f{e.child_skill_id, e.parent_skill_id};
        out += csv::format_row(f);
    }
    return out;
}

std::string summarize(const JobRecord& job, std::size_t max_sentences)
{
    if (max_sentences == 0) throw UsageError("summarize: max_sentences must be >= 1");
    const std::string_view text = job.description;
    const auto is_terminal = [](char c) { return c == '.' || c == '!' || c == '?'; };

    std::size_t sentences = 0;
    std::size_t i = 0;
    std::size_t cut = text.size();
    while (i < text.size()) {
        const std::size_t start = i;
        while (i < text.size() && !is_terminal(text[i])) ++i;
        while (i < text.size() && is_terminal(text[i])) ++i;
        if (csv::trim(text.substr(start, i - start)).empty()) continue;
        if (++sentences == max_sentences) {
            cut = i;
            break;
        }
    }
    auto summary = csv::trim(text.substr(0, cut));
    return summary.empty() ? job.title : summary;
}

} // namespace jobrel
