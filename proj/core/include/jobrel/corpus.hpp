#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace jobrel {

struct JobRecord {
    std::string id;
    std::string title;
    std::string description;
    std::optional<std::string> summary;

    bool operator==(const JobRecord&) const = default;
};

struct SkillRecord {
    std::string id;
    std::string name;
    std::string description;
    bool is_category = false; // broad job function rather than a granular skill

    bool operator==(const SkillRecord&) const = default;
};

struct HierarchyEdge {
    std::string child_skill_id;
    std::string parent_skill_id;

    bool operator==(const HierarchyEdge&) const = default;
};

struct Corpus {
    std::vector<JobRecord> jobs;
    std::vector<SkillRecord> skills;
    std::vector<HierarchyEdge> hierarchy;
};

// Required columns are matched case-insensitively; extra columns are ignored.
// Errors are reported as DataError with the offending record number.

std::vector<JobRecord> parse_jobs(std::string_view csv_text, std::string_view source = "jobs");
std::vector<JobRecord> load_jobs(const std::filesystem::path& path);

std::vector<SkillRecord> parse_skills(std::string_view csv_text, std::string_view source = "skills");
std::vector<SkillRecord> load_skills(const std::filesystem::path& path);

std::vector<HierarchyEdge> parse_hierarchy(std::string_view csv_text,
                                           const std::vector<SkillRecord>& skills,
                                           std::string_view source = "hierarchy");
std::vector<HierarchyEdge> load_hierarchy(const std::filesystem::path& path,
                                          const std::vector<SkillRecord>& skills);

/// Serializers emit the canonical column set; the summary column only when
/// at least one job carries a summary.
std::string format_jobs(const std::vector<JobRecord>& jobs);
std::string format_skills(const std::vector<SkillRecord>& skills);
std::string format_hierarchy(const std::vector<HierarchyEdge>& edges);

/// Extractive summary: the first `max_sentences` sentences of the
/// description, or the title when the description is blank. A sentence is a
/// run of text closed by one or more of '.', '!', '?' or by end of text.
std::string summarize(const JobRecord& job, std::size_t max_sentences = 3);

} // namespace jobrel
