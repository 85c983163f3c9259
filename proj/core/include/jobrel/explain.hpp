#pragma once

#include "jobrel/kg.hpp"

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace jobrel {

enum class Verdict { Specific, Generic, NoOverlap };
std::string_view verdict_name(Verdict v);

struct SharedSkill {
    std::string id;    // skill node id
    std::string label;
    double specificity = 0.0;
    double weight_a = 0.0; // HAS_SKILL weight from job a
    double weight_b = 0.0;

    bool operator==(const SharedSkill&) const = default;
};

/// Indirect link: a skill of job a and a skill of job b joined through the
/// hierarchy (one is the other's parent, or both share a parent category).
struct HierarchyLink {
    std::string skill_a;
    std::string skill_b;
    std::string via; // common parent, empty for a direct parent/child link

    bool operator==(const HierarchyLink&) const = default;
};

struct ExplainedJob {
    std::string id; // job node id
    std::string title;

    bool operator==(const ExplainedJob&) const = default;
};

struct Explanation {
    ExplainedJob job_a;
    ExplainedJob job_b;
    std::vector<SharedSkill> shared_skills; // specificity descending, then id
    std::vector<HierarchyLink> hierarchy_links;
    Verdict verdict = Verdict::NoOverlap;
    double predicted_str = 0.0;

    bool operator==(const Explanation&) const = default;
};

struct ExplainOptions {
    double verdict_threshold = 0.5;
    std::size_t hops = 1; // 2 adds hierarchy links through one category
};

/// job_a / job_b are job node ids. Shared skills are the intersection of the
/// two HAS_SKILL neighbourhoods. Verdict: Specific when the most specific
/// shared skill reaches the threshold, Generic when skills are shared but
/// none does, NoOverlap otherwise.
Explanation explain_match(const KnowledgeGraph& kg, const SpecificityTable& specificity, std::string_view job_a,
                          std::string_view job_b, double predicted_str, const ExplainOptions& options = {});

/// Undirected DOT graph: the two jobs, one node per shared skill labelled
/// "name (0.67)", edges labelled with STR weights to two decimals.
std::string render_dot(const Explanation& explanation);

/// Keys in sorted order; predicted_str with 6 decimals, other reals in
/// shortest round-trip form.
std::string render_json(const Explanation& explanation);
Explanation explanation_from_json(std::string_view text);

/// Plain-text table for terminals.
std::string render_text(const Explanation& explanation);

} // namespace jobrel
