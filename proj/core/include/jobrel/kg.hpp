#pragma once

#include "jobrel/corpus.hpp"
#include "jobrel/embed.hpp"

#include <cstddef>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace jobrel {

enum class NodeKind { Job, Skill };
enum class Relation { HasSkill, SubskillOf };

std::string_view kind_name(NodeKind k);
std::string_view relation_name(Relation r);

/// Namespaced node ids: "job:<id>" and "skill:<id>".
std::string job_node(std::string_view job_id);
std::string skill_node(std::string_view skill_id);

struct KGNode {
    std::string id;
    NodeKind kind = NodeKind::Job;
    std::string label;

    bool operator==(const KGNode&) const = default;
};

struct KGEdge {
    std::string source;
    std::string target;
    Relation relation = Relation::HasSkill;
    double weight = 1.0;

    auto key() const { return std::tie(source, target, relation); }
    bool operator==(const KGEdge&) const = default;
};

/// Typed job/skill graph. HAS_SKILL runs Job -> Skill, SUBSKILL_OF runs
/// child Skill -> parent Skill. Nodes and edges are kept sorted.
class KnowledgeGraph {
public:
    void add_node(KGNode node);
    /// Throws DataError on unknown endpoints, wrong endpoint kinds or a
    /// duplicate (source, target, relation).
    void add_edge(KGEdge edge);
    void remove_node(std::string_view id);

    bool has_node(std::string_view id) const;
    const KGNode& node(std::string_view id) const;
    const std::map<std::string, KGNode, std::less<>>& nodes() const noexcept { return nodes_; }
    std::vector<KGEdge> edges() const;
    std::size_t edge_count() const noexcept { return edges_.size(); }

    std::vector<std::string> job_ids() const;
    std::vector<std::string> skill_ids() const;
    std::size_t job_count() const;

    /// Skills with a HAS_SKILL edge from this job, with edge weights.
    std::map<std::string, double> skills_of(std::string_view job_node_id) const;
    /// Number of HAS_SKILL edges into a skill.
    std::size_t has_skill_degree(std::string_view skill_node_id) const;
    std::size_t degree(std::string_view node_id) const;
    /// SUBSKILL_OF parents of a skill.
    std::vector<std::string> parents_of(std::string_view skill_node_id) const;

    bool operator==(const KnowledgeGraph&) const = default;

private:
    using EdgeKey = std::tuple<std::string, std::string, Relation>;
    std::map<std::string, KGNode, std::less<>> nodes_;
    std::map<EdgeKey, double> edges_;
};

struct SkillMatch {
    std::string skill_id;
    double score = 0.0;

    bool operator==(const SkillMatch&) const = default;
};

/// All skills with str_score >= threshold, sorted by score descending then
/// id ascending, truncated to k.
std::vector<SkillMatch> match_job_skills(std::span<const double> job_embedding, const EmbeddingStore& skill_store,
                                         std::size_t k = 10, double threshold = 0.5);

struct GraphBuildConfig {
    double skill_skill_threshold = 0.25;
};

/// matches: job id -> matched skills. Adds one HAS_SKILL edge per match
/// (weight = score), one SUBSKILL_OF edge (weight 1) per hierarchy row whose
/// child/parent embeddings score >= the skill-skill threshold, then drops
/// skills without incident edges. Every job becomes a node.
KnowledgeGraph build_graph(const std::vector<JobRecord>& jobs, const std::vector<SkillRecord>& skills,
                           const std::map<std::string, std::vector<SkillMatch>>& matches,
                           const std::vector<HierarchyEdge>& hierarchy, const EmbeddingStore& skill_store,
                           const GraphBuildConfig& config = {});

/// Distinct jobs linked to the skill divided by all jobs in the graph.
double job_share(const KnowledgeGraph& kg, std::string_view skill_node_id);

/// Removes every skill with job_share > threshold along with its edges, then
/// any skill left without edges. Jobs are never removed.
KnowledgeGraph prune_generic(const KnowledgeGraph& kg, double share_threshold = 0.20);

/// Skill node id -> specificity in [0, 1]:
///   1 - (deg - deg_min) / (deg_max - deg_min)   over HAS_SKILL degree,
/// or 1 for every skill when all degrees are equal.
using SpecificityTable = std::map<std::string, double>;
SpecificityTable compute_specificity(const KnowledgeGraph& kg);

// JSON: {"edges":[{relation,source,target,weight}...],"nodes":[{id,kind,label}...]}
std::string graph_to_json(const KnowledgeGraph& kg);
KnowledgeGraph graph_from_json(std::string_view text);
void save_graph(const KnowledgeGraph& kg, const std::filesystem::path& path);
KnowledgeGraph load_graph(const std::filesystem::path& path);

std::string format_specificity(const SpecificityTable& table, const KnowledgeGraph& kg);
SpecificityTable parse_specificity(std::string_view csv_text);

} // namespace jobrel
