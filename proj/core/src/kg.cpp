#include "jobrel/kg.hpp"

#include "jobrel/csv.hpp"
#include "jobrel/error.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <array>
#include <unordered_map>

namespace jobrel {

std::string_view kind_name(NodeKind k)
{
    return k == NodeKind::Job ? "job" : "skill";
}

std::string_view relation_name(Relation r)
{
    return r == Relation::HasSkill ? "HAS_SKILL" : "SUBSKILL_OF";
}

std::string job_node(std::string_view job_id)
{
    return "job:" + std::string(job_id);
}

std::string skill_node(std::string_view skill_id)
{
    return "skill:" + std::string(skill_id);
}

void KnowledgeGraph::add_node(KGNode node)
{
    const std::string_view prefix = node.kind == NodeKind::Job ? "job:" : "skill:";
    if (!node.id.starts_with(prefix)) {
        throw DataError("node id '" + node.id + "' must start with '" + std::string(prefix) + "'");
    }
    auto id = node.id;
    if (!nodes_.emplace(std::move(id), std::move(node)).second) {
        throw DataError("duplicate node id");
    }
}

void KnowledgeGraph::add_edge(KGEdge edge)
{
    auto src = nodes_.find(edge.source);
    auto dst = nodes_.find(edge.target);
    if (src == nodes_.end() || dst == nodes_.end()) {
        throw DataError("edge references unknown node '" + (src == nodes_.end() ? edge.source : edge.target) + "'");
    }
    const bool ok = edge.relation == Relation::HasSkill
                        ? src->second.kind == NodeKind::Job && dst->second.kind == NodeKind::Skill
                        : src->second.kind == NodeKind::Skill && dst->second.kind == NodeKind::Skill &&
                              edge.source != edge.target;
    if (!ok) {
        throw DataError(std::string(relation_name(edge.relation)) + " edge " + edge.source + " -> " + edge.target +
                        " connects the wrong node kinds");
    }
    if (!(edge.weight >= 0.0 && edge.weight <= 1.0)) throw DataError("edge weight outside [0, 1]");
    EdgeKey key{std::move(edge.source), std::move(edge.target), edge.relation};
    if (!edges_.emplace(std::move(key), edge.weight).second) throw DataError("duplicate edge");
}

void KnowledgeGraph::remove_node(std::string_view id)
{
    auto it = nodes_.find(id);
    if (it == nodes_.end()) return;
    std::erase_if(edges_, [&](const auto& e) {
        return std::get<0>(e.first) == id || std::get<1>(e.first) == id;
    });
    nodes_.erase(it);
}

bool KnowledgeGraph::has_node(std::string_view id) const
{
    return nodes_.find(id) != nodes_.end();
}

const KGNode& KnowledgeGraph::node(std::string_view id) const
{
    auto it = nodes_.find(id);
    if (it == nodes_.end()) throw DataError("unknown node '" + std::string(id) + "'");
    return it->second;
}

std::vector<KGEdge> KnowledgeGraph::edges() const
{
    std::vector<KGEdge> out;
    out.reserve(edges_.size());
    for (const auto& [k, w] : edges_) out.push_back({std::get<0>(k), std::get<1>(k), std::get<2>(k), w});
    return out;
}

std::vector<std::string> KnowledgeGraph::job_ids() const
{
    std::vector<std::string> out;
    for (const auto& [id, n] : nodes_) {
        if (n.kind == NodeKind::Job) out.push_back(id);
    }
    return out;
}

std::vector<std::string> KnowledgeGraph::skill_ids() const
{
    std::vector<std::string> out;
    for (const auto& [id, n] : nodes_) {
        if (n.kind == NodeKind::Skill) out.push_back(id);
    }
    return out;
}

std::size_t KnowledgeGraph::job_count() const
{
    return static_cast<std::size_t>(
        std::count_if(nodes_.begin(), nodes_.end(), [](const auto& kv) { return kv.second.kind == NodeKind::Job; }));
}

std::map<std::string, double> KnowledgeGraph::skills_of(std::string_view job_node_id) const
{
    std::map<std::string, double> out;
    const std::string src(job_node_id);
    for (auto it = edges_.lower_bound(EdgeKey{src, "", Relation::HasSkill});
         it != edges_.end() && std::get<0>(it->first) == src; ++it) {
        if (std::get<2>(it->first) == Relation::HasSkill) out.emplace(std::get<1>(it->first), it->second);
    }
    return out;
}

std::size_t KnowledgeGraph::has_skill_degree(std::string_view skill_node_id) const
{
    return static_cast<std::size_t>(std::count_if(edges_.begin(), edges_.end(), [&](const auto& e) {
        return std::get<2>(e.first) == Relation::HasSkill && std::get<1>(e.first) == skill_node_id;
    }));
}

std::size_t KnowledgeGraph::degree(std::string_view node_id) const
{
    return static_cast<std::size_t>(std::count_if(edges_.begin(), edges_.end(), [&](const auto& e) {
        return std::get<0>(e.first) == node_id || std::get<1>(e.first) == node_id;
    }));
}

std::vector<std::string> KnowledgeGraph::parents_of(std::string_view skill_node_id) const
{
    std::vector<std::string> out;
    const std::string src(skill_node_id);
    for (auto it = edges_.lower_bound(EdgeKey{src, "", Relation::HasSkill});
         it != edges_.end() && std::get<0>(it->first) == src; ++it) {
        if (std::get<2>(it->first) == Relation::SubskillOf) out.push_back(std::get<1>(it->first));
    }
    return out;
}

std::vector<SkillMatch> match_job_skills(std::span<const double> job_embedding, const EmbeddingStore& skill_store,
                                         std::size_t k, double threshold)
{
    if (k < 1) throw UsageError("match_job_skills: k must be >= 1");
    if (!(threshold >= 0.0 && threshold <= 1.0)) throw UsageError("match_job_skills: threshold must lie in [0, 1]");
    if (job_embedding.size() != skill_store.dimension()) {
        throw DataError("match_job_skills: job embedding dimension " + std::to_string(job_embedding.size()) +
                        " != skill store dimension " + std::to_string(skill_store.dimension()));
    }
    std::vector<SkillMatch> out;
    for (std::size_t i = 0; i < skill_store.size(); ++i) {
        const double s = str_score(job_embedding, skill_store.row(i));
        if (s >= threshold) out.push_back({skill_store.ids()[i], s});
    }
    std::sort(out.begin(), out.end(), [](const SkillMatch& a, const SkillMatch& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.skill_id < b.skill_id;
    });
    if (out.size() > k) out.resize(k);
    return out;
}

KnowledgeGraph build_graph(const std::vector<JobRecord>& jobs, const std::vector<SkillRecord>& skills,
                           const std::map<std::string, std::vector<SkillMatch>>& matches,
                           const std::vector<HierarchyEdge>& hierarchy, const EmbeddingStore& skill_store,
                           const GraphBuildConfig& config)
{
    KnowledgeGraph kg;
    for (const auto& j : jobs) kg.add_node({job_node(j.id), NodeKind::Job, j.title});
    for (const auto& s : skills) kg.add_node({skill_node(s.id), NodeKind::Skill, s.name});

    for (const auto& [job_id, list] : matches) {
        const auto jn = job_node(job_id);
        if (!kg.has_node(jn)) throw DataError("match references unknown job '" + job_id + "'");
        for (const auto& m : list) {
            const auto sn = skill_node(m.skill_id);
            if (!kg.has_node(sn)) throw DataError("match references unknown skill '" + m.skill_id + "'");
            kg.add_edge({jn, sn, Relation::HasSkill, m.score});
        }
    }
    for (const auto& h : hierarchy) {
        const auto child = skill_node(h.child_skill_id);
        const auto parent = skill_node(h.parent_skill_id);
        if (!kg.has_node(child) || !kg.has_node(parent)) {
            throw DataError("hierarchy edge " + h.child_skill_id + " -> " + h.parent_skill_id +
                            " references an unknown skill");
        }
        if (str_score(skill_store.at(h.child_skill_id), skill_store.at(h.parent_skill_id)) >=
            config.skill_skill_threshold) {
            kg.add_edge({child, parent, Relation::SubskillOf, 1.0});
        }
    }

    std::map<std::string, std::size_t> deg;
    for (const auto& e : kg.edges()) {
        ++deg[e.source];
        ++deg[e.target];
    }
    for (const auto& s : kg.skill_ids()) {
        if (!deg.contains(s)) kg.remove_node(s);
    }
    return kg;
}

double job_share(const KnowledgeGraph& kg, std::string_view skill_node_id)
{
    const auto& n = kg.node(skill_node_id);
    if (n.kind != NodeKind::Skill) throw DataError("job_share: '" + n.id + "' is not a skill");
    const auto jobs = kg.job_count();
    if (jobs == 0) return 0.0;
    return static_cast<double>(kg.has_skill_degree(skill_node_id)) / static_cast<double>(jobs);
}

KnowledgeGraph prune_generic(const KnowledgeGraph& kg, double share_threshold)
{
    if (!(share_threshold > 0.0 && share_threshold <= 1.0)) {
        throw UsageError("prune_generic: share threshold must lie in (0, 1]");
    }
    const auto jobs = static_cast<double>(kg.job_count());
    std::map<std::string, std::size_t> has_skill;
    for (const auto& e : kg.edges()) {
        if (e.relation == Relation::HasSkill) ++has_skill[e.target];
    }
    KnowledgeGraph out = kg;
    for (const auto& s : kg.skill_ids()) {
        const auto d = has_skill.contains(s) ? has_skill.at(s) : 0;
        if (jobs > 0 && static_cast<double>(d) / jobs > share_threshold) out.remove_node(s);
    }
    std::map<std::string, std::size_t> deg;
    for (const auto& e : out.edges()) {
        ++deg[e.source];
        ++deg[e.target];
    }
    for (const auto& s : out.skill_ids()) {
        if (!deg.contains(s)) out.remove_node(s);
    }
    return out;
}

SpecificityTable compute_specificity(const KnowledgeGraph& kg)
{
    const auto skills = kg.skill_ids();
    if (skills.empty()) throw DataError("compute_specificity: graph has no skills");
    std::map<std::string, std::size_t> deg;
    for (const auto& s : skills) deg[s] = 0;
    for (const auto& e : kg.edges()) {
        if (e.relation == Relation::HasSkill) ++deg[e.target];
    }
    auto [lo, hi] = std::minmax_element(deg.begin(), deg.end(),
                                        [](const auto& a, const auto& b) { return a.second < b.second; });
    const double dmin = static_cast<double>(lo->second);
    const double dmax = static_cast<double>(hi->second);
    SpecificityTable out;
    for (const auto& [s, d] : deg) {
        out[s] = dmax == dmin ? 1.0 : 1.0 - (static_cast<double>(d) - dmin) / (dmax - dmin);
    }
    return out;
}

std::string graph_to_json(const KnowledgeGraph& kg)
{
    nlohmann::json j;
    j["nodes"] = nlohmann::json::array();
    for (const auto& [id, n] : kg.nodes()) {
        j["nodes"].push_back({{"id", n.id}, {"kind", kind_name(n.kind)}, {"label", n.label}});
    }
    j["edges"] = nlohmann::json::array();
    for (const auto& e : kg.edges()) {
        j["edges"].push_back({{"source", e.source},
                              {"target", e.target},
                              {"relation", relation_name(e.relation)},
                              {"weight", e.weight}});
    }
    return j.dump(2) + "\n";
}

KnowledgeGraph graph_from_json(std::string_view text)
{
    KnowledgeGraph kg;
    try {
        const auto j = nlohmann::json::parse(text);
        for (const auto& n : j.at("nodes")) {
            const auto kind = n.at("kind").get<std::string>();
            if (kind != "job" && kind != "skill") throw DataError("unknown node kind '" + kind + "'");
            kg.add_node({n.at("id").get<std::string>(), kind == "job" ? NodeKind::Job : NodeKind::Skill,
                         n.at("label").get<std::string>()});
        }
        for (const auto& e : j.at("edges")) {
            const auto rel = e.at("relation").get<std::string>();
            if (rel != "HAS_SKILL" && rel != "SUBSKILL_OF") throw DataError("unknown relation '" + rel + "'");
            kg.add_edge({e.at("source").get<std::string>(), e.at("target").get<std::string>(),
                         rel == "HAS_SKILL" ? Relation::HasSkill : Relation::SubskillOf,
                         e.at("weight").get<double>()});
        }
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("graph json: ") + e.what());
    }
    return kg;
}

void save_graph(const KnowledgeGraph& kg, const std::filesystem::path& path)
{
    csv::write_text(path, graph_to_json(kg));
}

KnowledgeGraph load_graph(const std::filesystem::path& path)
{
    if (!std::filesystem::exists(path)) throw DataError("file not found: '" + path.string() + "'");
    return graph_from_json(csv::read_text(path));
}

std::string format_specificity(const SpecificityTable& table, const KnowledgeGraph& kg)
{
    std::map<std::string, std::size_t> deg;
    std::map<std::string, std::size_t> has_skill;
    for (const auto& e : kg.edges()) {
        if (e.relation == Relation::HasSkill) ++has_skill[e.target];
    }
    const auto jobs = static_cast<double>(std::max<std::size_t>(1, kg.job_count()));
    std::string out = "skill,label,degree,job_share,specificity\n";
    for (const auto& [id, spec] : table) {
        const auto d = has_skill.contains(id) ? has_skill.at(id) : 0;
        const std::array<std::string, 5> f{id, kg.has_node(id) ? kg.node(id).label : "", std::to_string(d),
                                           format_double(static_cast<double>(d) / jobs), format_double(spec)};
        out += csv::format_row(f);
    }
    return out;
}

SpecificityTable parse_specificity(std::string_view csv_text)
{
    const auto table = csv::parse(csv_text);
    const auto id_col = table.require_column("skill", "specificity");
    const auto s_col = table.require_column("specificity", "specificity");
    SpecificityTable out;
    for (const auto& row : table.rows) {
        if (row.fields.size() <= std::max(id_col, s_col)) {
            throw DataError("specificity row " + std::to_string(row.number) + ": too few fields");
        }
        out[csv::trim(row.fields[id_col])] = parse_double(row.fields[s_col]);
    }
    return out;
}

} // namespace jobrel
