#include "jobrel/error.hpp"
#include "jobrel/explain.hpp"
#include "jobrel/kg.hpp"
#include "jobrel/random.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>
#include <string>

using namespace jobrel;

namespace {

// j0 and j1 share python (specific) and teamwork (generic); j2 shares nothing
KnowledgeGraph sample_graph()
{
    KnowledgeGraph kg;
    kg.add_node({"job:j0", NodeKind::Job, "Data Scientist"});
    kg.add_node({"job:j1", NodeKind::Job, "ML Engineer"});
    kg.add_node({"job:j2", NodeKind::Job, "Line \"Chef\""});
    kg.add_node({"job:j3", NodeKind::Job, "Analyst"});
    kg.add_node({"skill:py", NodeKind::Skill, "python"});
    kg.add_node({"skill:team", NodeKind::Skill, "teamwork"});
    kg.add_node({"skill:cook", NodeKind::Skill, "cooking"});
    kg.add_node({"skill:stats", NodeKind::Skill, "statistics"});
    kg.add_node({"skill:sql", NodeKind::Skill, "sql"});
    kg.add_node({"skill:data", NodeKind::Skill, "data"});
    kg.add_edge({"job:j0", "skill:py", Relation::HasSkill, 0.9});
    kg.add_edge({"job:j1", "skill:py", Relation::HasSkill, 0.8});
    kg.add_edge({"job:j0", "skill:team", Relation::HasSkill, 0.6});
    kg.add_edge({"job:j1", "skill:team", Relation::HasSkill, 0.55});
    kg.add_edge({"job:j3", "skill:team", Relation::HasSkill, 0.7});
    kg.add_edge({"job:j2", "skill:cook", Relation::HasSkill, 0.95});
    kg.add_edge({"job:j0", "skill:stats", Relation::HasSkill, 0.7});
    kg.add_edge({"job:j3", "skill:sql", Relation::HasSkill, 0.75});
    kg.add_edge({"skill:stats", "skill:data", Relation::SubskillOf, 1.0});
    kg.add_edge({"skill:sql", "skill:data", Relation::SubskillOf, 1.0});
    return kg;
}

std::set<std::string> shared_ids(const Explanation& e)
{
    std::set<std::string> out;
    for (const auto& s : e.shared_skills) out.insert(s.id);
    return out;
}

KnowledgeGraph random_graph(Rng& rng)
{
    KnowledgeGraph kg;
    const auto jobs = 2 + rng.below(8);
    const auto skills = 1 + rng.below(10);
    for (std::uint64_t j = 0; j < jobs; ++j) kg.add_node({"job:j" + std::to_string(j), NodeKind::Job, "Job " + std::to_string(j)});
    for (std::uint64_t s = 0; s < skills; ++s) kg.add_node({"skill:s" + std::to_string(s), NodeKind::Skill, "skill " + std::to_string(s)});
    for (std::uint64_t j = 0; j < jobs; ++j) {
        for (std::uint64_t s = 0; s < skills; ++s) {
            if (rng.uniform() < 0.4) {
                kg.add_edge({"job:j" + std::to_string(j), "skill:s" + std::to_string(s), Relation::HasSkill, rng.uniform()});
            }
        }
    }
    return kg;
}

} // namespace

TEST_CASE("shared skills, ordering and verdicts")
{
    const auto kg = sample_graph();
    const auto spec = compute_specificity(kg);
    // degrees: py 2, team 3, cook 1, stats 1, sql 1, data 0
    CHECK(spec.at("skill:py") == doctest::Approx(1.0 / 3.0));
    CHECK(spec.at("skill:team") == 0.0);
    CHECK(spec.at("skill:data") == 1.0);

    const auto e = explain_match(kg, spec, "job:j0", "job:j1", 0.8123456789);
    REQUIRE(e.shared_skills.size() == 2);
    CHECK(e.shared_skills[0].id == "skill:py");
    CHECK(e.shared_skills[0].weight_a == 0.9);
    CHECK(e.shared_skills[0].weight_b == 0.8);
    CHECK(e.shared_skills[1].id == "skill:team");
    CHECK(e.verdict == Verdict::Generic);
    CHECK(e.job_a.title == "Data Scientist");

    CHECK(explain_match(kg, spec, "job:j0", "job:j3", 0.1).verdict == Verdict::Generic);
    const auto none = explain_match(kg, spec, "job:j0", "job:j2", 0.1);
    CHECK(none.verdict == Verdict::NoOverlap);
    CHECK(none.shared_skills.empty());
    CHECK(none.hierarchy_links.empty());

    CHECK(explain_match(kg, spec, "job:j0", "job:j1", 0.5, ExplainOptions{0.3, 1}).verdict == Verdict::Specific);
    CHECK_THROWS_AS(explain_match(kg, spec, "job:j0", "job:zz", 0.1), DataError);
    CHECK_THROWS_AS(explain_match(kg, spec, "job:j0", "skill:py", 0.1), DataError);
}

TEST_CASE("two hops add hierarchy links through a shared parent")
{
    const auto kg = sample_graph();
    const auto spec = compute_specificity(kg);
    const auto e = explain_match(kg, spec, "job:j0", "job:j3", 0.3, ExplainOptions{0.5, 2});
    REQUIRE(e.hierarchy_links.size() == 1);
    CHECK(e.hierarchy_links[0] == HierarchyLink{"skill:stats", "skill:sql", "skill:data"});
    CHECK(explain_match(kg, spec, "job:j0", "job:j3", 0.3).hierarchy_links.empty());

    oracle::DotGraph g;
    REQUIRE(oracle::parse_dot(render_dot(e), g));
    CHECK(std::find(g.node_ids.begin(), g.node_ids.end(), "skill:data") != g.node_ids.end());
}

TEST_CASE("symmetry, soundness and monotonicity on random graphs")
{
    Rng rng(31, "explain");
    for (int trial = 0; trial < 100; ++trial) {
        auto kg = random_graph(rng);
        const auto spec = compute_specificity(kg);
        const auto jobs = kg.job_ids();
        const auto a = jobs[rng.below(jobs.size())];
        const auto b = jobs[rng.below(jobs.size())];
        const auto ab = explain_match(kg, spec, a, b, 0.4);
        const auto ba = explain_match(kg, spec, b, a, 0.4);
        CHECK(shared_ids(ab) == shared_ids(ba));
        CHECK(ab.verdict == ba.verdict);
        for (std::size_t i = 0; i < ab.shared_skills.size(); ++i) {
            CHECK(ab.shared_skills[i].id == ba.shared_skills[i].id);
            CHECK(ab.shared_skills[i].weight_a == ba.shared_skills[i].weight_b);
        }
        for (const auto& s : ab.shared_skills) {
            CHECK(kg.skills_of(a).contains(s.id));
            CHECK(kg.skills_of(b).contains(s.id));
        }
        for (std::size_t i = 1; i < ab.shared_skills.size(); ++i) {
            CHECK(ab.shared_skills[i - 1].specificity >= ab.shared_skills[i].specificity);
        }

        // adding a HAS_SKILL edge can only grow the shared set (same specificity table)
        const auto skills = kg.skill_ids();
        const auto extra = skills[rng.below(skills.size())];
        if (!kg.skills_of(b).contains(extra)) {
            kg.add_edge({b, extra, Relation::HasSkill, 0.5});
            const auto grown = explain_match(kg, spec, a, b, 0.4);
            const auto before = shared_ids(ab);
            const auto after = shared_ids(grown);
            CHECK(std::includes(after.begin(), after.end(), before.begin(), before.end()));
        }
    }
}

TEST_CASE("dot output parses and follows the label conventions")
{
    const auto kg = sample_graph();
    const auto spec = compute_specificity(kg);
    const auto e = explain_match(kg, spec, "job:j0", "job:j1", 0.81);
    const auto dot = render_dot(e);
    oracle::DotGraph g;
    REQUIRE(oracle::parse_dot(dot, g));
    CHECK(g.node_ids.size() == 4);
    CHECK(g.edges.size() == 4);
    std::set<std::string> labels(g.node_labels.begin(), g.node_labels.end());
    CHECK(labels.contains("python (0.33)"));
    CHECK(labels.contains("teamwork (0.00)"));
    CHECK(labels.contains("Data Scientist"));
    std::set<std::string> edge_labels(g.edge_labels.begin(), g.edge_labels.end());
    CHECK(edge_labels == std::set<std::string>{"0.90", "0.80", "0.60", "0.55"});

    // quotes in titles survive escaping
    const auto q = explain_match(kg, spec, "job:j2", "job:j0", 0.0);
    REQUIRE(oracle::parse_dot(render_dot(q), g));
    CHECK(std::find(g.node_labels.begin(), g.node_labels.end(), "Line \"Chef\"") != g.node_labels.end());
}

TEST_CASE("json round trip and fixed precision")
{
    const auto kg = sample_graph();
    const auto spec = compute_specificity(kg);
    auto e = explain_match(kg, spec, "job:j0", "job:j3", 0.25, ExplainOptions{0.5, 2});
    const auto text = render_json(e);
    CHECK(text.find("\"predicted_str\": 0.250000,") != std::string::npos);
    CHECK(explanation_from_json(text) == e);

    e.predicted_str = 0.1234567;
    const auto back = explanation_from_json(render_json(e));
    CHECK(back.predicted_str == 0.123457);
    CHECK(back.shared_skills == e.shared_skills);
    CHECK_THROWS_AS(explanation_from_json("{\"verdict\": 1}"), DataError);
}

TEST_CASE("text rendering mentions both titles and the verdict")
{
    const auto kg = sample_graph();
    const auto spec = compute_specificity(kg);
    const auto txt = render_text(explain_match(kg, spec, "job:j0", "job:j1", 0.81));
    CHECK(txt.find("Data Scientist") != std::string::npos);
    CHECK(txt.find("ML Engineer") != std::string::npos);
    CHECK(txt.find("Generic") != std::string::npos);
}

TEST_CASE("specificity 2/3 renders as (0.67) and a 0.0-only overlap is Generic")
{
    // HAS_SKILL degrees: rare 1, brand 2, office 4
    KnowledgeGraph kg;
    for (int j = 0; j < 4; ++j) kg.add_node({"job:j" + std::to_string(j), NodeKind::Job, "J" + std::to_string(j)});
    kg.add_node({"skill:rare", NodeKind::Skill, "rare"});
    kg.add_node({"skill:brand", NodeKind::Skill, "supervise brand management"});
    kg.add_node({"skill:office", NodeKind::Skill, "supervise office workers"});
    kg.add_edge({"job:j0", "skill:rare", Relation::HasSkill, 0.7});
    kg.add_edge({"job:j0", "skill:brand", Relation::HasSkill, 0.7});
    kg.add_edge({"job:j1", "skill:brand", Relation::HasSkill, 0.6});
    for (int j = 0; j < 4; ++j) kg.add_edge({"job:j" + std::to_string(j), "skill:office", Relation::HasSkill, 0.5});
    const auto spec = compute_specificity(kg);

    const auto good = explain_match(kg, spec, "job:j0", "job:j1", 0.9);
    CHECK(good.verdict == Verdict::Specific);
    REQUIRE(good.shared_skills.size() == 2);
    CHECK(good.shared_skills[0].id == "skill:brand");
    CHECK(good.shared_skills[0].specificity == doctest::Approx(2.0 / 3.0));
    oracle::DotGraph g;
    REQUIRE(oracle::parse_dot(render_dot(good), g));
    std::set<std::string> labels(g.node_labels.begin(), g.node_labels.end());
    CHECK(labels.contains("supervise brand management (0.67)"));
    CHECK(labels.contains("supervise office workers (0.00)"));

    const auto poor = explain_match(kg, spec, "job:j2", "job:j3", 0.4);
    CHECK(poor.verdict == Verdict::Generic);
    REQUIRE(poor.shared_skills.size() == 1);
    CHECK(poor.shared_skills[0].specificity == 0.0);

    // a higher-specificity shared skill never downgrades the verdict
    kg.add_node({"skill:niche", NodeKind::Skill, "niche"});
    kg.add_edge({"job:j0", "skill:niche", Relation::HasSkill, 0.8});
    kg.add_edge({"job:j1", "skill:niche", Relation::HasSkill, 0.8});
    auto spec2 = spec;
    spec2["skill:niche"] = 0.9;
    const auto better = explain_match(kg, spec2, "job:j0", "job:j1", 0.9);
    CHECK(better.verdict == Verdict::Specific);
    CHECK(better.shared_skills[0].id == "skill:niche");
}

TEST_CASE("no-overlap dot has two isolated job nodes")
{
    const auto kg = sample_graph();
    const auto spec = compute_specificity(kg);
    oracle::DotGraph g;
    REQUIRE(oracle::parse_dot(render_dot(explain_match(kg, spec, "job:j1", "job:j2", 0.0)), g));
    CHECK(g.node_ids == std::vector<std::string>{"job:j1", "job:j2"});
    CHECK(g.edges.empty());
}
