#include "jobrel/explain.hpp"

#include "jobrel/error.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <set>
#include <sstream>

namespace jobrel {

namespace {

std::string dot_quote(std::string_view s)
{
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        if (c == '\n' || c == '\r') {
            out += "\\n";
            continue;
        }
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string json_string(std::string_view s)
{
    return nlohmann::json(std::string(s)).dump();
}

const KGNode& require_job(const KnowledgeGraph& kg, std::string_view id)
{
    if (!kg.has_node(id)) throw DataError("unknown job '" + std::string(id) + "'");
    const auto& n = kg.node(id);
    if (n.kind != NodeKind::Job) throw DataError("'" + std::string(id) + "' is not a job");
    return n;
}

} // namespace

std::string_view verdict_name(Verdict v)
{
    switch (v) {
    case Verdict::Specific: return "Specific";
    case Verdict::Generic: return "Generic";
    case Verdict::NoOverlap: return "NoOverlap";
    }
    return "?";
}

Explanation explain_match(const KnowledgeGraph& kg, const SpecificityTable& specificity, std::string_view job_a,
                          std::string_view job_b, double predicted_str, const ExplainOptions& options)
{
    const auto& a = require_job(kg, job_a);
    const auto& b = require_job(kg, job_b);
    Explanation ex;
    ex.job_a = {a.id, a.label};
    ex.job_b = {b.id, b.label};
    ex.predicted_str = predicted_str;

    const auto skills_a = kg.skills_of(a.id);
    const auto skills_b = kg.skills_of(b.id);
    for (const auto& [skill, wa] : skills_a) {
        auto it = skills_b.find(skill);
        if (it == skills_b.end()) continue;
        auto sp = specificity.find(skill);
        if (sp == specificity.end()) throw DataError("no specificity for skill '" + skill + "'");
        ex.shared_skills.push_back({skill, kg.node(skill).label, sp->second, wa, it->second});
    }
    std::sort(ex.shared_skills.begin(), ex.shared_skills.end(), [](const SharedSkill& x, const SharedSkill& y) {
        if (x.specificity != y.specificity) return x.specificity > y.specificity;
        return x.id < y.id;
    });

    if (ex.shared_skills.empty()) {
        ex.verdict = Verdict::NoOverlap;
    } else {
        ex.verdict = ex.shared_skills.front().specificity >= options.verdict_threshold ? Verdict::Specific
                                                                                       : Verdict::Generic;
    }

    if (options.hops >= 2) {
        std::set<std::tuple<std::string, std::string, std::string>> links;
        for (const auto& [sa, wa] : skills_a) {
            if (skills_b.contains(sa)) continue;
            const auto pa = kg.parents_of(sa);
            for (const auto& [sb, wb] : skills_b) {
                if (skills_a.contains(sb)) continue;
                const auto pb = kg.parents_of(sb);
                if (std::find(pa.begin(), pa.end(), sb) != pa.end() || std::find(pb.begin(), pb.end(), sa) != pb.end()) {
                    links.emplace(sa, sb, "");
                }
                for (const auto& p : pa) {
                    if (std::find(pb.begin(), pb.end(), p) != pb.end()) links.emplace(sa, sb, p);
                }
            }
        }
        for (const auto& [sa, sb, via] : links) ex.hierarchy_links.push_back({sa, sb, via});
    }
    return ex;
}

std::string render_dot(const Explanation& ex)
{
    std::ostringstream out;
    out << "graph explanation {\n";
    out << "  label=" << dot_quote("STR " + format_fixed(ex.predicted_str, 2) + " - " +
                                   std::string(verdict_name(ex.verdict)))
        << ";\n";

    // nodes in sorted id order
    std::set<std::pair<std::string, std::string>> nodes; // id -> attribute text
    nodes.emplace(ex.job_a.id, "label=" + dot_quote(ex.job_a.title) + ", shape=box");
    nodes.emplace(ex.job_b.id, "label=" + dot_quote(ex.job_b.title) + ", shape=box");
    for (const auto& s : ex.shared_skills) {
        nodes.emplace(s.id, "label=" + dot_quote(s.label + " (" + format_fixed(s.specificity, 2) + ")") +
                                ", shape=ellipse");
    }
    std::set<std::string> extra;
    for (const auto& l : ex.hierarchy_links) {
        extra.insert(l.skill_a);
        extra.insert(l.skill_b);
        if (!l.via.empty()) extra.insert(l.via);
    }
    for (const auto& id : extra) nodes.emplace(id, "label=" + dot_quote(id) + ", shape=ellipse, style=dashed");
    std::set<std::string> emitted;
    for (const auto& [id, attrs] : nodes) {
        if (!emitted.insert(id).second) continue;
        out << "  " << dot_quote(id) << " [" << attrs << "];\n";
    }
    for (const auto& s : ex.shared_skills) {
        out << "  " << dot_quote(ex.job_a.id) << " -- " << dot_quote(s.id)
            << " [label=" << dot_quote(format_fixed(s.weight_a, 2)) << "];\n";
        out << "  " << dot_quote(ex.job_b.id) << " -- " << dot_quote(s.id)
            << " [label=" << dot_quote(format_fixed(s.weight_b, 2)) << "];\n";
    }
    for (const auto& l : ex.hierarchy_links) {
        if (l.via.empty()) {
            out << "  " << dot_quote(l.skill_a) << " -- " << dot_quote(l.skill_b) << " [style=dashed];\n";
        } else {
            out << "  " << dot_quote(l.skill_a) << " -- " << dot_quote(l.via) << " [style=dashed];\n";
            out << "  " << dot_quote(l.skill_b) << " -- " << dot_quote(l.via) << " [style=dashed];\n";
        }
    }
    out << "}\n";
    return out.str();
}

std::string render_json(const Explanation& ex)
{
    // hand-written so predicted_str keeps exactly six decimals; keys sorted
    auto job = [](const ExplainedJob& j) {
        return "{\"id\": " + json_string(j.id) + ", \"title\": " + json_string(j.title) + "}";
    };
    std::ostringstream out;
    out << "{\n";
    out << "  \"hierarchy_links\": [";
    for (std::size_t i = 0; i < ex.hierarchy_links.size(); ++i) {
        const auto& l = ex.hierarchy_links[i];
        out << (i ? ",\n    " : "\n    ") << "{\"skill_a\": " << json_string(l.skill_a)
            << ", \"skill_b\": " << json_string(l.skill_b) << ", \"via\": " << json_string(l.via) << "}";
    }
    out << (ex.hierarchy_links.empty() ? "],\n" : "\n  ],\n");
    out << "  \"job_a\": " << job(ex.job_a) << ",\n";
    out << "  \"job_b\": " << job(ex.job_b) << ",\n";
    out << "  \"predicted_str\": " << format_fixed(ex.predicted_str, 6) << ",\n";
    out << "  \"shared_skills\": [";
    for (std::size_t i = 0; i < ex.shared_skills.size(); ++i) {
        const auto& s = ex.shared_skills[i];
        out << (i ? ",\n    " : "\n    ") << "{\"id\": " << json_string(s.id) << ", \"label\": " << json_string(s.label)
            << ", \"specificity\": " << format_double(s.specificity) << ", \"weight_a\": " << format_double(s.weight_a)
            << ", \"weight_b\": " << format_double(s.weight_b) << "}";
    }
    out << (ex.shared_skills.empty() ? "],\n" : "\n  ],\n");
    out << "  \"verdict\": " << json_string(verdict_name(ex.verdict)) << "\n";
    out << "}\n";
    return out.str();
}

Explanation explanation_from_json(std::string_view text)
{
    using nlohmann::json;
    Explanation ex;
    try {
        const auto j = json::parse(text);
        ex.job_a = {j.at("job_a").at("id").get<std::string>(), j.at("job_a").at("title").get<std::string>()};
        ex.job_b = {j.at("job_b").at("id").get<std::string>(), j.at("job_b").at("title").get<std::string>()};
        ex.predicted_str = j.at("predicted_str").get<double>();
        for (const auto& s : j.at("shared_skills")) {
            ex.shared_skills.push_back({s.at("id").get<std::string>(), s.at("label").get<std::string>(),
                                        s.at("specificity").get<double>(), s.at("weight_a").get<double>(),
                                        s.at("weight_b").get<double>()});
        }
        for (const auto& l : j.at("hierarchy_links")) {
            ex.hierarchy_links.push_back({l.at("skill_a").get<std::string>(), l.at("skill_b").get<std::string>(),
                                          l.at("via").get<std::string>()});
        }
        const auto v = j.at("verdict").get<std::string>();
        if (v == "Specific") {
            ex.verdict = Verdict::Specific;
        } else if (v == "Generic") {
            ex.verdict = Verdict::Generic;
        } else if (v == "NoOverlap") {
            ex.verdict = Verdict::NoOverlap;
        } else {
            throw DataError("unknown verdict '" + v + "'");
        }
    } catch (const json::exception& e) {
        throw DataError(std::string("explanation json: ") + e.what());
    }
    return ex;
}

std::string render_text(const Explanation& ex)
{
    std::ostringstream out;
    out << ex.job_a.title << "  <->  " << ex.job_b.title << "\n";
    out << "predicted STR " << format_fixed(ex.predicted_str, 4) << "   verdict " << verdict_name(ex.verdict) << "\n";
    if (ex.shared_skills.empty()) {
        out << "no shared skills\n";
    } else {
        out << "specificity  weight_a  weight_b  skill\n";
        for (const auto& s : ex.shared_skills) {
            out << "       " << format_fixed(s.specificity, 2) << "      " << format_fixed(s.weight_a, 2) << "      "
                << format_fixed(s.weight_b, 2) << "  " << s.label << "\n";
        }
    }
    for (const auto& l : ex.hierarchy_links) {
        out << "related: " << l.skill_a << " ~ " << l.skill_b;
        if (!l.via.empty()) out << " via " << l.via;
        out << "\n";
    }
    return out.str();
}

} // namespace jobrel
