#include "jobrel/synthetic.hpp"

#include "jobrel/error.hpp"
#include "jobrel/random.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdio>
#include <string>
#include <vector>

namespace jobrel {

namespace {

struct Family {
    const char* category;
    std::array<const char*, 3> roles;
    std::array<const char*, 6> skills;
};

// clang-format off
constexpr std::array<Family, 20> kFamilies{{
    {"Data Science", {"Data Scientist", "Machine Learning Engineer", "Data Analyst"},
     {"build machine learning models", "perform statistical analysis", "clean and prepare datasets",
      "visualise data insights", "deploy predictive pipelines", "design controlled experiments"}},
    {"Software Engineering", {"Software Engineer", "Backend Developer", "Frontend Developer"},
     {"write maintainable source code", "design software architecture", "review pull requests",
      "debug production incidents", "automate unit testing", "build web interfaces"}},
    {"Sales", {"Sales Manager", "Account Executive", "Sales Representative"},
     {"negotiate sales contracts", "prospect new clients", "manage sales pipeline",
      "forecast quarterly revenue", "deliver product demonstrations", "close enterprise deals"}},
    {"Marketing", {"Marketing Manager", "Brand Strategist", "Marketing Specialist"},
     {"supervise brand management", "plan advertising campaigns", "analyse market research",
      "manage social media channels", "optimise search engine rankings", "write marketing copy"}},
    {"Finance", {"Financial Analyst", "Accountant", "Finance Controller"},
     {"prepare financial statements", "reconcile general ledger accounts", "build budget forecasts",
      "audit expense reports", "manage accounts payable", "calculate tax obligations"}},
    {"Human Resources", {"HR Manager", "Recruiter", "HR Generalist"},
     {"recruit new employees", "conduct job interviews", "administer payroll benefits",
      "manage employee relations", "design onboarding programmes", "enforce labour policies"}},
    {"Healthcare", {"Registered Nurse", "Nurse Practitioner", "Clinical Nurse"},
     {"administer patient medication", "monitor vital signs", "maintain patient records",
      "assist medical procedures", "educate patients on treatment", "triage emergency cases"}},
    {"Education", {"Teacher", "Lecturer", "Tutor"},
     {"prepare lesson plans", "grade student assignments", "deliver classroom lectures",
      "mentor individual students", "design course curricula", "assess learning outcomes"}},
    {"Logistics", {"Logistics Coordinator", "Warehouse Manager", "Supply Chain Analyst"},
     {"coordinate freight shipments", "manage warehouse inventory", "optimise delivery routes",
      "negotiate carrier rates", "track supply chain performance", "schedule stock replenishment"}},
    {"Project Management", {"Project Manager", "Program Manager", "Project Coordinator"},
     {"plan project milestones", "manage project budgets", "coordinate cross functional teams",
      "track project risks", "report status to stakeholders", "allocate project resources"}},
    {"Customer Service", {"Customer Service Representative", "Support Specialist", "Call Centre Agent"},
     {"handle customer complaints", "answer inbound calls", "process product returns",
      "resolve billing enquiries", "log support tickets", "escalate service issues"}},
    {"Legal", {"Lawyer", "Paralegal", "Legal Counsel"},
     {"draft legal contracts", "conduct legal research", "represent clients in court",
      "advise on regulatory compliance", "review litigation documents", "negotiate legal settlements"}},
    {"Design", {"Graphic Designer", "UX Designer", "Art Director"},
     {"create visual brand assets", "design user interfaces", "produce digital illustrations",
      "conduct usability testing", "prepare print layouts", "build interactive prototypes"}},
    {"Construction", {"Construction Manager", "Site Engineer", "Civil Engineer"},
     {"supervise construction sites", "read architectural blueprints", "inspect structural safety",
      "estimate building materials", "manage subcontractor crews", "survey land parcels"}},
    {"Hospitality", {"Chef", "Restaurant Manager", "Sous Chef"},
     {"prepare gourmet meals", "plan restaurant menus", "manage kitchen hygiene",
      "order fresh ingredients", "train kitchen staff", "control food costs"}},
    {"IT Operations", {"Systems Administrator", "Network Engineer", "DevOps Engineer"},
     {"configure network routers", "maintain server infrastructure", "automate cloud deployments",
      "monitor system uptime", "manage user access rights", "patch operating systems"}},
    {"Cybersecurity", {"Security Analyst", "Penetration Tester", "Security Engineer"},
     {"detect security intrusions", "perform penetration tests", "manage firewall rules",
      "investigate cyber incidents", "assess vulnerability risks", "encrypt sensitive data"}},
    {"Administration", {"Executive Assistant", "Office Manager", "Administrative Assistant"},
     {"manage executive calendars", "organise business travel", "prepare meeting minutes",
      "maintain office supplies", "handle incoming correspondence", "coordinate office events"}},
    {"Manufacturing", {"Production Supervisor", "Quality Engineer", "Machine Operator"},
     {"operate production machinery", "inspect product quality", "maintain assembly lines",
      "implement lean manufacturing", "calibrate measuring instruments", "reduce production defects"}},
    {"Retail", {"Store Manager", "Retail Associate", "Merchandiser"},
     {"arrange product displays", "operate cash registers", "manage store inventory",
      "train retail staff", "monitor store sales", "prevent retail shrinkage"}},
}};

constexpr std::array<const char*, 20> kGeneric{
    "communicate with colleagues", "supervise office workers", "use microsoft office", "manage time effectively",
    "work in a team", "follow health and safety rules", "solve problems creatively", "write clear reports",
    "attend team meetings", "maintain professional conduct", "adapt to change", "demonstrate attention to detail",
    "speak english fluently", "use email systems", "meet tight deadlines", "show leadership initiative",
    "organise daily tasks", "handle confidential information", "provide excellent service", "learn new technologies"};

constexpr std::array<const char*, 8> kSeniority{
    "Junior", "Senior", "Lead", "Principal", "Associate", "Staff", "Trainee", "Regional"};

constexpr std::array<const char*, 8> kBoilerplate{
    "We offer a competitive salary and flexible hours.",
    "Apply today to join our growing team.",
    "Our company values diversity and inclusion.",
    "Benefits include health insurance and a pension plan.",
    "This is a full time permanent position.",
    "Remote working is available two days per week.",
    "Successful candidates will be contacted within two weeks.",
    "We are an equal opportunity employer."};
// clang-format on

// share of the generic slot taken by each generic skill: two dominant
// skills, the rest spread thinly
constexpr double kGenericSlot = 0.6;
constexpr double kTopGeneric = 0.5;
constexpr double kSecondGeneric = 0.25;

std::string sentence(std::string_view phrase)
{
    std::string s(phrase);
    if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
    return s + ".";
}

std::string make_id(char prefix, std::size_t n)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%c%04zu", prefix, n);
    return buf;
}

} // namespace

Corpus generate_corpus(const SyntheticCorpusConfig& config)
{
    const std::size_t families = kFamilies.size();
    const std::size_t max_skills = families + kGeneric.size() + families * kFamilies[0].skills.size();
    if (config.jobs < 2) throw UsageError("gen-corpus: at least 2 jobs required");
    if (config.skills < families + kGeneric.size() + families || config.skills > max_skills) {
        throw UsageError("gen-corpus: skills must lie in [" + std::to_string(families * 2 + kGeneric.size()) + ", " +
                         std::to_string(max_skills) + "]");
    }

    Corpus corpus;
    std::vector<std::string> category_id(families);
    std::vector<std::string> generic_id(kGeneric.size());
    std::vector<std::vector<std::size_t>> family_skill_slots(families); // indices into kFamilies[f].skills
    std::vector<std::vector<std::string>> family_skill_id(families);

    std::size_t next_skill = 1;
    const std::size_t per_family_total = config.skills - families - kGeneric.size();
    for (std::size_t k = 0; k < per_family_total; ++k) family_skill_slots[k % families].push_back(k / families);

    for (std::size_t f = 0; f < families; ++f) {
        category_id[f] = make_id('s', next_skill++);
        std::string desc = "Includes ";
        for (std::size_t i = 0; i < family_skill_slots[f].size(); ++i) {
            if (i) desc += ", ";
            desc += kFamilies[f].skills[family_skill_slots[f][i]];
        }
        corpus.skills.push_back({category_id[f], kFamilies[f].category, desc + ".", true});
    }
    for (std::size_t g = 0; g < kGeneric.size(); ++g) {
        generic_id[g] = make_id('s', next_skill++);
        corpus.skills.push_back({generic_id[g], kGeneric[g], "", false});
    }
    for (std::size_t f = 0; f < families; ++f) {
        for (auto slot : family_skill_slots[f]) {
            family_skill_id[f].push_back(make_id('s', next_skill++));
            corpus.skills.push_back({family_skill_id[f].back(), kFamilies[f].skills[slot], "", false});
            corpus.hierarchy.push_back({family_skill_id[f].back(), category_id[f]});
        }
    }

    // titles: per family, a seeded permutation of role x seniority
    Rng rng(config.seed, "gen-corpus");
    std::vector<std::vector<std::string>> titles(families);
    for (std::size_t f = 0; f < families; ++f) {
        for (const char* level : kSeniority) {
            for (const char* role : kFamilies[f].roles) titles[f].push_back(std::string(level) + " " + role);
        }
        rng.shuffle(titles[f]);
    }

    auto pick_generic = [&]() -> std::size_t {
        const double u = rng.uniform();
        if (u < kTopGeneric) return 0;
        if (u < kTopGeneric + kSecondGeneric) return 1;
        return 2 + static_cast<std::size_t>(rng.below(kGeneric.size() - 2));
    };

    std::vector<std::size_t> used(families, 0);
    for (std::size_t j = 0; j < config.jobs; ++j) {
        const std::size_t f = j % families;
        const auto& pool = family_skill_slots[f];
        JobRecord job;
        job.id = make_id('j', j + 1);
        job.title = titles[f][used[f]++ % titles[f].size()];

        const auto chosen = rng.sample_indices(pool.size(), std::min<std::size_t>(3, pool.size()));
        std::vector<std::string> sentences;
        for (auto c : chosen) sentences.push_back(sentence(kFamilies[f].skills[pool[c]]));
        rng.shuffle(sentences);
        if (sentences.size() >= 3 && rng.uniform() < kGenericSlot) sentences.back() = sentence(kGeneric[pick_generic()]);
        const auto extra = rng.sample_indices(kBoilerplate.size(), 2);
        for (auto e : extra) sentences.push_back(kBoilerplate[e]);

        for (std::size_t i = 0; i < sentences.size(); ++i) {
            if (i) job.description += " ";
            job.description += sentences[i];
        }
        corpus.jobs.push_back(std::move(job));
    }
    return corpus;
}

} // namespace jobrel
