#include "jobrel/config.hpp"

#include "jobrel/csv.hpp"
#include "jobrel/error.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <type_traits>
#include <vector>

namespace jobrel {

namespace {

using nlohmann::json;

// One description of the config layout drives both directions.
template <typename Visitor, typename Config>
void visit_config(Visitor& v, Config& c)
{
    v.field("seed", c.seed);
    v.field("summary_sentences", c.summary_sentences);
    v.section("paths", [&] {
        auto& p = c.paths;
        v.field("jobs", p.jobs);
        v.field("skills", p.skills);
        v.field("hierarchy", p.hierarchy);
        v.field("summaries", p.summaries);
        v.field("job_embeddings", p.job_embeddings);
        v.field("skill_embeddings", p.skill_embeddings);
        v.field("title_embeddings", p.title_embeddings);
        v.field("all_pairs", p.all_pairs);
        v.field("train_pairs", p.train_pairs);
        v.field("eval_pairs", p.eval_pairs);
        v.field("title_ids", p.title_ids);
        v.field("split", p.split);
        v.field("graph", p.graph);
        v.field("specificity", p.specificity);
        v.field("graph_embeddings", p.graph_embeddings);
        v.field("graph_model", p.graph_model);
        v.field("graph_log", p.graph_log);
        v.field("alignment_model", p.alignment_model);
        v.field("align_log", p.align_log);
        v.field("eval_dir", p.eval_dir);
        v.field("explain_dir", p.explain_dir);
        v.field("manifest", p.manifest);
    });
    v.section("embedder", [&] {
        v.field("dimension", c.embedder.dimension);
        v.field("ngram_size", c.embedder.ngram_size);
        v.field("seed", c.embedder.seed);
    });
    v.section("regions", [&] {
        v.field("low_upper", c.regions.low_upper);
        v.field("medium_upper", c.regions.medium_upper);
    });
    v.section("pairs", [&] {
        v.field("per_anchor_cap", c.pairs.per_anchor_cap);
        v.field("eval_fraction", c.pairs.eval_fraction);
        v.field("quota_low", c.pairs.quota.low);
        v.field("quota_medium", c.pairs.quota.medium);
        v.field("quota_high", c.pairs.quota.high);
    });
    v.section("kg", [&] {
        v.field("skills_per_job", c.kg.skills_per_job);
        v.field("job_skill_threshold", c.kg.job_skill_threshold);
        v.field("skill_skill_threshold", c.kg.skill_skill_threshold);
        v.field("generic_share", c.kg.generic_share);
    });
    v.section("graph", [&] {
        v.field("num_layers", c.graph_model.num_layers);
        v.field("base_dim", c.graph_model.base_dim);
        v.field("hidden_dim", c.graph_model.hidden_dim);
        v.field("output_dim", c.graph_model.output_dim);
        v.field("epochs", c.graph_train.epochs);
        v.field("learning_rate", c.graph_train.learning_rate);
        v.field("negatives_per_positive", c.graph_train.negatives_per_positive);
    });
    v.section("align", [&] {
        v.field("epochs", c.align.epochs);
        v.field("learning_rate", c.align.learning_rate);
        v.field("batch_size", c.align.batch_size);
        v.field("patience", c.align.patience);
        v.field("hidden_dim", c.align.hidden_dim);
        v.field("validation_fraction", c.align.validation_fraction);
    });
    v.section("explain", [&] {
        v.field("verdict_threshold", c.explain.verdict_threshold);
        v.field("hops", c.explain.hops);
    });
}

struct Writer {
    json root = json::object();
    json* current = &root;

    template <typename T>
    void field(const char* name, const T& value) { (*current)[name] = value; }

    void section(const char* name, const std::function<void()>& body)
    {
        json* outer = current;
        (*outer)[name] = json::object();
        current = &(*outer)[name];
        body();
        current = outer;
    }
};

struct Reader {
    const json* current = nullptr;
    std::string prefix;
    std::vector<std::string> errors;
    std::set<std::string> known;

    template <typename T>
    void field(const char* name, T& value)
    {
        const std::string path = prefix + name;
        known.insert(path);
        if (!current || !current->contains(name)) return;
        const json& j = current->at(name);
        if constexpr (std::is_same_v<T, std::string>) {
            if (!j.is_string()) return errors.push_back(path + ": expected a string");
            value = j.get<std::string>();
        } else if constexpr (std::is_integral_v<T>) {
            if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0)) {
                return errors.push_back(path + ": expected a non-negative integer");
            }
            value = j.get<T>();
        } else {
            if (!j.is_number()) return errors.push_back(path + ": expected a number");
            value = j.get<T>();
        }
    }

    void section(const char* name, const std::function<void()>& body)
    {
        const std::string path = prefix + name;
        known.insert(path);
        const json* outer = current;
        const std::string outer_prefix = prefix;
        const json* inner = nullptr;
        if (outer && outer->contains(name)) {
            inner = &outer->at(name);
            if (!inner->is_object()) {
                errors.push_back(path + ": expected an object");
                inner = nullptr;
            }
        }
        current = inner;
        prefix = path + ".";
        body();
        current = outer;
        prefix = outer_prefix;
    }
};

void collect_unknown(const json& j, const std::string& prefix, const std::set<std::string>& known,
                     std::vector<std::string>& errors)
{
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string path = prefix + it.key();
        if (!known.count(path)) {
            errors.push_back(path + ": unknown key");
        } else if (it->is_object()) {
            collect_unknown(*it, path + ".", known, errors);
        }
    }
}

std::string join_errors(const std::vector<std::string>& errors)
{
    std::string msg = "invalid config:";
    for (const auto& e : errors) msg += "\n  " + e;
    return msg;
}

} // namespace

void PipelineConfig::validate() const
{
    const auto errors = range_errors();
    if (!errors.empty()) throw UsageError(join_errors(errors));
}

std::vector<std::string> PipelineConfig::range_errors() const
{
    std::vector<std::string> errors;
    auto unit = [&](const char* name, double v) {
        if (!(v >= 0.0 && v <= 1.0)) errors.push_back(std::string(name) + ": must lie in [0, 1]");
    };
    auto open_unit = [&](const char* name, double v) {
        if (!(v > 0.0 && v < 1.0)) errors.push_back(std::string(name) + ": must lie in (0, 1)");
    };
    auto at_least = [&](const char* name, std::size_t v, std::size_t lo) {
        if (v < lo) errors.push_back(std::string(name) + ": must be >= " + std::to_string(lo));
    };
    auto positive = [&](const char* name, double v) {
        if (!(v > 0.0)) errors.push_back(std::string(name) + ": must be > 0");
    };

    at_least("summary_sentences", summary_sentences, 1);
    at_least("embedder.dimension", embedder.dimension, 1);
    at_least("embedder.ngram_size", embedder.ngram_size, 1);
    unit("regions.low_upper", regions.low_upper);
    unit("regions.medium_upper", regions.medium_upper);
    if (!(regions.low_upper > 0.0 && regions.low_upper < regions.medium_upper && regions.medium_upper < 1.0)) {
        errors.push_back("regions: need 0 < low_upper < medium_upper < 1");
    }
    at_least("pairs.per_anchor_cap", pairs.per_anchor_cap, 1);
    open_unit("pairs.eval_fraction", pairs.eval_fraction);
    at_least("pairs.quota_low", pairs.quota.low, 1);
    at_least("pairs.quota_medium", pairs.quota.medium, 1);
    at_least("pairs.quota_high", pairs.quota.high, 1);
    at_least("kg.skills_per_job", kg.skills_per_job, 1);
    unit("kg.job_skill_threshold", kg.job_skill_threshold);
    unit("kg.skill_skill_threshold", kg.skill_skill_threshold);
    if (!(kg.generic_share > 0.0 && kg.generic_share <= 1.0)) errors.push_back("kg.generic_share: must lie in (0, 1]");
    at_least("graph.num_layers", graph_model.num_layers, 1);
    at_least("graph.base_dim", graph_model.base_dim, 1);
    at_least("graph.hidden_dim", graph_model.hidden_dim, 1);
    at_least("graph.output_dim", graph_model.output_dim, 1);
    at_least("graph.epochs", graph_train.epochs, 1);
    positive("graph.learning_rate", graph_train.learning_rate);
    at_least("align.epochs", align.epochs, 1);
    positive("align.learning_rate", align.learning_rate);
    at_least("align.batch_size", align.batch_size, 1);
    at_least("align.hidden_dim", align.hidden_dim, 1);
    if (!(align.validation_fraction >= 0.0 && align.validation_fraction < 1.0)) {
        errors.push_back("align.validation_fraction: must lie in [0, 1)");
    }
    unit("explain.verdict_threshold", explain.verdict_threshold);
    if (explain.hops < 1 || explain.hops > 2) errors.push_back("explain.hops: must be 1 or 2");
    return errors;
}

std::string config_to_json(const PipelineConfig& config)
{
    Writer w;
    visit_config(w, config);
    return w.root.dump(2) + "\n";
}

PipelineConfig config_from_json(std::string_view text)
{
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw UsageError(std::string("invalid config: not JSON: ") + e.what());
    }
    if (!root.is_object()) throw UsageError("invalid config: top level must be an object");

    PipelineConfig config;
    Reader r;
    r.current = &root;
    visit_config(r, config);
    collect_unknown(root, "", r.known, r.errors);
    auto range_errors = config.range_errors();
    r.errors.insert(r.errors.end(), range_errors.begin(), range_errors.end());
    if (!r.errors.empty()) throw UsageError(join_errors(r.errors));
    return config;
}

PipelineConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read config file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return config_from_json(buf.str());
}

void save_config(const PipelineConfig& config, const std::filesystem::path& path)
{
    csv::write_text(path, config_to_json(config));
}

} // namespace jobrel
