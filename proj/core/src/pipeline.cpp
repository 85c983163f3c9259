#include "jobrel/pipeline.hpp"

#include "jobrel/align.hpp"
#include "jobrel/csv.hpp"
#include "jobrel/error.hpp"
#include "jobrel/graphembed.hpp"
#include "jobrel/kg.hpp"
#include "jobrel/pairs.hpp"
#include "jobrel/random.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdio>
#include <map>
#include <memory>
#include <unordered_map>
#include <unordered_set>

namespace jobrel {

namespace fs = std::filesystem;

std::string sha256_hex(std::string_view bytes)
{
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1) {
        throw Error("sha256 failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xf];
    }
    return out;
}

std::string sha256_file(const fs::path& path)
{
    return sha256_hex(csv::read_text(path));
}

namespace {

std::string join_files(const std::vector<std::pair<std::string, std::string>>& files)
{
    std::string out;
    for (const auto& [name, hash] : files) {
        if (!out.empty()) out += ';';
        out += name + "=" + hash;
    }
    return out.empty() ? "-" : out;
}

std::vector<std::pair<std::string, std::string>> split_files(std::string_view text, std::size_t line)
{
    std::vector<std::pair<std::string, std::string>> files;
    if (text == "-") return files;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find(';', start);
        if (end == std::string_view::npos) end = text.size();
        const auto item = text.substr(start, end - start);
        const auto eq = item.rfind('=');
        if (eq == std::string_view::npos) {
            throw DataError("manifest line " + std::to_string(line) + ": malformed file entry");
        }
        files.emplace_back(std::string(item.substr(0, eq)), std::string(item.substr(eq + 1)));
        start = end + 1;
    }
    return files;
}

std::size_t stage_rank(std::string_view stage)
{
    auto it = std::find(kStages.begin(), kStages.end(), stage);
    return static_cast<std::size_t>(it - kStages.begin());
}

std::string skill_text(const SkillRecord& s)
{
    return s.description.empty() ? s.name : s.name + ". " + s.description;
}

std::string model_slug(std::string_view model)
{
    std::string out;
    for (char c : model) {
        if (std::isalnum(static_cast<unsigned char>(c))) {
            out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        } else if (!out.empty() && out.back() != '_') {
            out += '_';
        }
    }
    return out;
}

std::vector<STRPair> to_id_pairs(const std::vector<TitlePair>& rows)
{
    std::vector<STRPair> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back({r.anchor, r.sample, r.score});
    return out;
}

std::vector<TitlePair> as_rows(const std::vector<STRPair>& pairs)
{
    std::vector<TitlePair> out;
    out.reserve(pairs.size());
    for (const auto& p : pairs) out.push_back({p.anchor_id, p.sample_id, p.score});
    return out;
}

constexpr std::string_view kModelReference = "REF";
constexpr std::string_view kModelAligned = "REF+RGCN";
constexpr std::string_view kModelUntrained = "REF+RGCN-INIT";
constexpr std::size_t kExplainSample = 10;

} // namespace

std::string format_manifest(const std::vector<ManifestEntry>& entries)
{
    std::string out = "stage\tinputs\tseed\toutputs\n";
    for (const auto& e : entries) {
        out += e.stage + "\t" + join_files(e.inputs) + "\t" + std::to_string(e.seed) + "\t" + join_files(e.outputs) +
               "\n";
    }
    return out;
}

std::vector<ManifestEntry> parse_manifest(std::string_view text)
{
    std::vector<ManifestEntry> entries;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        const auto line = text.substr(start, end - start);
        start = end + 1;
        if (++line_no == 1 || line.empty()) continue;
        std::vector<std::string_view> cols;
        std::size_t c = 0;
        while (true) {
            auto tab = line.find('\t', c);
            cols.push_back(line.substr(c, tab == std::string_view::npos ? std::string_view::npos : tab - c));
            if (tab == std::string_view::npos) break;
            c = tab + 1;
        }
        if (cols.size() != 4) throw DataError("manifest line " + std::to_string(line_no) + ": expected 4 columns");
        ManifestEntry e;
        e.stage = std::string(cols[0]);
        e.inputs = split_files(cols[1], line_no);
        try {
            e.seed = std::stoull(std::string(cols[2]));
        } catch (const std::exception&) {
            throw DataError("manifest line " + std::to_string(line_no) + ": bad seed");
        }
        e.outputs = split_files(cols[3], line_no);
        entries.push_back(std::move(e));
    }
    return entries;
}

void write_corpus(const Corpus& corpus, const fs::path& out_dir, const PipelinePaths& paths)
{
    csv::write_text(out_dir / paths.jobs, format_jobs(corpus.jobs));
    csv::write_text(out_dir / paths.skills, format_skills(corpus.skills));
    csv::write_text(out_dir / paths.hierarchy, format_hierarchy(corpus.hierarchy));
}

Pipeline::Pipeline(PipelineConfig config, fs::path out_dir) : config_(std::move(config)), out_dir_(std::move(out_dir))
{
    config_.validate();
}

std::uint64_t Pipeline::stage_seed(std::string_view stage) const
{
    return derive_seed(config_.seed, std::string("stage/") + std::string(stage));
}

fs::path Pipeline::path(std::string_view relative) const
{
    return out_dir_ / fs::path(std::string(relative));
}

fs::path Pipeline::require(std::string_view relative, std::string_view producer) const
{
    auto p = path(relative);
    if (!fs::exists(p)) throw MissingArtifactError(std::string(relative), std::string(producer));
    return p;
}

std::vector<ManifestEntry> Pipeline::manifest() const
{
    const auto p = path(config_.paths.manifest);
    if (!fs::exists(p)) return {};
    return parse_manifest(csv::read_text(p));
}

void Pipeline::record(std::string_view stage, const std::vector<std::string>& inputs, std::uint64_t seed,
                      const std::vector<std::string>& outputs) const
{
    ManifestEntry entry;
    entry.stage = std::string(stage);
    entry.seed = seed;
    for (const auto& in : inputs) entry.inputs.emplace_back(in, sha256_file(path(in)));
    for (const auto& out : outputs) entry.outputs.emplace_back(out, sha256_file(path(out)));

    auto entries = manifest();
    std::erase_if(entries, [&](const ManifestEntry& e) { return e.stage == stage; });
    entries.push_back(std::move(entry));
    std::stable_sort(entries.begin(), entries.end(), [](const ManifestEntry& a, const ManifestEntry& b) {
        return stage_rank(a.stage) < stage_rank(b.stage);
    });
    csv::write_text(path(config_.paths.manifest), format_manifest(entries));
}

std::vector<JobRecord> Pipeline::load_jobs_with_summaries() const
{
    return load_jobs(require(config_.paths.summaries, "summarize"));
}

StageResult Pipeline::summarize()
{
    const auto& p = config_.paths;
    auto jobs = load_jobs(require(p.jobs, "gen-corpus"));
    std::size_t computed = 0;
    for (auto& job : jobs) {
        if (!job.summary) {
            job.summary = jobrel::summarize(job, config_.summary_sentences);
            ++computed;
        }
    }
    csv::write_text(path(p.summaries), format_jobs(jobs));
    record("summarize", {p.jobs}, 0, {p.summaries});
    return {"summarize", {p.summaries},
            std::to_string(jobs.size()) + " jobs, " + std::to_string(computed) + " summaries computed"};
}

StageResult Pipeline::embed()
{
    const auto& p = config_.paths;
    const auto jobs = load_jobs_with_summaries();
    const auto skills = load_skills(require(p.skills, "gen-corpus"));
    const ReferenceEmbedder encoder(config_.embedder);

    std::vector<std::string> ids, summaries, titles;
    for (const auto& j : jobs) {
        ids.push_back(j.id);
        summaries.push_back(j.summary.value_or(j.title));
        titles.push_back(j.title);
    }
    std::vector<std::string> skill_ids, skill_texts;
    for (const auto& s : skills) {
        skill_ids.push_back(s.id);
        skill_texts.push_back(skill_text(s));
    }
    save_store(encode_all(encoder, ids, summaries), path(p.job_embeddings));
    save_store(encode_all(encoder, ids, titles), path(p.title_embeddings));
    save_store(encode_all(encoder, skill_ids, skill_texts), path(p.skill_embeddings));

    const std::vector<std::string> outputs{p.job_embeddings, p.title_embeddings, p.skill_embeddings};
    record("embed", {p.summaries, p.skills}, config_.embedder.seed, outputs);
    return {"embed", outputs,
            std::to_string(jobs.size()) + " jobs and " + std::to_string(skills.size()) + " skills at dimension " +
                std::to_string(encoder.dimension())};
}

StageResult Pipeline::pairs()
{
    const auto& p = config_.paths;
    const auto jobs = load_jobs_with_summaries();
    const auto store = load_store(require(p.job_embeddings, "embed"));
    std::vector<std::string> ids;
    for (const auto& j : jobs) ids.push_back(j.id);

    const auto seed = stage_seed("pairs");
    const auto built = build_pairs(store, ids, {config_.pairs.per_anchor_cap, seed});
    csv::write_text(path(p.all_pairs), format_pairs(as_rows(built)));
    record("pairs", {p.summaries, p.job_embeddings}, seed, {p.all_pairs});
    return {"pairs", {p.all_pairs}, std::to_string(built.size()) + " pairs"};
}

StageResult Pipeline::split()
{
    const auto& p = config_.paths;
    const auto jobs = load_jobs_with_summaries();
    const auto all = to_id_pairs(read_pairs(require(p.all_pairs, "pairs")));

    const auto seed = stage_seed("split");
    const auto sides = split_disjoint(jobs, config_.pairs.eval_fraction, seed);
    const auto filtered = filter_pairs(all, sides);
    const auto train = stratify(filtered.train, config_.regions, config_.pairs.quota, derive_seed(seed, "train"));
    const auto eval = stratify(filtered.eval, config_.regions, config_.pairs.quota, derive_seed(seed, "eval"));

    write_pairs(to_title_pairs(train.pairs, jobs), path(p.train_pairs));
    write_pairs(to_title_pairs(eval.pairs, jobs), path(p.eval_pairs));

    std::vector<std::string> all_ids;
    for (const auto& j : jobs) all_ids.push_back(j.id);
    csv::write_text(path(p.title_ids), format_title_ids(jobs, all_ids));

    std::string side_csv = "id,side\n";
    for (const auto& id : sides.train_ids) side_csv += csv::escape(id) + ",train\n";
    for (const auto& id : sides.eval_ids) side_csv += csv::escape(id) + ",eval\n";
    csv::write_text(path(p.split), side_csv);

    const std::vector<std::string> outputs{p.train_pairs, p.eval_pairs, p.title_ids, p.split};
    record("split", {p.summaries, p.all_pairs}, seed, outputs);

    auto counts = [](const StratifiedPairs& s) {
        return std::to_string(s.counts[0]) + "/" + std::to_string(s.counts[1]) + "/" + std::to_string(s.counts[2]);
    };
    return {"split", outputs,
            "train " + std::to_string(train.pairs.size()) + " pairs (low/medium/high " + counts(train) + "), eval " +
                std::to_string(eval.pairs.size()) + " pairs (" + counts(eval) + "), " +
                std::to_string(filtered.dropped_cross) + " cross pairs dropped"};
}

StageResult Pipeline::kg_build()
{
    const auto& p = config_.paths;
    const auto jobs = load_jobs_with_summaries();
    const auto skills = load_skills(require(p.skills, "gen-corpus"));
    const auto hierarchy = load_hierarchy(require(p.hierarchy, "gen-corpus"), skills);
    const auto job_store = load_store(require(p.job_embeddings, "embed"));
    const auto skill_store = load_store(require(p.skill_embeddings, "embed"));

    std::map<std::string, std::vector<SkillMatch>> matches;
    for (const auto& j : jobs) {
        matches[j.id] = match_job_skills(job_store.at(j.id), skill_store, config_.kg.skills_per_job,
                                         config_.kg.job_skill_threshold);
    }
    const auto full = build_graph(jobs, skills, matches, hierarchy, skill_store, {config_.kg.skill_skill_threshold});
    const auto pruned = prune_generic(full, config_.kg.generic_share);
    const auto specificity = compute_specificity(pruned);

    save_graph(pruned, path(p.graph));
    csv::write_text(path(p.specificity), format_specificity(specificity, pruned));

    const std::vector<std::string> outputs{p.graph, p.specificity};
    record("kg build", {p.summaries, p.skills, p.hierarchy, p.job_embeddings, p.skill_embeddings}, 0, outputs);
    return {"kg build", outputs,
            std::to_string(pruned.skill_ids().size()) + " skills kept of " + std::to_string(full.skill_ids().size()) +
                ", " + std::to_string(pruned.edge_count()) + " edges"};
}

StageResult Pipeline::kg_embed()
{
    const auto& p = config_.paths;
    const auto kg = load_graph(require(p.graph, "kg build"));
    auto train = config_.graph_train;
    train.seed = stage_seed("kg embed");
    const auto result = train_graph(kg, config_.graph_model, train);

    save_store(result.embeddings, path(p.graph_embeddings));
    save_graph_model(result.model, path(p.graph_model));
    std::string log = "epoch,loss\n";
    for (std::size_t e = 0; e < result.epoch_losses.size(); ++e) {
        log += std::to_string(e + 1) + "," + format_double(result.epoch_losses[e]) + "\n";
    }
    csv::write_text(path(p.graph_log), log);

    const std::vector<std::string> outputs{p.graph_embeddings, p.graph_model, p.graph_log};
    record("kg embed", {p.graph}, train.seed, outputs);
    return {"kg embed", outputs,
            "loss " + format_fixed(result.initial_loss, 4) + " -> " + format_fixed(result.final_loss, 4)};
}

StageResult Pipeline::align_train()
{
    const auto& p = config_.paths;
    const auto titles = load_store(require(p.title_embeddings, "embed"));
    const auto graph = load_store(require(p.graph_embeddings, "kg embed"));
    const auto sides = csv::read_file(require(p.split, "split"));
    const auto id_col = sides.require_column("id", p.split);
    const auto side_col = sides.require_column("side", p.split);

    std::vector<AlignExample> examples;
    for (const auto& row : sides.rows) {
        if (row.fields.at(side_col) != "train") continue;
        const auto& id = row.fields.at(id_col);
        const auto node = job_node(id);
        if (!graph.contains(node) || !titles.contains(id)) continue;
        const auto in = titles.at(id);
        const auto out = graph.at(node);
        examples.push_back({EmbeddingVector(in.begin(), in.end()), EmbeddingVector(out.begin(), out.end())});
    }
    if (examples.empty()) throw DataError("align train: no training-split job has a graph embedding");

    auto cfg = config_.align;
    cfg.seed = stage_seed("align train");
    const auto result = train_alignment(examples, cfg);
    save_alignment(result.model, path(p.alignment_model));

    std::string log = "epoch,train_mse,validation_mse\n";
    log += "0,," + format_double(result.initial_validation_mse) + "\n";
    for (std::size_t e = 0; e < result.train_mse.size(); ++e) {
        log += std::to_string(e + 1) + "," + format_double(result.train_mse[e]) + "," +
               format_double(result.validation_mse[e]) + "\n";
    }
    csv::write_text(path(p.align_log), log);

    const std::vector<std::string> outputs{p.alignment_model, p.align_log};
    record("align train", {p.title_embeddings, p.graph_embeddings, p.split}, cfg.seed, outputs);
    return {"align train", outputs,
            std::to_string(result.train_size) + " train / " + std::to_string(result.validation_size) +
                " validation examples, validation MSE " + format_double(result.initial_validation_mse) + " -> " +
                format_double(result.best_validation_mse) + " (epoch " + std::to_string(result.best_epoch) + ")"};
}

StageResult Pipeline::eval()
{
    const auto& p = config_.paths;
    const auto rows = read_pairs(require(p.eval_pairs, "split"));
    const auto model = load_alignment(require(p.alignment_model, "align train"));
    const auto untrained =
        init_alignment(model.input_dim(), model.hidden_dim(), model.output_dim(), stage_seed("align train"));
    const ReferenceEmbedder encoder(config_.embedder);

    struct Views {
        EmbeddingVector text, aligned, initial;
    };
    std::unordered_map<std::string, Views> cache;
    auto views = [&](const std::string& title) -> const Views& {
        auto it = cache.find(title);
        if (it != cache.end()) return it->second;
        Views v;
        v.text = encoder.encode(title);
        v.aligned = map_text_to_graph(v.text, model);
        v.initial = map_text_to_graph(v.text, untrained);
        return cache.emplace(title, std::move(v)).first->second;
    };

    const std::array<std::string_view, 3> names{kModelReference, kModelAligned, kModelUntrained};
    std::array<std::vector<Prediction>, 3> predictions;
    for (const auto& row : rows) {
        const auto& a = views(row.anchor);
        const auto& b = views(row.sample);
        predictions[0].push_back(make_prediction(row, str_score(a.text, b.text), config_.regions));
        predictions[1].push_back(make_prediction(row, str_score(a.aligned, b.aligned), config_.regions));
        predictions[2].push_back(make_prediction(row, str_score(a.initial, b.initial), config_.regions));
    }

    std::vector<EvalReport> reports;
    std::vector<std::string> outputs;
    const fs::path dir(p.eval_dir);
    for (std::size_t m = 0; m < names.size(); ++m) {
        reports.push_back(build_report(std::string(names[m]), predictions[m], config_.regions));
        const auto slug = model_slug(names[m]);
        const auto report_file = (dir / ("report_" + slug + ".json")).generic_string();
        const auto box_file = (dir / ("boxplot_" + slug + ".csv")).generic_string();
        const auto pred_file = (dir / ("predictions_" + slug + ".csv")).generic_string();
        csv::write_text(path(report_file), report_to_json(reports.back()));
        csv::write_text(path(box_file), format_boxplot(reports.back()));
        csv::write_text(path(pred_file), format_predictions(predictions[m]));
        outputs.insert(outputs.end(), {report_file, box_file, pred_file});
    }
    const auto rmse_file = (dir / "rmse_by_region.csv").generic_string();
    const auto ttest_file = (dir / "ttests.csv").generic_string();
    const auto heat_file = (dir / "heatmap.csv").generic_string();
    csv::write_text(path(rmse_file), format_rmse_table(reports));
    csv::write_text(path(ttest_file), format_ttest_table(reports));
    csv::write_text(path(heat_file), format_heatmap(reports));
    outputs.insert(outputs.end(), {rmse_file, ttest_file, heat_file});

    record("eval", {p.eval_pairs, p.alignment_model}, stage_seed("align train"), outputs);
    std::string msg = std::to_string(rows.size()) + " eval pairs; global RMSE";
    for (const auto& r : reports) msg += " " + r.model + "=" + format_fixed(r.global_rmse, 4);
    return {"eval", outputs, msg};
}

double Pipeline::predict(std::string_view title_a, std::string_view title_b) const
{
    const auto model = load_alignment(require(config_.paths.alignment_model, "align train"));
    const ReferenceEmbedder encoder(config_.embedder);
    return predict_str(title_a, title_b, encoder, model);
}

struct Pipeline::ExplainContext {
    KnowledgeGraph kg;
    SpecificityTable specificity;
    AlignmentModel model;
    ReferenceEmbedder encoder;
};

Pipeline::ExplainContext Pipeline::explain_context() const
{
    const auto& p = config_.paths;
    return {load_graph(require(p.graph, "kg build")),
            parse_specificity(csv::read_text(require(p.specificity, "kg build"))),
            load_alignment(require(p.alignment_model, "align train")), ReferenceEmbedder(config_.embedder)};
}

Explanation Pipeline::explain_pair(const ExplainContext& ctx, std::string_view job_a, std::string_view job_b) const
{
    auto resolve = [&](std::string_view ref) -> std::string {
        if (ctx.kg.has_node(job_node(ref))) return job_node(ref);
        for (const auto& id : ctx.kg.job_ids()) {
            if (ctx.kg.node(id).label == ref) return id;
        }
        throw UsageError("unknown job '" + std::string(ref) + "' (expected a job id or exact title)");
    };
    const auto a = resolve(job_a);
    const auto b = resolve(job_b);
    const double predicted = predict_str(ctx.kg.node(a).label, ctx.kg.node(b).label, ctx.encoder, ctx.model);
    return explain_match(ctx.kg, ctx.specificity, a, b, predicted, config_.explain);
}

Explanation Pipeline::explain_pair(std::string_view job_a, std::string_view job_b) const
{
    return explain_pair(explain_context(), job_a, job_b);
}

StageResult Pipeline::explain(const std::optional<ExplainRequest>& request)
{
    const auto& p = config_.paths;
    const fs::path dir(p.explain_dir);
    std::vector<std::string> outputs;

    auto emit = [&](const Explanation& e, const std::string& stem) {
        const auto dot_file = (dir / (stem + ".dot")).generic_string();
        const auto json_file = (dir / (stem + ".json")).generic_string();
        csv::write_text(path(dot_file), render_dot(e));
        csv::write_text(path(json_file), render_json(e));
        outputs.insert(outputs.end(), {dot_file, json_file});
    };
    auto strip = [](const std::string& node) { return node.substr(node.find(':') + 1); };

    const auto ctx = explain_context();
    if (request) {
        const auto e = explain_pair(ctx, request->job_a, request->job_b);
        emit(e, strip(e.job_a.id) + "__" + strip(e.job_b.id));
        return {"explain", outputs, render_text(e)};
    }

    const auto rows = read_pairs(require(p.eval_pairs, "split"));
    const auto ids = csv::read_file(require(p.title_ids, "split"));
    const auto title_col = ids.require_column("title", p.title_ids);
    const auto id_col = ids.require_column("id", p.title_ids);
    std::unordered_map<std::string, std::string> id_of;
    for (const auto& r : ids.rows) id_of.emplace(r.fields.at(title_col), r.fields.at(id_col));

    const auto seed = stage_seed("explain");
    Rng rng(seed, "sample");
    const auto picks = rng.sample_indices(rows.size(), std::min(kExplainSample, rows.size()));

    std::string index = "file,job_a,job_b,verdict,shared_skills,predicted_str,actual_str\n";
    std::size_t n = 0;
    for (auto i : picks) {
        const auto& row = rows[i];
        auto ia = id_of.find(row.anchor);
        auto ib = id_of.find(row.sample);
        if (ia == id_of.end() || ib == id_of.end()) throw DataError("eval pair title missing from " + p.title_ids);
        const auto e = explain_pair(ctx, ia->second, ib->second);
        char stem[32];
        std::snprintf(stem, sizeof(stem), "pair_%02zu", ++n);
        emit(e, stem);
        const std::array<std::string, 7> f{stem,
                                           ia->second,
                                           ib->second,
                                           std::string(verdict_name(e.verdict)),
                                           std::to_string(e.shared_skills.size()),
                                           format_fixed(e.predicted_str, 6),
                                           format_fixed(row.score, 6)};
        index += csv::format_row(f);
    }
    const auto index_file = (dir / "index.csv").generic_string();
    csv::write_text(path(index_file), index);
    outputs.push_back(index_file);

    record("explain", {p.graph, p.specificity, p.alignment_model, p.eval_pairs, p.title_ids}, seed, outputs);
    return {"explain", outputs, std::to_string(n) + " eval pairs explained"};
}

StageResult Pipeline::run_stage(std::string_view stage)
{
    if (stage == "summarize") return summarize();
    if (stage == "embed") return embed();
    if (stage == "pairs") return pairs();
    if (stage == "split") return split();
    if (stage == "kg build") return kg_build();
    if (stage == "kg embed") return kg_embed();
    if (stage == "align train") return align_train();
    if (stage == "eval") return eval();
    if (stage == "explain") return explain();
    throw UsageError("unknown stage '" + std::string(stage) + "'");
}

std::vector<StageResult> Pipeline::run_all()
{
    std::vector<StageResult> results;
    for (auto stage : kStages) results.push_back(run_stage(stage));
    return results;
}

} // namespace jobrel
