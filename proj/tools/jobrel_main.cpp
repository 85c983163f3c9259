#include "jobrel/config.hpp"
#include "jobrel/error.hpp"
#include "jobrel/pipeline.hpp"
#include "jobrel/synthetic.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

namespace fs = std::filesystem;

namespace {

struct GlobalOptions {
    std::optional<std::uint64_t> seed;
    std::string config;
    std::string out_dir = ".";
};

jobrel::PipelineConfig resolve_config(const GlobalOptions& g)
{
    jobrel::PipelineConfig config = g.config.empty() ? jobrel::PipelineConfig{} : jobrel::load_config(g.config);
    if (g.seed) config.seed = *g.seed;
    config.validate();
    return config;
}

void print(const jobrel::StageResult& r)
{
    std::cout << "[" << r.stage << "] " << r.message << "\n";
}

int run(int argc, char** argv)
{
    CLI::App app{"jobrel: job-title relatedness pipeline"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions g;
    app.add_option("--seed", g.seed, "Global seed (overrides the config file)");
    app.add_option("--config", g.config, "JSON config file")->check(CLI::ExistingFile);
    app.add_option("--out-dir", g.out_dir, "Artifact directory")->capture_default_str();

    auto* init = app.add_subcommand("init-config", "Write a config file with every default");
    std::string init_path;
    bool force = false;
    init->add_option("--output", init_path, "Destination (default <out-dir>/config.json)");
    init->add_flag("--force", force, "Overwrite an existing file");

    auto* gen = app.add_subcommand("gen-corpus", "Write the synthetic source CSVs into the output directory");
    jobrel::SyntheticCorpusConfig gen_cfg;
    bool gen_seed_given = false;
    gen->add_option("--jobs", gen_cfg.jobs)->capture_default_str();
    gen->add_option("--skills", gen_cfg.skills)->capture_default_str();
    gen->add_option_function<std::uint64_t>(
        "--seed",
        [&](std::uint64_t s) {
            gen_cfg.seed = s;
            gen_seed_given = true;
        },
        "Corpus seed (default: global seed)");

    auto* summarize = app.add_subcommand("summarize", "Extractive summaries of job descriptions");
    auto* embed = app.add_subcommand("embed", "Embed summaries, titles and skills");
    auto* pairs = app.add_subcommand("pairs", "Build the STR pair pool");
    auto* split = app.add_subcommand("split", "Disjoint-title split and stratified pair files");
    auto* kg = app.add_subcommand("kg", "Knowledge graph stages");
    kg->require_subcommand(1);
    auto* kg_build = kg->add_subcommand("build", "Match skills, build and prune the graph");
    auto* kg_embed = kg->add_subcommand("embed", "Train graph node embeddings");
    auto* align = app.add_subcommand("align", "Alignment stages");
    align->require_subcommand(1);
    auto* align_train = align->add_subcommand("train", "Train the text-to-graph map");

    auto* predict = app.add_subcommand("predict", "STR estimate for two titles");
    std::string title_a, title_b;
    predict->add_option("--title-a", title_a)->required();
    predict->add_option("--title-b", title_b)->required();

    auto* eval = app.add_subcommand("eval", "Region-stratified evaluation on the eval pairs");

    auto* explain = app.add_subcommand("explain", "Explanation subgraphs");
    std::string job_a, job_b;
    std::optional<std::size_t> hops;
    auto* opt_a = explain->add_option("--job-a", job_a, "Job id or exact title");
    auto* opt_b = explain->add_option("--job-b", job_b, "Job id or exact title");
    opt_a->needs(opt_b);
    opt_b->needs(opt_a);
    explain->add_option("--hops", hops, "1: shared skills only, 2: add hierarchy links")->check(CLI::Range(1, 2));

    auto* run_all = app.add_subcommand("run-all", "Run every stage in order");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    const fs::path out_dir(g.out_dir);

    if (*init) {
        const fs::path dest = init_path.empty() ? out_dir / "config.json" : fs::path(init_path);
        if (fs::exists(dest) && !force) throw jobrel::UsageError(dest.string() + " exists; pass --force to overwrite");
        jobrel::save_config(resolve_config(g), dest);
        std::cout << "wrote " << dest.string() << "\n";
        return 0;
    }

    auto config = resolve_config(g);
    if (hops) config.explain.hops = *hops;

    if (*gen) {
        if (!gen_seed_given) gen_cfg.seed = config.seed;
        const auto corpus = jobrel::generate_corpus(gen_cfg);
        jobrel::write_corpus(corpus, out_dir, config.paths);
        std::cout << "[gen-corpus] " << corpus.jobs.size() << " jobs, " << corpus.skills.size() << " skills, "
                  << corpus.hierarchy.size() << " hierarchy rows\n";
        return 0;
    }

    jobrel::Pipeline pipeline(config, out_dir);
    if (*summarize) print(pipeline.summarize());
    else if (*embed) print(pipeline.embed());
    else if (*pairs) print(pipeline.pairs());
    else if (*split) print(pipeline.split());
    else if (*kg_build) print(pipeline.kg_build());
    else if (*kg_embed) print(pipeline.kg_embed());
    else if (*align_train) print(pipeline.align_train());
    else if (*eval) print(pipeline.eval());
    else if (*predict) std::cout << jobrel::format_fixed(pipeline.predict(title_a, title_b), 6) << "\n";
    else if (*explain) {
        if (job_a.empty()) {
            print(pipeline.explain());
        } else {
            const auto r = pipeline.explain(jobrel::ExplainRequest{job_a, job_b});
            std::cout << r.message;
            for (const auto& f : r.outputs) std::cout << "wrote " << (out_dir / f).string() << "\n";
        }
    } else if (*run_all) {
        for (const auto& r : pipeline.run_all()) print(r);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    try {
        return run(argc, argv);
    } catch (const jobrel::UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const jobrel::DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
