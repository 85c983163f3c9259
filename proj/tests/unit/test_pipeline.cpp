#include "jobrel/csv.hpp"
#include "jobrel/error.hpp"
#include "jobrel/pipeline.hpp"
#include "jobrel/synthetic.hpp"

#include <doctest.h>

#include <filesystem>
#include <map>
#include <string>

using namespace jobrel;
namespace fs = std::filesystem;

namespace {

PipelineConfig small_config()
{
    PipelineConfig c;
    c.seed = 5;
    c.embedder.dimension = 64;
    c.pairs.per_anchor_cap = 6;
    c.graph_model = GraphModelConfig{2, 8, 12, 8};
    c.graph_train.epochs = 4;
    c.align.epochs = 4;
    c.align.hidden_dim = 16;
    return c;
}

fs::path fresh_dir(const std::string& name)
{
    const auto dir = fs::temp_directory_path() / ("jobrel_pipeline_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void seed_corpus(const fs::path& dir, const PipelineConfig& c)
{
    write_corpus(generate_corpus(SyntheticCorpusConfig{60, 60, 3}), dir, c.paths);
}

std::map<std::string, std::string> snapshot(const fs::path& dir)
{
    std::map<std::string, std::string> out;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
        if (e.is_regular_file()) out[fs::relative(e.path(), dir).generic_string()] = csv::read_text(e.path());
    }
    return out;
}

} // namespace

TEST_CASE("manifest text round trip")
{
    std::vector<ManifestEntry> entries{
        {"summarize", {{"source_jobs.csv", "ab12"}}, 17, {{"job_summaries.csv", "cd34"}}},
        {"eval", {}, 0, {{"eval/a.csv", "01"}, {"eval/b.csv", "02"}}}};
    const auto text = format_manifest(entries);
    CHECK(text.starts_with("stage\tinputs\tseed\toutputs\n"));
    CHECK(parse_manifest(text) == entries);
}

TEST_CASE("sha256 known answer")
{
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("stages refuse to run before their producers")
{
    const auto c = small_config();
    const auto dir = fresh_dir("missing");
    Pipeline p(c, dir);
    try {
        p.eval();
        FAIL("eval ran without inputs");
    } catch (const MissingArtifactError& e) {
        CHECK(std::string(e.what()).find("run `") != std::string::npos);
    }
    seed_corpus(dir, c);
    p.summarize();
    p.embed();
    p.pairs();
    p.split();
    p.kg_build();
    p.kg_embed();
    try {
        p.eval();
        FAIL("eval ran without an alignment model");
    } catch (const MissingArtifactError& e) {
        CHECK(e.stage() == "align train");
        CHECK(std::string(e.what()).find("`align train`") != std::string::npos);
    }
    CHECK_THROWS_AS(p.run_stage("bogus"), UsageError);
    fs::remove_all(dir);
}

TEST_CASE("run_all equals the stages run one by one and is repeatable")
{
    const auto c = small_config();
    const auto a = fresh_dir("all");
    const auto b = fresh_dir("steps");
    seed_corpus(a, c);
    seed_corpus(b, c);

    Pipeline pa(c, a);
    const auto results = pa.run_all();
    CHECK(results.size() == kStages.size());

    Pipeline pb(c, b);
    for (auto stage : kStages) pb.run_stage(stage);
    CHECK(snapshot(a) == snapshot(b));

    const auto manifest = pa.manifest();
    REQUIRE(manifest.size() == kStages.size());
    // each entry records the seed the stage consumed; 0 for deterministic stages
    const std::map<std::string, std::uint64_t> seeds{
        {"summarize", 0},
        {"embed", c.embedder.seed},
        {"pairs", pa.stage_seed("pairs")},
        {"split", pa.stage_seed("split")},
        {"kg build", 0},
        {"kg embed", pa.stage_seed("kg embed")},
        {"align train", pa.stage_seed("align train")},
        {"eval", pa.stage_seed("align train")},
        {"explain", pa.stage_seed("explain")}};
    for (std::size_t i = 0; i < kStages.size(); ++i) {
        CHECK(manifest[i].stage == kStages[i]);
        CHECK(manifest[i].seed == seeds.at(std::string(kStages[i])));
    }

    // rerunning a stage over its own outputs changes nothing
    const auto before = snapshot(a);
    pa.run_stage("summarize");
    pa.run_stage("kg build");
    CHECK(snapshot(a) == before);

    const double s = pa.predict("Data Scientist", "Data Scientist");
    CHECK(s == doctest::Approx(1.0));
    const double t = pa.predict("Registered Nurse", "Line Cook");
    CHECK(t >= 0.0);
    CHECK(t <= 1.0);
    fs::remove_all(a);
    fs::remove_all(b);
}
