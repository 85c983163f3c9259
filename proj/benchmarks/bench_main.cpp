#include "jobrel/align.hpp"
#include "jobrel/embed.hpp"
#include "jobrel/evalstats.hpp"
#include "jobrel/graphembed.hpp"
#include "jobrel/kg.hpp"
#include "jobrel/random.hpp"

#include <benchmark/benchmark.h>

#include <string>
#include <vector>

using namespace jobrel;

namespace {

std::vector<double> random_vector(std::size_t dim, std::uint64_t seed)
{
    Rng rng(seed, "bench");
    std::vector<double> v(dim);
    for (auto& x : v) x = rng.uniform(-1, 1);
    return v;
}

KnowledgeGraph bench_graph(int jobs, int skills)
{
    Rng rng(3, "bench-graph");
    KnowledgeGraph kg;
    for (int j = 0; j < jobs; ++j) kg.add_node({"job:j" + std::to_string(j), NodeKind::Job, "J"});
    for (int s = 0; s < skills; ++s) kg.add_node({"skill:s" + std::to_string(s), NodeKind::Skill, "S"});
    for (int j = 0; j < jobs; ++j) {
        for (auto s : rng.sample_indices(static_cast<std::size_t>(skills), 6)) {
            kg.add_edge({"job:j" + std::to_string(j), "skill:s" + std::to_string(s), Relation::HasSkill, 0.7});
        }
    }
    return kg;
}

} // namespace

static void BM_Cosine(benchmark::State& state)
{
    const auto dim = static_cast<std::size_t>(state.range(0));
    const auto a = random_vector(dim, 1);
    const auto b = random_vector(dim, 2);
    for (auto _ : state) benchmark::DoNotOptimize(cosine(a, b));
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Cosine)->Arg(64)->Arg(768);

static void BM_ReferenceEmbed(benchmark::State& state)
{
    const ReferenceEmbedderConfig cfg{768, 3, 42};
    const std::string text = "Senior Software Engineer responsible for backend services and data pipelines.";
    for (auto _ : state) benchmark::DoNotOptimize(reference_embed(text, cfg));
    state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(text.size()));
}
BENCHMARK(BM_ReferenceEmbed);

static void BM_GraphForward(benchmark::State& state)
{
    const auto kg = bench_graph(200, 120);
    const GraphIndex index(kg);
    const auto model = init_model(kg, GraphModelConfig{2, 64, 256, static_cast<std::size_t>(state.range(0))}, 1);
    for (auto _ : state) benchmark::DoNotOptimize(forward(index, model.params));
}
BENCHMARK(BM_GraphForward)->Arg(64)->Arg(500)->Unit(benchmark::kMillisecond);

static void BM_GraphLossAndGradient(benchmark::State& state)
{
    const auto kg = bench_graph(200, 120);
    const GraphIndex index(kg);
    const auto model = init_model(kg, GraphModelConfig{2, 64, 256, 500}, 1);
    const auto data = sample_training_set(index, 1, 1, "bench");
    GraphParams grad;
    for (auto _ : state) benchmark::DoNotOptimize(graph_loss(index, model.params, data, &grad));
}
BENCHMARK(BM_GraphLossAndGradient)->Unit(benchmark::kMillisecond);

static void BM_AlignmentForward(benchmark::State& state)
{
    const auto model = init_alignment(768, 1024, 500, 1);
    const auto x = random_vector(768, 4);
    for (auto _ : state) benchmark::DoNotOptimize(map_text_to_graph(x, model));
}
BENCHMARK(BM_AlignmentForward)->Unit(benchmark::kMicrosecond);

static void BM_WelchT(benchmark::State& state)
{
    const auto a = random_vector(static_cast<std::size_t>(state.range(0)), 5);
    const auto b = random_vector(static_cast<std::size_t>(state.range(0)), 6);
    for (auto _ : state) benchmark::DoNotOptimize(welch_t(a, b));
}
BENCHMARK(BM_WelchT)->Arg(100)->Arg(10000);

BENCHMARK_MAIN();
