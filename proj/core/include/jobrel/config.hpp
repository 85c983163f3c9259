#pragma once

#include "jobrel/align.hpp"
#include "jobrel/embed.hpp"
#include "jobrel/explain.hpp"
#include "jobrel/graphembed.hpp"
#include "jobrel/pairs.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace jobrel {

/// File names, relative to the pipeline output directory.
struct PipelinePaths {
    std::string jobs = "source_jobs.csv";
    std::string skills = "source_skills.csv";
    std::string hierarchy = "source_skill_hierarchy.csv";
    std::string summaries = "job_summaries.csv";
    std::string job_embeddings = "job_embeddings.csv";
    std::string skill_embeddings = "skill_embeddings.csv";
    std::string title_embeddings = "title_embeddings.csv";
    std::string all_pairs = "all_pairs.csv";
    std::string train_pairs = "train_job_title_pairs.csv";
    std::string eval_pairs = "eval_job_title_pairs.csv";
    std::string title_ids = "job_title_ids.csv";
    std::string split = "split.csv";
    std::string graph = "kg.json";
    std::string specificity = "specificity.csv";
    std::string graph_embeddings = "graph_embeddings.csv";
    std::string graph_model = "graph_model.txt";
    std::string graph_log = "graph_training_log.csv";
    std::string alignment_model = "alignment_model.txt";
    std::string align_log = "align_training_log.csv";
    std::string eval_dir = "eval";
    std::string explain_dir = "explain";
    std::string manifest = "manifest.tsv";
};

struct PairsConfig {
    std::size_t per_anchor_cap = 30;
    double eval_fraction = 0.2;
    RegionQuota quota;
};

struct KgConfig {
    std::size_t skills_per_job = 10;
    double job_skill_threshold = 0.5;
    double skill_skill_threshold = 0.25;
    double generic_share = 0.20;
};

struct PipelineConfig {
    std::uint64_t seed = 42;
    std::size_t summary_sentences = 3;
    PipelinePaths paths;
    ReferenceEmbedderConfig embedder;
    RegionPartition regions;
    PairsConfig pairs;
    KgConfig kg;
    GraphModelConfig graph_model;
    GraphTrainConfig graph_train; // seed field ignored: derived from `seed`
    AlignTrainConfig align;       // seed field ignored: derived from `seed`
    ExplainOptions explain;

    /// Throws UsageError listing every offending field.
    void validate() const;
    std::vector<std::string> range_errors() const;
};

std::string config_to_json(const PipelineConfig& config);
/// Missing keys keep their defaults; unknown keys and bad types are errors.
PipelineConfig config_from_json(std::string_view text);
PipelineConfig load_config(const std::filesystem::path& path);
void save_config(const PipelineConfig& config, const std::filesystem::path& path);

} // namespace jobrel
