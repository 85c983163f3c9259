#pragma once

#include "jobrel/config.hpp"
#include "jobrel/corpus.hpp"
#include "jobrel/evalstats.hpp"
#include "jobrel/explain.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace jobrel {

/// Stages in the order `run-all` executes them.
inline constexpr std::array<std::string_view, 9> kStages{
    "summarize", "embed", "pairs", "split", "kg build", "kg embed", "align train", "eval", "explain"};

/// Hex SHA-256 of a byte string / of a file's contents.
std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

struct ManifestEntry {
    std::string stage;
    std::vector<std::pair<std::string, std::string>> inputs;  // relative path, hash
    std::uint64_t seed = 0;
    std::vector<std::pair<std::string, std::string>> outputs; // relative path, hash

    bool operator==(const ManifestEntry&) const = default;
};

// Tab-separated: stage, inputs, seed, outputs; file lists as path=hash
// joined with ';'. Entries are kept in stage order.
std::string format_manifest(const std::vector<ManifestEntry>& entries);
std::vector<ManifestEntry> parse_manifest(std::string_view text);

struct StageResult {
    std::string stage;
    std::vector<std::string> outputs; // relative paths
    std::string message;
};

struct ExplainRequest {
    std::string job_a; // job id or exact title
    std::string job_b;
};

/// Writes the three source CSVs into `out_dir` under the configured names.
void write_corpus(const Corpus& corpus, const std::filesystem::path& out_dir, const PipelinePaths& paths);

/// Runs pipeline stages against one output directory. Each stage reads its
/// inputs from the directory, writes its artifacts and records a manifest
/// entry. A stage whose input is absent raises MissingArtifactError naming
/// the stage that produces it.
class Pipeline {
public:
    Pipeline(PipelineConfig config, std::filesystem::path out_dir);

    const PipelineConfig& config() const noexcept { return config_; }
    const std::filesystem::path& out_dir() const noexcept { return out_dir_; }

    /// Stage seed: derived from the global seed and the stage name.
    std::uint64_t stage_seed(std::string_view stage) const;

    StageResult summarize();
    StageResult embed();
    StageResult pairs();
    StageResult split();
    StageResult kg_build();
    StageResult kg_embed();
    StageResult align_train();
    StageResult eval();
    /// Without a request, explains a seeded sample of eval pairs.
    StageResult explain(const std::optional<ExplainRequest>& request = std::nullopt);

    StageResult run_stage(std::string_view stage);
    std::vector<StageResult> run_all();

    /// STR estimate for two free-text titles with the trained alignment.
    double predict(std::string_view title_a, std::string_view title_b) const;

    /// Explanation for one pair; job references are ids or exact titles.
    Explanation explain_pair(std::string_view job_a, std::string_view job_b) const;

    std::vector<ManifestEntry> manifest() const;

private:
    struct ExplainContext;
    ExplainContext explain_context() const;
    Explanation explain_pair(const ExplainContext& ctx, std::string_view job_a, std::string_view job_b) const;
    std::filesystem::path path(std::string_view relative) const;
    std::filesystem::path require(std::string_view relative, std::string_view producer) const;
    void record(std::string_view stage, const std::vector<std::string>& inputs, std::uint64_t seed,
                const std::vector<std::string>& outputs) const;
    std::vector<JobRecord> load_jobs_with_summaries() const;

    PipelineConfig config_;
    std::filesystem::path out_dir_;
};

} // namespace jobrel
