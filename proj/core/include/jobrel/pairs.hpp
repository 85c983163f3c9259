#pragma once

#include "jobrel/corpus.hpp"
#include "jobrel/embed.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace jobrel {

enum class Region { Low = 0, Medium = 1, High = 2 };

inline constexpr std::array<Region, 3> kRegions{Region::Low, Region::Medium, Region::High};

std::string_view region_name(Region r);

/// STR bands: Low [0, low_upper), Medium [low_upper, medium_upper),
/// High [medium_upper, 1].
struct RegionPartition {
    double low_upper = 0.50;
    double medium_upper = 0.75;

    void validate() const;
};

/// Throws DataError when score lies outside [0, 1].
Region assign_region(double score, const RegionPartition& partition = {});

struct STRPair {
    std::string anchor_id;
    std::string sample_id;
    double score = 0.0;

    bool operator==(const STRPair&) const = default;
};

/// Row of a pair file; anchor and sample carry job titles.
struct TitlePair {
    std::string anchor;
    std::string sample;
    double score = 0.0;

    bool operator==(const TitlePair&) const = default;
};

struct PairSampling {
    std::size_t per_anchor_cap = 30;
    std::uint64_t seed = 42;
};

/// For every anchor, ranks all other jobs by str_score (descending, ties by
/// id) and keeps ceil(cap/3) from the top, round(cap/3) from the bottom and
/// floor(cap/3) drawn uniformly from the middle. The middle draw uses a
/// stream keyed by (seed, anchor id), so the result does not depend on the
/// thread count.
std::vector<STRPair> build_pairs(const EmbeddingStore& store, const std::vector<std::string>& job_ids,
                                 const PairSampling& sampling, std::size_t threads = 0);

struct Split {
    std::vector<std::string> train_ids;
    std::vector<std::string> eval_ids;
};

/// Shuffles the distinct (normalized) titles with `seed` and assigns the
/// first round(eval_fraction * #titles) to eval. Jobs sharing a title always
/// land on the same side.
Split split_disjoint(const std::vector<JobRecord>& jobs, double eval_fraction, std::uint64_t seed);

struct SplitPairs {
    std::vector<STRPair> train;
    std::vector<STRPair> eval;
    std::size_t dropped_cross = 0;
};

/// Keeps pairs whose endpoints lie on the same side; cross pairs are dropped.
SplitPairs filter_pairs(const std::vector<STRPair>& pairs, const Split& split);

struct RegionQuota {
    std::size_t low = 1000;
    std::size_t medium = 1000;
    std::size_t high = 1000;

    std::size_t of(Region r) const;
};

struct StratifiedPairs {
    std::vector<STRPair> pairs;           // input order preserved
    std::array<std::size_t, 3> available; // per region, before sampling
    std::array<std::size_t, 3> counts;    // per region, after sampling
};

/// Per region, keeps a seeded uniform subsample of min(quota, available).
StratifiedPairs stratify(const std::vector<STRPair>& pairs, const RegionPartition& partition,
                         const RegionQuota& quota, std::uint64_t seed);

// Pair file: header `anchor,sample,score`, score with 9 decimals.
std::string format_pairs(const std::vector<TitlePair>& pairs);
std::vector<TitlePair> parse_pairs(std::string_view csv_text, std::string_view source = "pairs");
void write_pairs(const std::vector<TitlePair>& pairs, const std::filesystem::path& path);
std::vector<TitlePair> read_pairs(const std::filesystem::path& path);

/// Replaces job ids with titles.
std::vector<TitlePair> to_title_pairs(const std::vector<STRPair>& pairs, const std::vector<JobRecord>& jobs);

/// Id-keyed sidecar (`title,id`) mapping pair-file titles back to job ids.
std::string format_title_ids(const std::vector<JobRecord>& jobs, const std::vector<std::string>& ids);

} // namespace jobrel
