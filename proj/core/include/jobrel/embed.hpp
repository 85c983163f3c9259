#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace jobrel {

using EmbeddingVector = std::vector<double>;

/// Fixed-dimension id -> vector table. Insertion order is preserved and is
/// the order used when writing the table to disk.
class EmbeddingStore {
public:
    explicit EmbeddingStore(std::size_t dimension = 0);

    std::size_t dimension() const noexcept { return dimension_; }
    std::size_t size() const noexcept { return ids_.size(); }
    bool empty() const noexcept { return ids_.empty(); }

    /// Throws DataError on duplicate id, wrong length or non-finite values.
    void add(std::string id, std::span<const double> values);

    bool contains(std::string_view id) const;
    std::span<const double> at(std::string_view id) const;
    std::span<const double> row(std::size_t index) const;
    const std::vector<std::string>& ids() const noexcept { return ids_; }

private:
    std::size_t dimension_;
    std::vector<std::string> ids_;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<double> data_;
};

struct ReferenceEmbedderConfig {
    std::size_t dimension = 768;
    std::size_t ngram_size = 3;
    std::uint64_t seed = 42;
};

/// Anything that turns text into a fixed-dimension vector.
class TextEncoder {
public:
    virtual ~TextEncoder() = default;
    virtual std::size_t dimension() const = 0;
    virtual EmbeddingVector encode(std::string_view text) const = 0;
};

/// Deterministic offline text encoder: character n-grams of the lowercased,
/// whitespace-collapsed text (padded with one space on each side) are
/// hashed into signed buckets and the count vector is l2-normalized.
///
///   key    = splitmix64(fnv1a64(gram) ^ splitmix64(seed))
///   bucket = key % dimension,  sign = top bit of key ? -1 : +1
class ReferenceEmbedder final : public TextEncoder {
public:
    explicit ReferenceEmbedder(ReferenceEmbedderConfig config = {});

    std::size_t dimension() const override { return config_.dimension; }
    EmbeddingVector encode(std::string_view text) const override;
    const ReferenceEmbedderConfig& config() const noexcept { return config_; }

private:
    ReferenceEmbedderConfig config_;
};

/// Lowercase ASCII, trim, collapse whitespace runs to one space.
std::string normalize_text(std::string_view text);

EmbeddingVector reference_embed(std::string_view text, const ReferenceEmbedderConfig& config);

/// Encodes every text; parallel over texts, output order follows input.
EmbeddingStore encode_all(const TextEncoder& encoder, std::span<const std::string> ids,
                          std::span<const std::string> texts, std::size_t threads = 0);

double dot(std::span<const double> u, std::span<const double> v);
double l2_norm(std::span<const double> u);
void normalize_in_place(std::span<double> u);

/// u.v / (|u||v|), clamped to [-1, 1]. Throws DataError on dimension
/// mismatch or a zero-norm argument.
double cosine(std::span<const double> u, std::span<const double> v);

/// Relatedness score in [0, 1]: max(0, cosine(u, v)).
double str_score(std::span<const double> u, std::span<const double> v);

// CSV format: header `id,v0,...,v{d-1}`, one row per id, values in
// shortest round-trip form (bit-exact on reload).
std::string format_store(const EmbeddingStore& store);
EmbeddingStore parse_store(std::string_view csv_text, std::string_view source = "embeddings");
void save_store(const EmbeddingStore& store, const std::filesystem::path& path);
EmbeddingStore load_store(const std::filesystem::path& path);

/// Shortest round-trip decimal representation.
std::string format_double(double v);
/// Fixed-point with the given number of decimals.
std::string format_fixed(double v, int decimals);
/// Strict full-string parse; throws DataError.
double parse_double(std::string_view s);

} // namespace jobrel
