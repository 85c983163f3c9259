#include "jobrel/embed.hpp"

#include "jobrel/csv.hpp"
#include "jobrel/error.hpp"
#include "jobrel/random.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <thread>

namespace jobrel {

EmbeddingStore::EmbeddingStore(std::size_t dimension) : dimension_(dimension) {}

void EmbeddingStore::add(std::string id, std::span<const double> values)
{
    if (values.size() != dimension_) {
        throw DataError("embedding '" + id + "' has dimension " + std::to_string(values.size()) +
                        ", store expects " + std::to_string(dimension_));
    }
    for (double v : values) {
        if (!std::isfinite(v)) throw DataError("embedding '" + id + "' has a non-finite value");
    }
    if (index_.contains(id)) throw DataError("duplicate embedding id '" + id + "'");
    index_.emplace(id, ids_.size());
    ids_.push_back(std::move(id));
    data_.insert(data_.end(), values.begin(), values.end());
}

bool EmbeddingStore::contains(std::string_view id) const
{
    return index_.contains(std::string(id));
}

std::span<const double> EmbeddingStore::at(std::string_view id) const
{
    auto it = index_.find(std::string(id));
    if (it == index_.end()) throw DataError("unknown embedding id '" + std::string(id) + "'");
    return row(it->second);
}

std::span<const double> EmbeddingStore::row(std::size_t index) const
{
    return {data_.data() + index * dimension_, dimension_};
}

std::string normalize_text(std::string_view text)
{
    std::string out;
    out.reserve(text.size());
    bool pending_space = false;
    for (char raw : text) {
        const auto c = static_cast<unsigned char>(raw);
        if (std::isspace(c)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) out.push_back(' ');
        pending_space = false;
        out.push_back(static_cast<char>(c < 0x80 ? std::tolower(c) : c));
    }
    return out;
}

ReferenceEmbedder::ReferenceEmbedder(ReferenceEmbedderConfig config) : config_(config)
{
    if (config_.dimension < 8) throw UsageError("reference embedder: dimension must be >= 8");
    if (config_.ngram_size < 1) throw UsageError("reference embedder: ngram_size must be >= 1");
}

EmbeddingVector ReferenceEmbedder::encode(std::string_view text) const
{
    return reference_embed(text, config_);
}

EmbeddingVector reference_embed(std::string_view text, const ReferenceEmbedderConfig& config)
{
    if (config.dimension < 8) throw UsageError("reference embedder: dimension must be >= 8");
    if (config.ngram_size < 1) throw UsageError("reference embedder: ngram_size must be >= 1");
    const auto norm = normalize_text(text);
    if (norm.empty()) throw DataError("reference embedder: empty text");

    const std::string padded = " " + norm + " ";
    const std::string_view s = padded;
    const std::size_t n = config.ngram_size;
    const std::uint64_t seed_mix = splitmix64(config.seed);

    EmbeddingVector v(config.dimension, 0.0);
    auto add_gram = [&](std::string_view gram) {
        const std::uint64_t key = splitmix64(fnv1a64(gram) ^ seed_mix);
        const double sign = (key >> 63) ? -1.0 : 1.0;
        v[key % config.dimension] += sign;
    };
    if (s.size() < n) {
        add_gram(s);
    } else {
        for (std::size_t i = 0; i + n <= s.size(); ++i) add_gram(s.substr(i, n));
    }
    const double len = l2_norm(v);
    if (len == 0.0) throw DataError("reference embedder: n-gram counts cancel for '" + norm + "'");
    for (auto& x : v) x /= len;
    return v;
}

EmbeddingStore encode_all(const TextEncoder& encoder, std::span<const std::string> ids,
                          std::span<const std::string> texts, std::size_t threads)
{
    if (ids.size() != texts.size()) throw UsageError("encode_all: ids and texts differ in length");
    std::vector<EmbeddingVector> out(texts.size());
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<std::size_t>(threads, std::max<std::size_t>(1, texts.size()));

    std::vector<std::exception_ptr> errors(threads);
    {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                try {
                    for (std::size_t i = t; i < texts.size(); i += threads) {
                        out[i] = encoder.encode(texts[i]);
                    }
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        }
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    EmbeddingStore store(encoder.dimension());
    for (std::size_t i = 0; i < ids.size(); ++i) store.add(ids[i], out[i]);
    return store;
}

double dot(std::span<const double> u, std::span<const double> v)
{
    if (u.size() != v.size()) {
        throw DataError("dimension mismatch: " + std::to_string(u.size()) + " vs " + std::to_string(v.size()));
    }
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
    return s;
}

double l2_norm(std::span<const double> u)
{
    double s = 0.0;
    for (double x : u) s += x * x;
    return std::sqrt(s);
}

void normalize_in_place(std::span<double> u)
{
    const double n = l2_norm(u);
    if (n == 0.0) throw DataError("cannot normalize a zero vector");
    for (auto& x : u) x /= n;
}

double cosine(std::span<const double> u, std::span<const double> v)
{
    if (u.size() != v.size()) {
        throw DataError("cosine: dimension mismatch " + std::to_string(u.size()) + " vs " +
                        std::to_string(v.size()));
    }
    double uv = 0.0;
    double uu = 0.0;
    double vv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        uv += u[i] * v[i];
        uu += u[i] * u[i];
        vv += v[i] * v[i];
    }
    if (uu == 0.0 || vv == 0.0) throw DataError("cosine: zero-norm input");
    return std::clamp(uv / (std::sqrt(uu) * std::sqrt(vv)), -1.0, 1.0);
}

double str_score(std::span<const double> u, std::span<const double> v)
{
    return std::max(0.0, cosine(u, v));
}

std::string format_double(double v)
{
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, end);
}

std::string format_fixed(double v, int decimals)
{
    char buf[128];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, decimals);
    if (ec != std::errc{}) throw DataError("format_fixed: value out of range");
    std::string s(buf, end);
    if (s.starts_with('-') && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
    return s;
}

double parse_double(std::string_view s)
{
    auto t = csv::trim(s);
    std::string_view sv = t;
    if (sv.starts_with('+')) sv.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), v);
    if (ec != std::errc{} || ptr != sv.data() + sv.size() || sv.empty()) {
        throw DataError("malformed number '" + std::string(s) + "'");
    }
    return v;
}

std::string format_store(const EmbeddingStore& store)
{
    std::string out = "id";
    for (std::size_t i = 0; i < store.dimension(); ++i) out += ",v" + std::to_string(i);
    out.push_back('\n');
    for (std::size_t r = 0; r < store.size(); ++r) {
        out += csv::escape(store.ids()[r]);
        for (double x : store.row(r)) {
            out.push_back(',');
            out += format_double(x);
        }
        out.push_back('\n');
    }
    return out;
}

EmbeddingStore parse_store(std::string_view csv_text, std::string_view source)
{
    const auto table = csv::parse(csv_text);
    if (table.header.empty() || csv::to_lower(csv::trim(table.header[0])) != "id") {
        throw DataError(std::string(source) + ": header must start with 'id'");
    }
    const std::size_t dim = table.header.size() - 1;
    for (std::size_t i = 0; i < dim; ++i) {
        if (csv::trim(table.header[i + 1]) != "v" + std::to_string(i)) {
            throw DataError(std::string(source) + ": expected header column v" + std::to_string(i));
        }
    }
    EmbeddingStore store(dim);
    std::vector<double> values(dim);
    for (const auto& row : table.rows) {
        const auto where = std::string(source) + " row " + std::to_string(row.number);
        if (row.fields.size() != dim + 1) {
            throw DataError(where + ": dimension mismatch, expected " + std::to_string(dim) + " values, found " +
                            std::to_string(row.fields.size() - 1));
        }
        try {
            for (std::size_t i = 0; i < dim; ++i) values[i] = parse_double(row.fields[i + 1]);
            store.add(csv::trim(row.fields[0]), values);
        } catch (const DataError& e) {
            throw DataError(where + ": " + e.what());
        }
    }
    return store;
}

void save_store(const EmbeddingStore& store, const std::filesystem::path& path)
{
    csv::write_text(path, format_store(store));
}

EmbeddingStore load_store(const std::filesystem::path& path)
{
    if (!std::filesystem::exists(path)) throw DataError("file not found: '" + path.string() + "'");
    return parse_store(csv::read_text(path), path.filename().string());
}

} // namespace jobrel
