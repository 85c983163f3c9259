#include "jobrel/pairs.hpp"

#include "jobrel/csv.hpp"
#include "jobrel/error.hpp"
#include "jobrel/random.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <thread>
#include <unordered_map>
#include <unordered_set>

namespace jobrel {

std::string_view region_name(Region r)
{
    switch (r) {
    case Region::Low: return "Low";
    case Region::Medium: return "Medium";
    case Region::High: return "High";
    }
    return "?";
}

void RegionPartition::validate() const
{
    if (!(0.0 < low_upper && low_upper < medium_upper && medium_upper < 1.0)) {
        throw UsageError("region partition requires 0 < low_upper < medium_upper < 1");
    }
}

Region assign_region(double score, const RegionPartition& partition)
{
    if (!(score >= 0.0 && score <= 1.0)) {
        throw DataError("STR score " + format_double(score) + " outside [0, 1]");
    }
    if (score < partition.low_upper) return Region::Low;
    if (score < partition.medium_upper) return Region::Medium;
    return Region::High;
}

std::vector<STRPair> build_pairs(const EmbeddingStore& store, const std::vector<std::string>& job_ids,
                                 const PairSampling& sampling, std::size_t threads)
{
    const std::size_t cap = sampling.per_anchor_cap;
    if (cap < 1) throw UsageError("build_pairs: per-anchor cap must be >= 1");
    if (job_ids.size() < 2 || cap > job_ids.size() - 1) {
        throw UsageError("build_pairs: cap " + std::to_string(cap) + " exceeds population - 1 (" +
                         std::to_string(job_ids.empty() ? 0 : job_ids.size() - 1) + ")");
    }
    {
        std::unordered_set<std::string> seen;
        for (const auto& id : job_ids) {
            if (!store.contains(id)) throw DataError("build_pairs: unknown job id '" + id + "'");
            if (!seen.insert(id).second) throw DataError("build_pairs: duplicate job id '" + id + "'");
        }
    }

    const std::size_t n_top = (cap + 2) / 3;
    const std::size_t n_bottom = (cap + 1) / 3;
    const std::size_t n_middle = cap / 3;
    const std::size_t n = job_ids.size();

    std::vector<std::vector<STRPair>> per_anchor(n);
    auto work = [&](std::size_t a) {
        const auto anchor = store.at(job_ids[a]);
        struct Candidate {
            double score;
            const std::string* id;
        };
        std::vector<Candidate> ranked;
        ranked.reserve(n - 1);
        for (std::size_t b = 0; b < n; ++b) {
            if (b == a) continue;
            ranked.push_back({str_score(anchor, store.at(job_ids[b])), &job_ids[b]});
        }
        std::sort(ranked.begin(), ranked.end(), [](const Candidate& x, const Candidate& y) {
            if (x.score != y.score) return x.score > y.score;
            return *x.id < *y.id;
        });

        std::vector<std::size_t> chosen;
        for (std::size_t i = 0; i < n_top; ++i) chosen.push_back(i);
        for (std::size_t i = 0; i < n_bottom; ++i) chosen.push_back(ranked.size() - 1 - i);
        const std::size_t middle_begin = n_top;
        const std::size_t middle_end = ranked.size() - n_bottom;
        if (n_middle > 0 && middle_end > middle_begin) {
            Rng rng(sampling.seed, "pairs/" + job_ids[a]);
            for (auto i : rng.sample_indices(middle_end - middle_begin, n_middle)) {
                chosen.push_back(middle_begin + i);
            }
        }
        std::sort(chosen.begin(), chosen.end());
        for (auto i : chosen) per_anchor[a].push_back({job_ids[a], *ranked[i].id, ranked[i].score});
    };

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, n);
    std::vector<std::exception_ptr> errors(threads);
    {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                try {
                    for (std::size_t a = t; a < n; a += threads) work(a);
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        }
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    std::vector<STRPair> out;
    out.reserve(n * cap);
    for (auto& v : per_anchor) std::move(v.begin(), v.end(), std::back_inserter(out));
    return out;
}

Split split_disjoint(const std::vector<JobRecord>& jobs, double eval_fraction, std::uint64_t seed)
{
    if (!(eval_fraction > 0.0 && eval_fraction < 1.0)) {
        throw UsageError("split: eval_fraction must lie in (0, 1)");
    }
    if (jobs.size() < 2) throw DataError("split: at least 2 jobs required");

    // distinct titles in first-seen order, then shuffled
    std::vector<std::string> titles;
    std::map<std::string, std::vector<std::size_t>> members;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        auto key = normalize_text(jobs[i].title);
        auto [it, inserted] = members.try_emplace(key);
        if (inserted) titles.push_back(key);
        it->second.push_back(i);
    }
    Rng rng(seed, "split");
    rng.shuffle(titles);

    const auto n_eval = static_cast<std::size_t>(std::llround(eval_fraction * static_cast<double>(titles.size())));
    if (n_eval == 0 || n_eval >= titles.size()) {
        throw DataError("split: eval_fraction " + format_double(eval_fraction) + " over " +
                        std::to_string(titles.size()) + " distinct titles leaves one side empty");
    }
    std::vector<bool> is_eval(jobs.size(), false);
    for (std::size_t i = 0; i < n_eval; ++i) {
        for (auto j : members[titles[i]]) is_eval[j] = true;
    }
    Split split;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        (is_eval[i] ? split.eval_ids : split.train_ids).push_back(jobs[i].id);
    }
    return split;
}

SplitPairs filter_pairs(const std::vector<STRPair>& pairs, const Split& split)
{
    const std::unordered_set<std::string> train(split.train_ids.begin(), split.train_ids.end());
    const std::unordered_set<std::string> eval(split.eval_ids.begin(), split.eval_ids.end());
    SplitPairs out;
    for (const auto& p : pairs) {
        if (train.contains(p.anchor_id) && train.contains(p.sample_id)) {
            out.train.push_back(p);
        } else if (eval.contains(p.anchor_id) && eval.contains(p.sample_id)) {
            out.eval.push_back(p);
        } else {
            ++out.dropped_cross;
        }
    }
    return out;
}

std::size_t RegionQuota::of(Region r) const
{
    switch (r) {
    case Region::Low: return low;
    case Region::Medium: return medium;
    case Region::High: return high;
    }
    return 0;
}

StratifiedPairs stratify(const std::vector<STRPair>& pairs, const RegionPartition& partition,
                         const RegionQuota& quota, std::uint64_t seed)
{
    for (auto r : kRegions) {
        if (quota.of(r) < 1) throw UsageError("stratify: quotas must be >= 1");
    }
    std::array<std::vector<std::size_t>, 3> members;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        members[static_cast<int>(assign_region(pairs[i].score, partition))].push_back(i);
    }
    StratifiedPairs out{};
    std::vector<std::size_t> keep;
    for (auto r : kRegions) {
        const auto& m = members[static_cast<int>(r)];
        Rng rng(seed, std::string("stratify/") + std::string(region_name(r)));
        const auto picked = rng.sample_indices(m.size(), quota.of(r));
        out.available[static_cast<int>(r)] = m.size();
        out.counts[static_cast<int>(r)] = picked.size();
        for (auto i : picked) keep.push_back(m[i]);
    }
    std::sort(keep.begin(), keep.end());
    out.pairs.reserve(keep.size());
    for (auto i : keep) out.pairs.push_back(pairs[i]);
    return out;
}

std::string format_pairs(const std::vector<TitlePair>& pairs)
{
    std::string out = "anchor,sample,score\n";
    for (const auto& p : pairs) {
        out += csv::escape(p.anchor);
        out.push_back(',');
        out += csv::escape(p.sample);
        out.push_back(',');
        out += format_fixed(p.score, 9);
        out.push_back('\n');
    }
    return out;
}

std::vector<TitlePair> parse_pairs(std::string_view csv_text, std::string_view source)
{
    const auto table = csv::parse(csv_text);
    const auto a_col = table.require_column("anchor", source);
    const auto s_col = table.require_column("sample", source);
    const auto score_col = table.require_column("score", source);
    const auto width = std::max({a_col, s_col, score_col}) + 1;

    std::vector<TitlePair> out;
    out.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        const auto where = std::string(source) + " row " + std::to_string(row.number);
        if (row.fields.size() < width) throw DataError(where + ": malformed row, too few fields");
        TitlePair p{csv::trim(row.fields[a_col]), csv::trim(row.fields[s_col]), 0.0};
        try {
            p.score = parse_double(row.fields[score_col]);
        } catch (const DataError& e) {
            throw DataError(where + ": " + e.what());
        }
        if (!(p.score >= 0.0 && p.score <= 1.0)) {
            throw DataError(where + ": score " + row.fields[score_col] + " outside [0, 1]");
        }
        if (p.anchor.empty() || p.sample.empty()) throw DataError(where + ": empty anchor or sample");
        out.push_back(std::move(p));
    }
    return out;
}

void write_pairs(const std::vector<TitlePair>& pairs, const std::filesystem::path& path)
{
    csv::write_text(path, format_pairs(pairs));
}

std::vector<TitlePair> read_pairs(const std::filesystem::path& path)
{
    if (!std::filesystem::exists(path)) throw DataError("file not found: '" + path.string() + "'");
    return parse_pairs(csv::read_text(path), path.filename().string());
}

std::vector<TitlePair> to_title_pairs(const std::vector<STRPair>& pairs, const std::vector<JobRecord>& jobs)
{
    std::unordered_map<std::string, const std::string*> title_of;
    for (const auto& j : jobs) title_of.emplace(j.id, &j.title);
    std::vector<TitlePair> out;
    out.reserve(pairs.size());
    for (const auto& p : pairs) {
        auto a = title_of.find(p.anchor_id);
        auto s = title_of.find(p.sample_id);
        if (a == title_of.end() || s == title_of.end()) {
            throw DataError("pair references unknown job '" +
                            (a == title_of.end() ? p.anchor_id : p.sample_id) + "'");
        }
        out.push_back({*a->second, *s->second, p.score});
    }
    return out;
}

std::string format_title_ids(const std::vector<JobRecord>& jobs, const std::vector<std::string>& ids)
{
    std::unordered_map<std::string, const JobRecord*> by_id;
    for (const auto& j : jobs) by_id.emplace(j.id, &j);
    std::string out = "title,id\n";
    for (const auto& id : ids) {
        auto it = by_id.find(id);
        if (it == by_id.end()) throw DataError("unknown job id '" + id + "'");
        const std::array<std::string, 2> f{it->second->title, id};
        out += csv::format_row(f);
    }
    return out;
}

} // namespace jobrel
