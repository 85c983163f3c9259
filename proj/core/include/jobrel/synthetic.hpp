#pragma once

#include "jobrel/corpus.hpp"

#include <cstddef>
#include <cstdint>

namespace jobrel {

struct SyntheticCorpusConfig {
    std::size_t jobs = 200;
    std::size_t skills = 120;
    std::uint64_t seed = 42;
};

/// Templated corpus over 20 role families. Skills are laid out as one
/// category per family, then 20 cross-cutting generic skills, then family
/// skills round-robin until `skills` is reached. Each job description
/// starts with two or three family-skill sentences (one slot sometimes
/// taken by a generic skill) followed by boilerplate.
Corpus generate_corpus(const SyntheticCorpusConfig& config);

} // namespace jobrel
