#pragma once

#include "tfnorm/corpus.hpp"
#include "tfnorm/eval.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace tfnorm {

/// Parameters of the synthetic test collection.
///
/// Each of the `topics` topics owns `core_terms` topical terms, drawn from a
/// shared pool of `core_pool` words (0 gives every topic a disjoint set), so
/// topics overlap in vocabulary. A background vocabulary is shared by all.
/// Text is built from segments: a segment about topic t is
/// `segment_min..segment_max` tokens, each a core term of t (weighted
/// 1/rank) with probability `topical_share`, a core term of some other topic
/// with probability `stray_rate`, and a Zipf-distributed background term
/// otherwise. With probability `mention_rate` a segment also mentions the
/// title terms of one unrelated topic in passing, once each.
///
/// Documents come in three kinds:
///   normal         one segment;
///   verbose        one segment repeated 2..4 times verbatim;
///   multi-topical  3..5 segments about distinct topics.
/// A document is relevant to every topic one of its segments is about.
/// Topic titles are the two or three highest-weighted core terms;
/// descriptions and narratives add more core terms, background terms and
/// boilerplate request words.
struct SyntheticOptions {
    std::uint64_t seed = 0;
    std::size_t documents = 1000;
    std::size_t topics = 50;
    std::size_t core_terms = 8;
    std::size_t core_pool = 150;
    std::size_t background_terms = 400;
    std::size_t segment_min = 30;
    std::size_t segment_max = 60;
    double topical_share = 0.15;
    double stray_rate = 0.03;
    double mention_rate = 0.5;
    double verbose_share = 0.2;
    double multi_share = 0.3;
};

struct SyntheticCollection {
    std::vector<RawDocument> docs;
    std::vector<Topic> topics;
    Qrels qrels;

    /// Writes corpus.tsv, topics.txt and qrels.txt into `dir`.
    void write(const std::filesystem::path& dir) const;
};

SyntheticCollection make_synthetic_collection(const SyntheticOptions& opts = {});

} // namespace tfnorm
