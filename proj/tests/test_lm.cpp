#include "fixtures.hpp"

#include "tfnorm/error.hpp"
#include "tfnorm/lm.hpp"
#include "tfnorm/random.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace tfnorm;
using doctest::Approx;
using fixtures::doc;

namespace {

TermCounts random_tf(Rng& rng, std::size_t max_terms, Count max_count) {
    TermCounts tf;
    const auto n = rng.between(1, max_terms);
    for (std::uint64_t i = 0; i < n; ++i) tf["w" + std::to_string(i)] = rng.between(1, max_count);
    return tf;
}

} // namespace

TEST_CASE("MLE and collection probabilities on the sample corpus") {
    const InvertedIndex idx = build_index(fixtures::sample_corpus(), TextPipeline{});
    const Document& d1 = *idx.find("D1");
    const Document& d3 = *idx.find("D3");
    CHECK(mle_doc_prob(d1, "languag") == Approx(1.0 / 3.0));
    CHECK(mle_doc_prob(d3, "languag") == Approx(1.0 / 6.0));
    CHECK(mle_doc_prob(d1, "retriev") == 0.0);
    CHECK(collection_prob(idx.stats(), "languag") == Approx(4.0 / 15.0));
    CHECK(collection_prob(idx.stats(), "zebra") == 0.0);

    const InvertedIndex single = build_index({{"x", "alpha alpha alpha"}}, TextPipeline{});
    CHECK(collection_prob(single.stats(), "alpha") == 1.0);
}

TEST_CASE("vocabulary size on the sample documents") {
    const InvertedIndex idx = build_index(fixtures::sample_corpus(), fixtures::unstemmed());
    CHECK(vocab_size(*idx.find("D1")) == 3);
    CHECK(vocab_size(*idx.find("D2")) == 3);
    CHECK(vocab_size(*idx.find("D3")) == 6);
}

TEST_CASE("information quantity examples") {
    CHECK(information_quantity(TermCounts{{"a", 7}}) == 1.0);
    CHECK(information_quantity(TermCounts{{"a", 1}, {"b", 1}, {"c", 1}}) == 3.0);
    CHECK(information_quantity(TermCounts{{"a", 2}, {"b", 1}, {"c", 1}}) ==
          Approx(std::pow(2.0, 1.5)).epsilon(1e-14));
    CHECK_THROWS_AS(information_quantity(TermCounts{}), Error);

    const InvertedIndex idx = build_index(fixtures::sample_corpus(), fixtures::unstemmed());
    CHECK(topic_measure(*idx.find("D1"), TopicMeasure::VocabularySize) == 3.0);
    CHECK(topic_measure(*idx.find("D1"), TopicMeasure::InformationQuantity) == 3.0);
    CHECK(topic_measure(*idx.find("D3"), TopicMeasure::InformationQuantity) == 6.0);
}

TEST_CASE("information quantity agrees with a base-2 oracle and stays within [1, vocab]") {
    Rng rng(1);
    for (int i = 0; i < 2000; ++i) {
        const TermCounts tf = random_tf(rng, 40, 9);
        const double eps = information_quantity(tf);
        CHECK(eps == Approx(oracle::perplexity(tf)).epsilon(1e-12));
        CHECK(eps >= 1.0);
        CHECK(eps <= static_cast<double>(tf.size()));
        bool uniform = true;
        for (const auto& [t, c] : tf) uniform = uniform && c == tf.begin()->second;
        if (!uniform) CHECK(eps < static_cast<double>(tf.size()));
    }
}

TEST_CASE("information quantity is invariant under uniform scaling") {
    Rng rng(2);
    for (int i = 0; i < 500; ++i) {
        TermCounts tf = random_tf(rng, 30, 6);
        const double base = information_quantity(tf);
        const Count k = rng.between(2, 9);
        for (auto& [t, c] : tf) c *= k;
        CHECK(information_quantity(tf) == Approx(base).epsilon(1e-12));
    }
}

TEST_CASE("normalized topic measure") {
    const Document d1 = build_document("D1", fixtures::kD1, fixtures::unstemmed());
    const Document d3 = build_document("D3", fixtures::kD3, fixtures::unstemmed());
    const auto stats = CollectionStats::compute({d1, d3});
    CHECK(stats.mean_tau_info == 4.5);
    CHECK(normalized_topic_measure(d3, stats, TopicMeasure::InformationQuantity) ==
          Approx(4.0 / 3.0).epsilon(1e-15));

    const auto single = CollectionStats::compute({d3});
    CHECK(normalized_topic_measure(d3, single, TopicMeasure::VocabularySize) == 1.0);

    const auto same = CollectionStats::compute({doc("a", {{"x", 1}, {"y", 2}}), doc("b", {{"z", 4}, {"w", 8}})});
    CHECK(normalized_topic_measure(doc("a", {{"x", 1}, {"y", 2}}), same, TopicMeasure::InformationQuantity) ==
          Approx(1.0).epsilon(1e-15));

    CollectionStats empty;
    CHECK_THROWS_AS(mean_topic_measure(empty, TopicMeasure::InformationQuantity), Error);
}

TEST_CASE("informative verbosity") {
    const Document d1 = build_document("D1", fixtures::kD1, fixtures::unstemmed());
    const Document d2 = build_document("D2", fixtures::kD2, fixtures::unstemmed());
    CHECK(informative_verbosity(d1, TopicMeasure::InformationQuantity) == 1.0);
    CHECK(informative_verbosity(d2, TopicMeasure::InformationQuantity) == Approx(2.0).epsilon(1e-15));
    CHECK(informative_verbosity(doc("x", {{"a", 2}, {"b", 1}, {"c", 1}}), TopicMeasure::InformationQuantity) ==
          Approx(std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("term specificity examples") {
    CHECK(term_specificity(0.2, 0.2, 0.25) == Approx(0.25).epsilon(1e-15));
    CHECK(term_specificity(0.0, 0.2, 0.25) == 0.0);
    CHECK(term_specificity(0.0, 0.0, 0.25) == 0.0);
    CHECK(term_specificity(0.3, 0.1, 0.25) == Approx(0.5).epsilon(1e-15));

    const InvertedIndex idx = build_index(fixtures::sample_corpus(), TextPipeline{});
    const Document& d1 = *idx.find("D1");
    CHECK(term_specificity(d1, idx.stats(), "retriev", 0.25) == 0.0);
    // P(languag|D1) = 1/3, P(languag|C) = 4/15.
    const double expect = 0.25 / 3.0 / (0.25 / 3.0 + 0.75 * 4.0 / 15.0);
    CHECK(term_specificity(d1, idx.stats(), "languag", 0.25) == Approx(expect).epsilon(1e-15));
}

TEST_CASE("term specificity is monotone in the document probability and bounded") {
    Rng rng(3);
    for (int i = 0; i < 1000; ++i) {
        const double pc = 1e-4 + rng.unit();
        const double ls = 0.01 + 0.98 * rng.unit();
        const double p1 = rng.unit();
        const double p2 = p1 + 1e-3 + rng.unit();
        const double s1 = term_specificity(p1, pc, ls);
        const double s2 = term_specificity(p2, pc, ls);
        CHECK(s1 < s2);
        CHECK(s1 >= 0.0);
        CHECK(s2 <= 1.0);
    }
}

TEST_CASE("document and collection models sum to one") {
    const InvertedIndex idx = build_index(fixtures::sample_corpus(), TextPipeline{});
    double coll = 0.0;
    for (const auto& [term, c] : idx.stats().ctf) coll += collection_prob(idx.stats(), term);
    CHECK(coll == Approx(1.0).epsilon(1e-15));
    for (const auto& d : idx.docs()) {
        double sum = 0.0;
        for (const auto& [term, c] : d.tf()) sum += mle_doc_prob(d, term);
        CHECK(sum == Approx(1.0).epsilon(1e-15));
    }
}

TEST_CASE("topic measure names") {
    CHECK(parse_topic_measure("vocab") == TopicMeasure::VocabularySize);
    CHECK(parse_topic_measure("info") == TopicMeasure::InformationQuantity);
    CHECK(to_string(TopicMeasure::InformationQuantity) == "info");
    CHECK_THROWS_AS(parse_topic_measure("entropy"), Error);
}
