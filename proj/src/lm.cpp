#include "tfnorm/lm.hpp"

#include "tfnorm/error.hpp"

#include <algorithm>
#include <cmath>

namespace tfnorm {

double mle_doc_prob(const Document& doc, std::string_view term) {
    return static_cast<double>(doc.tf(term)) / static_cast<double>(doc.length());
}

double collection_prob(const CollectionStats& stats, std::string_view term) {
    if (stats.total_length == 0) return 0.0;
    return static_cast<double>(stats.cf(term)) / static_cast<double>(stats.total_length);
}

Count vocab_size(const Document& doc) { return doc.vocab_size(); }

double information_quantity(const TermCounts& tf) {
    Count total = 0;
    Count first = 0;
    bool uniform = true;
    std::size_t n = 0;
    for (const auto& [term, c] : tf) {
        if (c == 0) continue;
        if (n == 0) first = c;
        uniform = uniform && c == first;
        total += c;
        ++n;
    }
    if (total == 0) throw Error("information quantity of an empty document");
    const auto size = static_cast<double>(n);
    if (uniform) return size;

    const auto len = static_cast<double>(total);
    double entropy = 0.0;
    for (const auto& [term, c] : tf) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / len;
        entropy -= p * std::log(p);
    }
    return std::clamp(std::exp(entropy), 1.0, size);
}

double information_quantity(const Document& doc) { return doc.info_quantity(); }

double topic_measure(const Document& doc, TopicMeasure kind) {
    switch (kind) {
        case TopicMeasure::VocabularySize: return static_cast<double>(doc.vocab_size());
        case TopicMeasure::InformationQuantity: return doc.info_quantity();
    }
    return 0.0;
}

double mean_topic_measure(const CollectionStats& stats, TopicMeasure kind) {
    const double mean =
        kind == TopicMeasure::VocabularySize ? stats.mean_tau_vocab : stats.mean_tau_info;
    if (!(mean > 0.0) || !std::isfinite(mean))
        throw Error("collection statistics carry no mean for topic measure '" +
                    std::string(to_string(kind)) + "'");
    return mean;
}

double normalized_topic_measure(const Document& doc, const CollectionStats& stats,
                                TopicMeasure kind) {
    return topic_measure(doc, kind) / mean_topic_measure(stats, kind);
}

double informative_verbosity(const Document& doc, TopicMeasure kind) {
    return static_cast<double>(doc.length()) / topic_measure(doc, kind);
}

double term_specificity(double p_doc, double p_coll, double lambda_s) {
    const double num = lambda_s * p_doc;
    const double den = num + (1.0 - lambda_s) * p_coll;
    return den > 0.0 ? num / den : 0.0;
}

double term_specificity(const Document& doc, const CollectionStats& stats, std::string_view term,
                        double lambda_s) {
    return term_specificity(mle_doc_prob(doc, term), collection_prob(stats, term), lambda_s);
}

std::string_view to_string(TopicMeasure kind) {
    return kind == TopicMeasure::VocabularySize ? "vocab" : "info";
}

TopicMeasure parse_topic_measure(std::string_view name) {
    if (name == "vocab") return TopicMeasure::VocabularySize;
    if (name == "info") return TopicMeasure::InformationQuantity;
    throw Error("unknown topic measure '" + std::string(name) + "' (expected vocab or info)");
}

} // namespace tfnorm
