#pragma once

#include "tfnorm/corpus.hpp"

#include <string_view>

namespace tfnorm {

enum class TopicMeasure { VocabularySize, InformationQuantity };

/// tf_D(w) / l_D; zero for terms the document does not contain.
double mle_doc_prob(const Document& doc, std::string_view term);

/// ctf(w) / l_C; zero for terms outside the collection.
double collection_prob(const CollectionStats& stats, std::string_view term);

/// Number of distinct terms with positive count.
Count vocab_size(const Document& doc);

/// exp of the (natural-log) entropy of the unsmoothed model given by `tf`.
/// Returns exactly the vocabulary size when all counts are equal and is
/// clamped to [1, vocabulary size] otherwise. Requires a positive total.
double information_quantity(const TermCounts& tf);
/// Cached value computed at document construction.
double information_quantity(const Document& doc);

/// tau(D): the number of topics under the chosen measure.
double topic_measure(const Document& doc, TopicMeasure kind);

/// Collection mean of tau under the chosen measure. Throws if the stats do
/// not carry a positive mean for it.
double mean_topic_measure(const CollectionStats& stats, TopicMeasure kind);

/// tau(D) / mean tau.
double normalized_topic_measure(const Document& doc, const CollectionStats& stats,
                                TopicMeasure kind);

/// l_D / tau(D): average term frequency per unit of information.
double informative_verbosity(const Document& doc, TopicMeasure kind);

/// Probability that `term` is specific to the document rather than to the
/// collection:
///   ls * P(w|D) / (ls * P(w|D) + (1 - ls) * P(w|C)),
/// defined as 0 when both probabilities are 0.
double term_specificity(const Document& doc, const CollectionStats& stats, std::string_view term,
                        double lambda_s);
/// Same quantity from precomputed probabilities.
double term_specificity(double p_doc, double p_coll, double lambda_s);

std::string_view to_string(TopicMeasure kind);
TopicMeasure parse_topic_measure(std::string_view name);

} // namespace tfnorm
