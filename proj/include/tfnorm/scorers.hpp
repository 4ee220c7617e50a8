#pragma once

#include "tfnorm/corpus.hpp"
#include "tfnorm/lm.hpp"

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace tfnorm {

enum class Method { JM, Dir, JMV, JMV2, DirV };

std::string_view to_string(Method m);
Method parse_method(std::string_view name);
/// True for the methods smoothed with a fixed lambda (JM, JMV, JMV2).
bool uses_lambda(Method m);

struct SmoothingConfig {
    Method method = Method::Dir;
    double lambda = 0.5;     // JM family, in (0, 1)
    double mu = 1000.0;      // Dir family, > 0
    double lambda_s = 0.25;  // JMV2 term specificity, in (0, 1)
    TopicMeasure topic = TopicMeasure::InformationQuantity;
    /// Weight each query term by its query frequency; false gives set semantics.
    bool weight_by_qtf = true;

    /// Throws when a parameter used by `method` is outside its open interval.
    void validate() const;
};

enum class QueryType { SK, SV, LV };

std::string_view to_string(QueryType t);
QueryType parse_query_type(std::string_view name);

struct Query {
    std::string qid;
    QueryType type = QueryType::SK;
    TermCounts terms;

    /// Runs `text` through the pipeline and counts the resulting terms.
    static Query from_text(std::string qid, std::string_view text, const TextPipeline& pipeline,
                           QueryType type = QueryType::SK);
};

// Individual scoring functions. All sum natural-log contributions over the
// query terms, weighted by query frequency; terms absent from the collection
// are skipped.

double score_jm(const Query& q, const Document& d, const CollectionStats& stats, double lambda,
                bool weight_by_qtf = true);
double score_dir(const Query& q, const Document& d, const CollectionStats& stats, double mu,
                 bool weight_by_qtf = true);
double score_jmv(const Query& q, const Document& d, const CollectionStats& stats, double lambda,
                 TopicMeasure kind, bool weight_by_qtf = true);
double score_jmv2(const Query& q, const Document& d, const CollectionStats& stats, double lambda,
                  double lambda_s, TopicMeasure kind, bool weight_by_qtf = true);
/// JMV2 with the term-specificity exponent supplied by the caller, given
/// (P(w|D), P(w|C)). The plain overload uses term_specificity.
using SpecificityFn = std::function<double(double p_doc, double p_coll)>;
double score_jmv2(const Query& q, const Document& d, const CollectionStats& stats, double lambda,
                  TopicMeasure kind, const SpecificityFn& specificity, bool weight_by_qtf = true);
double score_dirv(const Query& q, const Document& d, const CollectionStats& stats, double mu,
                  TopicMeasure kind, bool weight_by_qtf = true);

/// Dispatches on cfg.method.
double score(const Query& q, const Document& d, const CollectionStats& stats,
             const SmoothingConfig& cfg);

/// Query terms that the collection does not contain (and that scoring skips).
std::vector<std::string> unknown_terms(const Query& q, const CollectionStats& stats);

struct RankedEntry {
    std::string doc_id;
    double score = 0.0;
    std::size_t rank = 0;  // 1-based

    friend bool operator==(const RankedEntry&, const RankedEntry&) = default;
};

struct RankedList {
    std::string qid;
    std::vector<RankedEntry> entries;

    friend bool operator==(const RankedList&, const RankedList&) = default;
};

/// Scores every document containing at least one query term and returns the
/// top k by score, ties broken by ascending doc id. Throws when no query term
/// occurs in the collection.
RankedList rank(const InvertedIndex& index, const Query& q, const SmoothingConfig& cfg,
                std::size_t k);

} // namespace tfnorm
