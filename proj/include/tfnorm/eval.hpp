#pragma once

#include "tfnorm/corpus.hpp"
#include "tfnorm/scorers.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tfnorm {

// ---------------------------------------------------------------------------
// Relevance judgments

/// (qid, doc_id) -> grade; grade > 0 means relevant.
class Qrels {
public:
    /// Lines of `qid iteration doc_id grade`. Duplicate pairs are an error.
    static Qrels parse(std::istream& in);
    static Qrels load(const std::filesystem::path& path);

    /// Throws on a duplicate pair or negative grade.
    void add(const std::string& qid, const std::string& doc_id, int grade);

    int grade(std::string_view qid, std::string_view doc_id) const;
    bool relevant(std::string_view qid, std::string_view doc_id) const {
        return grade(qid, doc_id) > 0;
    }
    std::size_t num_relevant(std::string_view qid) const;
    bool has_query(std::string_view qid) const { return judgments_.find(qid) != judgments_.end(); }
    std::vector<std::string> qids() const;

    void write(std::ostream& out) const;

private:
    std::map<std::string, std::map<std::string, int, std::less<>>, std::less<>> judgments_;
};

// ---------------------------------------------------------------------------
// Runs

struct Run {
    std::string tag = "tfnorm";
    std::map<std::string, RankedList, std::less<>> lists;  // by qid

    friend bool operator==(const Run&, const Run&) = default;
};

/// `qid Q0 doc_id rank score tag`, one line per entry, queries in qid order.
/// Scores use the shortest decimal form that reads back to the same double.
void write_trec_run(std::ostream& out, const Run& run);
void write_trec_run(const std::filesystem::path& path, const Run& run);
Run parse_trec_run(std::istream& in);
Run parse_trec_run(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Metrics

/// Sum of precision at each relevant retrieved document divided by the
/// number of relevant documents in the qrels; nullopt if there are none.
std::optional<double> average_precision(const RankedList& ranked, const Qrels& qrels,
                                        std::string_view qid);

/// Relevant documents among the first k, divided by k.
double precision_at_k(const RankedList& ranked, const Qrels& qrels, std::string_view qid,
                      std::size_t k);

struct QueryMetrics {
    std::string qid;
    double ap = 0.0;
    double p5 = 0.0;
    double p10 = 0.0;
    std::size_t relevant = 0;
    std::size_t relevant_retrieved = 0;
};

struct EvalReport {
    std::vector<QueryMetrics> per_query;  // qid order
    double map = 0.0;
    double p5 = 0.0;
    double p10 = 0.0;
    std::size_t excluded_no_relevant = 0;
    std::vector<std::string> warnings;
    std::string error;  // set when no query could be evaluated

    std::size_t num_queries() const noexcept { return per_query.size(); }
    std::vector<double> column(std::string_view metric) const;  // "map", "p5" or "p10"
};

/// Evaluates the queries present in both the run and the qrels; queries
/// without relevant documents are excluded and counted.
EvalReport evaluate_run(const Run& run, const Qrels& qrels);

void write_report_text(std::ostream& out, const EvalReport& report);
void write_report_json(std::ostream& out, const EvalReport& report);

// ---------------------------------------------------------------------------
// Topics

struct Topic {
    std::string qid;
    std::string title;
    std::string desc;
    std::string narr;
};

struct TopicQueries {
    std::string qid;
    Query sk;  // title
    Query sv;  // description
    Query lv;  // title + description + narrative

    const Query& get(QueryType t) const;
};

/// TREC topic markup: <top> <num> <title> <desc> <narr> </top>. Field tags
/// may be closed or left open; field labels ("Number:", "Description:",
/// "Narrative:") are dropped. Throws ParseError with a line number.
std::vector<Topic> parse_topics(std::istream& in);
std::vector<Topic> parse_topics(const std::filesystem::path& path);
std::vector<TopicQueries> make_queries(const std::vector<Topic>& topics, const TextPipeline& pipeline);

// ---------------------------------------------------------------------------
// Batch retrieval and parameter sweeps

/// Ranks every query; queries with no term in the collection are skipped
/// with a warning.
Run run_batch(const InvertedIndex& index, const std::vector<Query>& queries,
              const SmoothingConfig& cfg, std::size_t k, std::string tag, unsigned workers = 1,
              std::vector<std::string>* warnings = nullptr);

struct SweepGrid {
    std::vector<double> lambdas;
    std::vector<double> mus;

    /// 20 lambda values over [0.01, 0.99] and 22 log-spaced mu values over [100, 30000].
    static SweepGrid defaults();
    /// Ascending, lambdas in (0, 1), mus positive.
    void validate() const;
};

struct SweepRow {
    double parameter = 0.0;
    double map = 0.0;
    double p5 = 0.0;
    double p10 = 0.0;
};

struct SweepResult {
    SmoothingConfig base;
    std::vector<SweepRow> rows;
    std::size_t best = 0;  // argmax MAP, ties to the smaller parameter

    const SweepRow& best_row() const { return rows.at(best); }
};

/// One batch + evaluation per grid point of the method's own parameter
/// (lambda for the JM family, mu for the Dir family).
SweepResult sweep(const InvertedIndex& index, const std::vector<Query>& queries, const Qrels& qrels,
                  const SmoothingConfig& base, const SweepGrid& grid, std::size_t k,
                  unsigned workers = 1);

/// Tab-separated: method, parameter, map, p5, p10, best.
void write_sweep_table(std::ostream& out, const SweepResult& result);

} // namespace tfnorm
