#include "tfnorm/scorers.hpp"

#include "tfnorm/error.hpp"

#include <algorithm>
#include <cmath>

namespace tfnorm {

std::string_view to_string(Method m) {
    switch (m) {
        case Method::JM: return "jm";
        case Method::Dir: return "dir";
        case Method::JMV: return "jmv";
        case Method::JMV2: return "jmv2";
        case Method::DirV: return "dirv";
    }
    return "?";
}

Method parse_method(std::string_view name) {
    for (auto m : {Method::JM, Method::Dir, Method::JMV, Method::JMV2, Method::DirV})
        if (name == to_string(m)) return m;
    throw Error("unknown method '" + std::string(name) + "' (expected jm, dir, jmv, jmv2 or dirv)");
}

bool uses_lambda(Method m) { return m == Method::JM || m == Method::JMV || m == Method::JMV2; }

void SmoothingConfig::validate() const {
    auto open_unit = [](double v) { return v > 0.0 && v < 1.0; };
    if (uses_lambda(method) && !open_unit(lambda))
        throw Error("lambda must lie in (0, 1), got " + std::to_string(lambda));
    if (!uses_lambda(method) && !(mu > 0.0 && std::isfinite(mu)))
        throw Error("mu must be positive, got " + std::to_string(mu));
    if (method == Method::JMV2 && !open_unit(lambda_s))
        throw Error("lambda_s must lie in (0, 1), got " + std::to_string(lambda_s));
}

std::string_view to_string(QueryType t) {
    switch (t) {
        case QueryType::SK: return "sk";
        case QueryType::SV: return "sv";
        case QueryType::LV: return "lv";
    }
    return "?";
}

QueryType parse_query_type(std::string_view name) {
    if (name == "sk") return QueryType::SK;
    if (name == "sv") return QueryType::SV;
    if (name == "lv") return QueryType::LV;
    throw Error("unknown query type '" + std::string(name) + "' (expected sk, sv or lv)");
}

Query Query::from_text(std::string qid, std::string_view text, const TextPipeline& pipeline,
                       QueryType type) {
    Query q{std::move(qid), type, {}};
    for (auto& t : pipeline.analyze(text)) ++q.terms[std::move(t)];
    return q;
}

namespace {

// Sums weight * f(p_doc, p_coll) over the query terms the collection knows.
template <class F>
double sum_terms(const Query& q, const Document& d, const CollectionStats& stats,
                 bool weight_by_qtf, F&& f) {
    const double len_d = static_cast<double>(d.length());
    const double len_c = static_cast<double>(stats.total_length);
    double total = 0.0;
    for (const auto& [term, qtf] : q.terms) {
        const Count cf = stats.cf(term);
        if (cf == 0) continue;
        const double w = weight_by_qtf ? static_cast<double>(qtf) : 1.0;
        const double p_doc = static_cast<double>(d.tf(term)) / len_d;
        const double p_coll = static_cast<double>(cf) / len_c;
        total += w * f(p_doc, p_coll);
    }
    return total;
}

// log((1 - l)/l * scale * p_doc / p_coll + 1)
double jm_term(double odds, double scale, double p_doc, double p_coll) {
    return std::log1p(odds * scale * (p_doc / p_coll));
}

// log((1 - lD) * p_doc / p_coll + lD)
double dir_term(double lambda_d, double p_doc, double p_coll) {
    return std::log((1.0 - lambda_d) * (p_doc / p_coll) + lambda_d);
}

} // namespace

double score_jm(const Query& q, const Document& d, const CollectionStats& stats, double lambda,
                bool weight_by_qtf) {
    const double odds = (1.0 - lambda) / lambda;
    return sum_terms(q, d, stats, weight_by_qtf,
                     [&](double pd, double pc) { return jm_term(odds, 1.0, pd, pc); });
}

double score_dir(const Query& q, const Document& d, const CollectionStats& stats, double mu,
                 bool weight_by_qtf) {
    const double lambda_d = mu / (static_cast<double>(d.length()) + mu);
    return sum_terms(q, d, stats, weight_by_qtf,
                     [&](double pd, double pc) { return dir_term(lambda_d, pd, pc); });
}

double score_jmv(const Query& q, const Document& d, const CollectionStats& stats, double lambda,
                 TopicMeasure kind, bool weight_by_qtf) {
    const double odds = (1.0 - lambda) / lambda;
    const double tau_n = normalized_topic_measure(d, stats, kind);
    return sum_terms(q, d, stats, weight_by_qtf,
                     [&](double pd, double pc) { return jm_term(odds, tau_n, pd, pc); });
}

double score_jmv2(const Query& q, const Document& d, const CollectionStats& stats, double lambda,
                  TopicMeasure kind, const SpecificityFn& specificity, bool weight_by_qtf) {
    const double odds = (1.0 - lambda) / lambda;
    const double tau_n = normalized_topic_measure(d, stats, kind);
    return sum_terms(q, d, stats, weight_by_qtf, [&](double pd, double pc) {
        return jm_term(odds, std::pow(tau_n, specificity(pd, pc)), pd, pc);
    });
}

double score_jmv2(const Query& q, const Document& d, const CollectionStats& stats, double lambda,
                  double lambda_s, TopicMeasure kind, bool weight_by_qtf) {
    return score_jmv2(
        q, d, stats, lambda, kind,
        [lambda_s](double pd, double pc) { return term_specificity(pd, pc, lambda_s); },
        weight_by_qtf);
}

double score_dirv(const Query& q, const Document& d, const CollectionStats& stats, double mu,
                  TopicMeasure kind, bool weight_by_qtf) {
    const double lambda_d = mu / (topic_measure(d, kind) + mu);
    return sum_terms(q, d, stats, weight_by_qtf,
                     [&](double pd, double pc) { return dir_term(lambda_d, pd, pc); });
}

double score(const Query& q, const Document& d, const CollectionStats& stats,
             const SmoothingConfig& cfg) {
    switch (cfg.method) {
        case Method::JM: return score_jm(q, d, stats, cfg.lambda, cfg.weight_by_qtf);
        case Method::Dir: return score_dir(q, d, stats, cfg.mu, cfg.weight_by_qtf);
        case Method::JMV: return score_jmv(q, d, stats, cfg.lambda, cfg.topic, cfg.weight_by_qtf);
        case Method::JMV2:
            return score_jmv2(q, d, stats, cfg.lambda, cfg.lambda_s, cfg.topic, cfg.weight_by_qtf);
        case Method::DirV: return score_dirv(q, d, stats, cfg.mu, cfg.topic, cfg.weight_by_qtf);
    }
    return 0.0;
}

std::vector<std::string> unknown_terms(const Query& q, const CollectionStats& stats) {
    std::vector<std::string> out;
    for (const auto& [term, n] : q.terms)
        if (stats.cf(term) == 0) out.push_back(term);
    return out;
}

RankedList rank(const InvertedIndex& index, const Query& q, const SmoothingConfig& cfg,
                std::size_t k) {
    cfg.validate();
    if (k == 0) throw Error("retrieval depth k must be at least 1");

    std::vector<std::uint32_t> candidates;
    for (const auto& [term, n] : q.terms)
        for (const auto& p : index.postings(term)) candidates.push_back(p.doc);
    if (candidates.empty())
        throw Error("query '" + q.qid + "' has no terms that occur in the collection");
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    const auto& docs = index.docs();
    std::vector<std::pair<double, std::uint32_t>> scored;
    scored.reserve(candidates.size());
    for (auto i : candidates) scored.emplace_back(score(q, docs[i], index.stats(), cfg), i);

    // Documents are stored in id order, so the index breaks ties by id.
    auto better = [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first > b.first : a.second < b.second;
    };
    const std::size_t keep = std::min(k, scored.size());
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(keep),
                      scored.end(), better);

    RankedList out{q.qid, {}};
    out.entries.reserve(keep);
    for (std::size_t r = 0; r < keep; ++r)
        out.entries.push_back({docs[scored[r].second].id(), scored[r].first, r + 1});
    return out;
}

} // namespace tfnorm
