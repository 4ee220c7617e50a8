#include "tfnorm/constraints.hpp"

#include "tfnorm/error.hpp"
#include "tfnorm/parallel.hpp"
#include "tfnorm/random.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <set>

namespace tfnorm {

std::string_view to_string(Constraint c) { return c == Constraint::VNC ? "VNC" : "TNC"; }

Document make_k_verbose(const Document& doc, Count k) {
    if (k < 1) throw Error("verbosity factor must be at least 1");
    TermCounts tf = doc.tf();
    for (auto& [term, n] : tf) n *= k;
    return Document::from_counts(doc.id(), std::move(tf));
}

Document make_n_topical(const Document& doc, Count n, const std::vector<std::string>& fillers) {
    if (n < 1) throw Error("topicality factor must be at least 1");
    const Count c = doc.tf().begin()->second;
    for (const auto& [term, count] : doc.tf())
        if (count != c)
            throw Error("N-topical extension needs a document with uniform term counts; '" +
                        doc.id() + "' is not uniform");
    if (fillers.size() != (n - 1) * doc.vocab_size())
        throw Error("N-topical extension needs exactly (N-1) * vocabulary filler terms");
    TermCounts tf = doc.tf();
    for (const auto& f : fillers) {
        if (!tf.emplace(f, c).second)
            throw Error("filler term '" + f + "' is not fresh for document '" + doc.id() + "'");
    }
    return Document::from_counts(doc.id(), std::move(tf));
}

Document ConstraintInstance::transformed(Constraint c) const {
    return c == Constraint::VNC ? make_k_verbose(doc, factor) : make_n_topical(doc, factor, fillers);
}

// ---------------------------------------------------------------------------
// Instance generation

namespace {

std::string numbered(const char* prefix, std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%03zu", prefix, i);
    return buf;
}

template <class T>
const T& pick(Rng& rng, const std::vector<T>& v) {
    return v[rng.below(v.size())];
}

bool is_uniform(const Document& d) {
    const Count c = d.tf().begin()->second;
    return std::all_of(d.tf().begin(), d.tf().end(), [c](const auto& kv) { return kv.second == c; });
}

// Small random corpus over a closed vocabulary. Roughly half the documents
// have uniform counts; the rest mix counts, sometimes with a dominant term.
std::vector<Document> random_corpus(Rng& rng, const SuiteOptions& opts) {
    const std::size_t n_terms = rng.between(20, std::max<std::size_t>(20, opts.max_terms));
    const std::size_t n_docs = rng.between(5, std::max<std::size_t>(5, opts.max_docs));
    std::vector<Document> docs;
    for (std::size_t i = 0; i < n_docs; ++i) {
        const std::size_t vocab = rng.between(1, std::min<std::size_t>(30, n_terms));
        std::set<std::size_t> chosen;
        while (chosen.size() < vocab) chosen.insert(rng.below(n_terms));
        TermCounts tf;
        const bool uniform = i == 0 || rng.chance(0.5);
        const Count c = rng.between(1, 4);
        for (auto t : chosen) tf[numbered("t", t)] = uniform ? c : rng.between(1, 6);
        if (!uniform && rng.chance(0.3)) tf.begin()->second += rng.between(10, 40);
        docs.push_back(Document::from_counts(numbered("d", i), std::move(tf)));
    }
    return docs;
}

Query random_query(Rng& rng, const Document& doc, const std::vector<std::string>& vocab,
                   std::size_t id) {
    std::vector<std::string> doc_terms;
    for (const auto& [t, n] : doc.tf()) doc_terms.push_back(t);
    Query q{numbered("q", id), QueryType::SK, {}};
    ++q.terms[pick(rng, doc_terms)];
    const std::size_t extra = rng.below(4);
    for (std::size_t i = 0; i < extra; ++i)
        ++q.terms[rng.chance(0.5) ? pick(rng, doc_terms) : pick(rng, vocab)];
    return q;
}

std::vector<ConstraintInstance> intro_instances(Constraint c) {
    TextPipeline plain;
    plain.stemming = false;
    std::vector<Document> docs{
        build_document("D1", "Language modeling approach", plain),
        build_document("D2", "Language modeling approach Language modeling approach", plain),
        build_document("D3", "Information retrieval model Language modeling approach", plain),
    };
    auto stats = std::make_shared<const CollectionStats>(CollectionStats::compute(docs));
    ConstraintInstance inst{stats, "intro", docs[0],
                            Query::from_text("intro", "language modeling approach", plain), 2, {}};
    if (c == Constraint::TNC) inst.fillers = {"information", "model", "retrieval"};
    return {inst};
}

} // namespace

std::vector<ConstraintInstance> generate_instances(Constraint c, const SuiteOptions& opts) {
    auto out = intro_instances(c);
    Rng rng(opts.seed * 2 + (c == Constraint::VNC ? 0 : 1));
    for (std::size_t ci = 0; ci < opts.corpora; ++ci) {
        auto docs = random_corpus(rng, opts);
        auto stats = std::make_shared<const CollectionStats>(CollectionStats::compute(docs));
        std::vector<std::string> vocab;
        for (const auto& [t, n] : stats->ctf) vocab.push_back(t);
        std::vector<const Document*> eligible;
        for (const auto& d : docs)
            if (c == Constraint::VNC || is_uniform(d)) eligible.push_back(&d);
        const std::string label = "synthetic-" + std::to_string(ci);

        for (std::size_t k = 0; k < opts.instances_per_corpus; ++k) {
            const Document& doc = *pick(rng, eligible);
            ConstraintInstance inst{stats, label, doc, random_query(rng, doc, vocab, k), 1, {}};
            if (c == Constraint::VNC) {
                inst.factor = rng.between(2, 5);
            } else {
                inst.factor = rng.between(2, 4);
                const std::size_t need = (inst.factor - 1) * doc.vocab_size();
                std::vector<std::string> pool;
                for (const auto& t : vocab)
                    if (doc.tf(t) == 0 && !inst.query.terms.contains(t)) pool.push_back(t);
                // Fisher-Yates with the portable generator.
                for (std::size_t i = pool.size(); i > 1; --i) std::swap(pool[i - 1], pool[rng.below(i)]);
                for (std::size_t i = 0; pool.size() < need; ++i) pool.push_back(numbered("fill", i));
                pool.resize(need);
                inst.fillers = std::move(pool);
            }
            out.push_back(std::move(inst));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Checking

namespace {

std::string describe(const SmoothingConfig& cfg) {
    char buf[128];
    switch (cfg.method) {
        case Method::JM: std::snprintf(buf, sizeof buf, "lambda=%g", cfg.lambda); break;
        case Method::JMV:
            std::snprintf(buf, sizeof buf, "lambda=%g tau=%s", cfg.lambda,
                          std::string(to_string(cfg.topic)).c_str());
            break;
        case Method::JMV2:
            std::snprintf(buf, sizeof buf, "lambda=%g lambda_s=%g tau=%s", cfg.lambda, cfg.lambda_s,
                          std::string(to_string(cfg.topic)).c_str());
            break;
        case Method::Dir: std::snprintf(buf, sizeof buf, "mu=%g", cfg.mu); break;
        case Method::DirV:
            std::snprintf(buf, sizeof buf, "mu=%g tau=%s", cfg.mu,
                          std::string(to_string(cfg.topic)).c_str());
            break;
    }
    return buf;
}

std::string join_terms(const Query& q) {
    std::string s;
    for (const auto& [t, n] : q.terms)
        for (Count i = 0; i < n; ++i) s += (s.empty() ? "" : " ") + t;
    return s;
}

} // namespace

ConstraintReport check_constraint(const std::vector<SmoothingConfig>& settings, Constraint c,
                                  const std::vector<ConstraintInstance>& instances,
                                  double tolerance) {
    if (settings.empty()) throw Error("check_constraint needs at least one scorer setting");
    ConstraintReport rep;
    rep.scorer = std::string(to_string(settings.front().method));
    rep.constraint = c;
    Witness worst;
    for (const auto& cfg : settings) {
        if (cfg.method != settings.front().method)
            throw Error("check_constraint settings must share one method");
        cfg.validate();
    }
    for (const auto& inst : instances) {
        const Document moved = inst.transformed(c);
        for (const auto& cfg : settings) {
            const double a = score(inst.query, inst.doc, *inst.stats, cfg);
            const double b = score(inst.query, moved, *inst.stats, cfg);
            const double r = std::abs(a - b);
            ++rep.instances;
            if (r > rep.max_residual || rep.instances == 1) {
                rep.max_residual = r;
                worst = {inst.corpus, inst.doc.id(), join_terms(inst.query), inst.factor,
                         describe(cfg), a, b, r};
            }
        }
    }
    rep.verdict = rep.max_residual <= tolerance ? Verdict::Satisfied : Verdict::Violated;
    if (rep.verdict == Verdict::Violated) rep.witness = worst;
    return rep;
}

Expectation expected_verdict(Method m, Constraint c) {
    if (c == Constraint::VNC) return m == Method::Dir ? Expectation::Violated : Expectation::Satisfied;
    switch (m) {
        case Method::JMV: return Expectation::Satisfied;
        case Method::JMV2: return Expectation::ReportOnly;
        default: return Expectation::Violated;
    }
}

std::vector<SmoothingConfig> axiom_settings(Method m, TopicMeasure kind) {
    std::vector<SmoothingConfig> out;
    SmoothingConfig base;
    base.method = m;
    base.topic = kind;
    if (uses_lambda(m)) {
        for (double l : {0.1, 0.5, 0.9}) {
            base.lambda = l;
            out.push_back(base);
        }
    } else {
        for (double mu : {10.0, 100.0, 1000.0, 10000.0}) {
            base.mu = mu;
            out.push_back(base);
        }
    }
    return out;
}

bool AxiomReport::matrix_holds() const {
    return std::all_of(checks.begin(), checks.end(), [](const AxiomCheck& c) { return c.holds; });
}

AxiomReport run_axiom_suite(const SuiteOptions& opts, unsigned workers) {
    const std::vector<ConstraintInstance> suites[2] = {generate_instances(Constraint::VNC, opts),
                                                       generate_instances(Constraint::TNC, opts)};
    const Method methods[] = {Method::JM, Method::Dir, Method::JMV, Method::JMV2, Method::DirV};

    AxiomReport out;
    out.seed = opts.seed;
    out.checks.resize(10);
    parallel_for(out.checks.size(), workers, [&](std::size_t i) {
        const Method m = methods[i / 2];
        const Constraint c = i % 2 == 0 ? Constraint::VNC : Constraint::TNC;
        AxiomCheck check;
        check.report = check_constraint(axiom_settings(m), c, suites[i % 2]);
        check.expected = expected_verdict(m, c);
        switch (check.expected) {
            case Expectation::Satisfied:
                check.holds = check.report.verdict == Verdict::Satisfied;
                break;
            case Expectation::Violated:
                check.holds = check.report.witness && check.report.witness->residual > kViolationThreshold;
                break;
            case Expectation::ReportOnly: check.holds = true; break;
        }
        out.checks[i] = std::move(check);
    });
    return out;
}

// ---------------------------------------------------------------------------
// Output

namespace {

std::string_view to_string(Verdict v) { return v == Verdict::Satisfied ? "satisfied" : "violated"; }

std::string_view to_string(Expectation e) {
    switch (e) {
        case Expectation::Satisfied: return "satisfied";
        case Expectation::Violated: return "violated";
        case Expectation::ReportOnly: return "report-only";
    }
    return "?";
}

} // namespace

void write_table(std::ostream& out, const AxiomReport& report) {
    char line[256];
    std::snprintf(line, sizeof line, "%-6s %-4s %10s %14s  %-10s %-12s %s\n", "scorer", "cons",
                  "evals", "max_residual", "verdict", "expected", "ok");
    out << line;
    for (const auto& c : report.checks) {
        const auto& r = c.report;
        std::snprintf(line, sizeof line, "%-6s %-4s %10zu %14.6e  %-10s %-12s %s\n", r.scorer.c_str(),
                      std::string(to_string(r.constraint)).c_str(), r.instances, r.max_residual,
                      std::string(to_string(r.verdict)).c_str(),
                      std::string(to_string(c.expected)).c_str(), c.holds ? "yes" : "NO");
        out << line;
    }
    for (const auto& c : report.checks) {
        if (!c.report.witness) continue;
        const auto& w = *c.report.witness;
        std::snprintf(line, sizeof line, "witness %s/%s: corpus=%s doc=%s factor=%llu %s ",
                      c.report.scorer.c_str(), std::string(to_string(c.report.constraint)).c_str(),
                      w.corpus.c_str(), w.doc_id.c_str(), static_cast<unsigned long long>(w.factor),
                      w.params.c_str());
        out << line << "query=\"" << w.query << "\"";
        std::snprintf(line, sizeof line, " scores %.9g -> %.9g\n", w.original, w.transformed);
        out << line;
    }
    out << "verdict matrix " << (report.matrix_holds() ? "holds" : "DOES NOT hold") << '\n';
}

void write_json(std::ostream& out, const AxiomReport& report) {
    nlohmann::ordered_json j;
    j["seed"] = report.seed;
    j["tolerance"] = kConstraintTolerance;
    j["violation_threshold"] = kViolationThreshold;
    j["topic_measure"] = "info";
    j["matrix_holds"] = report.matrix_holds();
    auto& records = j["records"] = nlohmann::ordered_json::array();
    for (const auto& c : report.checks) {
        const auto& r = c.report;
        nlohmann::ordered_json rec;
        rec["scorer"] = r.scorer;
        rec["constraint"] = to_string(r.constraint);
        rec["instances"] = r.instances;
        rec["max_residual"] = r.max_residual;
        rec["verdict"] = to_string(r.verdict);
        rec["expected"] = to_string(c.expected);
        rec["holds"] = c.holds;
        if (r.witness) {
            const auto& w = *r.witness;
            rec["witness"] = {{"corpus", w.corpus},       {"doc_id", w.doc_id},
                              {"query", w.query},         {"factor", w.factor},
                              {"params", w.params},       {"score_original", w.original},
                              {"score_transformed", w.transformed}, {"residual", w.residual}};
        } else {
            rec["witness"] = nullptr;
        }
        records.push_back(std::move(rec));
    }
    out << j.dump(2) << '\n';
}

} // namespace tfnorm
