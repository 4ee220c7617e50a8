#include "tfnorm/eval.hpp"

#include "tfnorm/error.hpp"
#include "tfnorm/parallel.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace tfnorm {

namespace {

std::vector<std::string> split_ws(const std::string& line) {
    std::istringstream ss(line);
    std::vector<std::string> out;
    for (std::string f; ss >> f;) out.push_back(std::move(f));
    return out;
}

template <class T>
bool parse_number(const std::string& s, T& v) {
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    return ec == std::errc{} && p == s.data() + s.size();
}

std::string shortest(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

std::ifstream open_input(const std::filesystem::path& path, const char* what) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(std::string("cannot open ") + what + ": " + path.string());
    return in;
}

} // namespace

// ---------------------------------------------------------------------------
// Qrels

void Qrels::add(const std::string& qid, const std::string& doc_id, int grade) {
    if (grade < 0) throw Error("negative relevance grade for " + qid + "/" + doc_id);
    if (!judgments_[qid].emplace(doc_id, grade).second)
        throw Error("duplicate judgment for query " + qid + ", document " + doc_id);
}

Qrels Qrels::parse(std::istream& in) {
    Qrels q;
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        auto f = split_ws(line);
        if (f.empty()) continue;
        int grade = 0;
        if (f.size() != 4 || !parse_number(f[3], grade))
            throw ParseError("expected 'qid iteration doc_id grade'", n);
        try {
            q.add(f[0], f[2], grade);
        } catch (const Error& e) {
            throw ParseError(e.what(), n);
        }
    }
    return q;
}

Qrels Qrels::load(const std::filesystem::path& path) {
    auto in = open_input(path, "qrels");
    return parse(in);
}

int Qrels::grade(std::string_view qid, std::string_view doc_id) const {
    auto q = judgments_.find(qid);
    if (q == judgments_.end()) return 0;
    auto d = q->second.find(doc_id);
    return d == q->second.end() ? 0 : d->second;
}

std::size_t Qrels::num_relevant(std::string_view qid) const {
    auto q = judgments_.find(qid);
    if (q == judgments_.end()) return 0;
    return static_cast<std::size_t>(std::count_if(q->second.begin(), q->second.end(),
                                                  [](const auto& kv) { return kv.second > 0; }));
}

std::vector<std::string> Qrels::qids() const {
    std::vector<std::string> out;
    for (const auto& [qid, docs] : judgments_) out.push_back(qid);
    return out;
}

void Qrels::write(std::ostream& out) const {
    for (const auto& [qid, docs] : judgments_)
        for (const auto& [doc, grade] : docs) out << qid << " 0 " << doc << ' ' << grade << '\n';
}

// ---------------------------------------------------------------------------
// Runs

void write_trec_run(std::ostream& out, const Run& run) {
    for (const auto& [qid, list] : run.lists)
        for (const auto& e : list.entries)
            out << qid << " Q0 " << e.doc_id << ' ' << e.rank << ' ' << shortest(e.score) << ' '
                << run.tag << '\n';
}

void write_trec_run(const std::filesystem::path& path, const Run& run) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write run: " + path.string());
    write_trec_run(out, run);
}

Run parse_trec_run(std::istream& in) {
    Run run;
    bool have_tag = false;
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        auto f = split_ws(line);
        if (f.empty()) continue;
        if (f.size() != 6) throw ParseError("expected 6 columns, found " + std::to_string(f.size()), n);
        if (f[1] != "Q0") throw ParseError("second column must be Q0", n);
        RankedEntry e;
        e.doc_id = f[2];
        if (!parse_number(f[3], e.rank) || e.rank == 0) throw ParseError("bad rank '" + f[3] + "'", n);
        if (!parse_number(f[4], e.score)) throw ParseError("bad score '" + f[4] + "'", n);
        if (!have_tag) {
            run.tag = f[5];
            have_tag = true;
        }
        auto& list = run.lists[f[0]];
        list.qid = f[0];
        list.entries.push_back(std::move(e));
    }
    for (auto& [qid, list] : run.lists)
        std::stable_sort(list.entries.begin(), list.entries.end(),
                         [](const RankedEntry& a, const RankedEntry& b) { return a.rank < b.rank; });
    return run;
}

Run parse_trec_run(const std::filesystem::path& path) {
    auto in = open_input(path, "run");
    return parse_trec_run(in);
}

// ---------------------------------------------------------------------------
// Metrics

std::optional<double> average_precision(const RankedList& ranked, const Qrels& qrels,
                                        std::string_view qid) {
    const std::size_t total = qrels.num_relevant(qid);
    if (total == 0) return std::nullopt;
    double sum = 0.0;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < ranked.entries.size(); ++i) {
        if (!qrels.relevant(qid, ranked.entries[i].doc_id)) continue;
        ++hits;
        sum += static_cast<double>(hits) / static_cast<double>(i + 1);
    }
    return sum / static_cast<double>(total);
}

double precision_at_k(const RankedList& ranked, const Qrels& qrels, std::string_view qid,
                      std::size_t k) {
    if (k == 0) throw Error("precision cutoff must be positive");
    const std::size_t depth = std::min(k, ranked.entries.size());
    std::size_t hits = 0;
    for (std::size_t i = 0; i < depth; ++i)
        if (qrels.relevant(qid, ranked.entries[i].doc_id)) ++hits;
    return static_cast<double>(hits) / static_cast<double>(k);
}

std::vector<double> EvalReport::column(std::string_view metric) const {
    std::vector<double> out;
    for (const auto& q : per_query) {
        if (metric == "map") out.push_back(q.ap);
        else if (metric == "p5") out.push_back(q.p5);
        else if (metric == "p10") out.push_back(q.p10);
        else throw Error("unknown metric '" + std::string(metric) + "'");
    }
    return out;
}

EvalReport evaluate_run(const Run& run, const Qrels& qrels) {
    EvalReport rep;
    for (const auto& [qid, list] : run.lists) {
        if (!qrels.has_query(qid)) {
            rep.warnings.push_back("query " + qid + " has no judgments; skipped");
            continue;
        }
        auto ap = average_precision(list, qrels, qid);
        if (!ap) {
            ++rep.excluded_no_relevant;
            rep.warnings.push_back("query " + qid + " has no relevant documents; excluded");
            continue;
        }
        QueryMetrics m;
        m.qid = qid;
        m.ap = *ap;
        m.p5 = precision_at_k(list, qrels, qid, 5);
        m.p10 = precision_at_k(list, qrels, qid, 10);
        m.relevant = qrels.num_relevant(qid);
        for (const auto& e : list.entries)
            if (qrels.relevant(qid, e.doc_id)) ++m.relevant_retrieved;
        rep.per_query.push_back(std::move(m));
    }
    for (const auto& qid : qrels.qids())
        if (qrels.num_relevant(qid) > 0 && !run.lists.contains(qid))
            rep.warnings.push_back("query " + qid + " is judged but absent from the run");

    if (rep.per_query.empty()) {
        rep.error = "no query in the run has relevance judgments";
        return rep;
    }
    for (const auto& m : rep.per_query) {
        rep.map += m.ap;
        rep.p5 += m.p5;
        rep.p10 += m.p10;
    }
    const auto n = static_cast<double>(rep.per_query.size());
    rep.map /= n;
    rep.p5 /= n;
    rep.p10 /= n;
    return rep;
}

void write_report_text(std::ostream& out, const EvalReport& report) {
    char line[160];
    for (const auto& m : report.per_query) {
        std::snprintf(line, sizeof line, "%-12s map %.4f  P5 %.4f  P10 %.4f  rel %zu  rel_ret %zu\n",
                      m.qid.c_str(), m.ap, m.p5, m.p10, m.relevant, m.relevant_retrieved);
        out << line;
    }
    std::snprintf(line, sizeof line, "%-12s map %.4f  P5 %.4f  P10 %.4f  queries %zu  excluded %zu\n",
                  "all", report.map, report.p5, report.p10, report.num_queries(),
                  report.excluded_no_relevant);
    out << line;
    if (!report.error.empty()) out << "error: " << report.error << '\n';
}

void write_report_json(std::ostream& out, const EvalReport& report) {
    nlohmann::ordered_json j;
    j["queries"] = report.num_queries();
    j["excluded_no_relevant"] = report.excluded_no_relevant;
    j["map"] = report.map;
    j["p5"] = report.p5;
    j["p10"] = report.p10;
    auto& per = j["per_query"] = nlohmann::ordered_json::array();
    for (const auto& m : report.per_query)
        per.push_back({{"qid", m.qid}, {"ap", m.ap}, {"p5", m.p5}, {"p10", m.p10},
                       {"relevant", m.relevant}, {"relevant_retrieved", m.relevant_retrieved}});
    j["warnings"] = report.warnings;
    if (!report.error.empty()) j["error"] = report.error;
    out << j.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// Topics

const Query& TopicQueries::get(QueryType t) const {
    switch (t) {
        case QueryType::SK: return sk;
        case QueryType::SV: return sv;
        case QueryType::LV: return lv;
    }
    return sk;
}

namespace {

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::string drop_label(std::string s, std::string_view label) {
    s = trim(s);
    if (s.size() >= label.size()) {
        bool match = true;
        for (std::size_t i = 0; i < label.size(); ++i)
            if (std::tolower(static_cast<unsigned char>(s[i])) != label[i]) match = false;
        if (match) s = trim(std::string_view(s).substr(label.size()));
    }
    return s;
}

} // namespace

std::vector<Topic> parse_topics(std::istream& in) {
    enum class Field { None, Num, Title, Desc, Narr };
    static constexpr std::pair<std::string_view, Field> kTags[] = {
        {"<num>", Field::Num},   {"<title>", Field::Title}, {"<desc>", Field::Desc},
        {"<narr>", Field::Narr}, {"</num>", Field::None},   {"</title>", Field::None},
        {"</desc>", Field::None}, {"</narr>", Field::None},
    };

    std::vector<Topic> topics;
    bool in_topic = false;
    std::size_t topic_line = 0;
    Field field = Field::None;
    std::string num, title, desc, narr;
    std::set<Field> seen;
    auto target = [&]() -> std::string* {
        switch (field) {
            case Field::Num: return &num;
            case Field::Title: return &title;
            case Field::Desc: return &desc;
            case Field::Narr: return &narr;
            default: return nullptr;
        }
    };

    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        std::string_view rest(line);
        while (true) {
            auto lt = rest.find('<');
            std::string_view text = rest.substr(0, lt);
            if (!trim(text).empty()) {
                if (!in_topic) throw ParseError("text outside <top>", n);
                std::string* dst = target();
                if (!dst) throw ParseError("text outside a topic field", n);
                *dst += ' ';
                *dst += text;
            }
            if (lt == std::string_view::npos) break;
            auto gt = rest.find('>', lt);
            if (gt == std::string_view::npos) throw ParseError("unterminated tag", n);
            std::string tag(rest.substr(lt, gt - lt + 1));
            std::transform(tag.begin(), tag.end(), tag.begin(),
                           [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
            rest = rest.substr(gt + 1);

            if (tag == "<top>") {
                if (in_topic) throw ParseError("<top> inside a topic", n);
                in_topic = true;
                topic_line = n;
                field = Field::None;
                num.clear(), title.clear(), desc.clear(), narr.clear();
                seen.clear();
                continue;
            }
            if (tag == "</top>") {
                if (!in_topic) throw ParseError("</top> without <top>", n);
                Topic t{drop_label(num, "number:"), drop_label(title, "topic:"), drop_label(desc, "description:"),
                        drop_label(narr, "narrative:")};
                if (t.qid.empty()) throw ParseError("topic without <num>", topic_line);
                auto f = split_ws(t.qid);
                if (f.size() != 1) throw ParseError("topic number must be a single token", topic_line);
                t.qid = f[0];
                topics.push_back(std::move(t));
                in_topic = false;
                field = Field::None;
                continue;
            }
            auto it = std::find_if(std::begin(kTags), std::end(kTags),
                                   [&](const auto& p) { return p.first == tag; });
            if (it == std::end(kTags)) throw ParseError("unknown tag " + tag, n);
            if (!in_topic) throw ParseError(tag + " outside <top>", n);
            if (it->second != Field::None && !seen.insert(it->second).second)
                throw ParseError("duplicate " + tag, n);
            field = it->second;
        }
    }
    if (in_topic) throw ParseError("unterminated <top>", topic_line);
    if (topics.empty()) throw ParseError("no topics found", 0);
    std::set<std::string> ids;
    for (const auto& t : topics)
        if (!ids.insert(t.qid).second) throw Error("duplicate topic number " + t.qid);
    return topics;
}

std::vector<Topic> parse_topics(const std::filesystem::path& path) {
    auto in = open_input(path, "topics");
    return parse_topics(in);
}

std::vector<TopicQueries> make_queries(const std::vector<Topic>& topics,
                                       const TextPipeline& pipeline) {
    std::vector<TopicQueries> out;
    for (const auto& t : topics) {
        TopicQueries q;
        q.qid = t.qid;
        q.sk = Query::from_text(t.qid, t.title, pipeline, QueryType::SK);
        q.sv = Query::from_text(t.qid, t.desc, pipeline, QueryType::SV);
        q.lv = Query::from_text(t.qid, t.title + "\n" + t.desc + "\n" + t.narr, pipeline,
                                QueryType::LV);
        out.push_back(std::move(q));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Batch and sweep

Run run_batch(const InvertedIndex& index, const std::vector<Query>& queries,
              const SmoothingConfig& cfg, std::size_t k, std::string tag, unsigned workers,
              std::vector<std::string>* warnings) {
    cfg.validate();
    std::vector<std::optional<RankedList>> lists(queries.size());
    std::vector<std::string> notes(queries.size());
    parallel_for(queries.size(), workers, [&](std::size_t i) {
        const auto& q = queries[i];
        auto unknown = unknown_terms(q, index.stats());
        if (unknown.size() == q.terms.size()) {
            notes[i] = "query " + q.qid + " has no indexable terms; skipped";
            return;
        }
        if (!unknown.empty()) {
            notes[i] = "query " + q.qid + ": skipped terms not in the collection:";
            for (const auto& t : unknown) notes[i] += " " + t;
        }
        lists[i] = rank(index, q, cfg, k);
    });
    Run run;
    run.tag = std::move(tag);
    for (std::size_t i = 0; i < queries.size(); ++i) {
        if (warnings && !notes[i].empty()) warnings->push_back(notes[i]);
        if (lists[i]) run.lists[queries[i].qid] = std::move(*lists[i]);
    }
    return run;
}

SweepGrid SweepGrid::defaults() {
    SweepGrid g;
    g.lambdas.push_back(0.01);
    for (int i = 2; i <= 19; ++i) g.lambdas.push_back(i * 5 / 100.0);
    g.lambdas.push_back(0.99);
    for (int i = 0; i < 22; ++i) g.mus.push_back(std::round(100.0 * std::pow(300.0, i / 21.0)));
    return g;
}

void SweepGrid::validate() const {
    if (!std::is_sorted(lambdas.begin(), lambdas.end()) ||
        std::adjacent_find(lambdas.begin(), lambdas.end()) != lambdas.end())
        throw Error("lambda grid must be strictly ascending");
    if (!std::is_sorted(mus.begin(), mus.end()) ||
        std::adjacent_find(mus.begin(), mus.end()) != mus.end())
        throw Error("mu grid must be strictly ascending");
    for (double l : lambdas)
        if (!(l > 0.0 && l < 1.0)) throw Error("lambda grid values must lie in (0, 1)");
    for (double m : mus)
        if (!(m > 0.0)) throw Error("mu grid values must be positive");
}

SweepResult sweep(const InvertedIndex& index, const std::vector<Query>& queries, const Qrels& qrels,
                  const SmoothingConfig& base, const SweepGrid& grid, std::size_t k,
                  unsigned workers) {
    grid.validate();
    const bool lam = uses_lambda(base.method);
    const auto& values = lam ? grid.lambdas : grid.mus;
    if (values.empty()) throw Error("sweep grid for this method is empty");

    SweepResult res;
    res.base = base;
    res.rows.resize(values.size());
    parallel_for(values.size(), workers, [&](std::size_t i) {
        SmoothingConfig cfg = base;
        (lam ? cfg.lambda : cfg.mu) = values[i];
        auto rep = evaluate_run(run_batch(index, queries, cfg, k, "sweep"), qrels);
        res.rows[i] = {values[i], rep.map, rep.p5, rep.p10};
    });
    for (std::size_t i = 1; i < res.rows.size(); ++i)
        if (res.rows[i].map > res.rows[res.best].map) res.best = i;
    return res;
}

void write_sweep_table(std::ostream& out, const SweepResult& result) {
    out << "method\tparameter\tmap\tp5\tp10\tbest\n";
    for (std::size_t i = 0; i < result.rows.size(); ++i) {
        const auto& r = result.rows[i];
        out << to_string(result.base.method) << '\t' << shortest(r.parameter) << '\t'
            << shortest(r.map) << '\t' << shortest(r.p5) << '\t' << shortest(r.p10) << '\t'
            << (i == result.best ? 1 : 0) << '\n';
    }
}

} // namespace tfnorm
