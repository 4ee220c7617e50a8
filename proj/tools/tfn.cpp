// tfn: command-line front end for indexing, retrieval, evaluation, parameter
// sweeps and constraint checks.

#include "tfnorm/constraints.hpp"
#include "tfnorm/corpus.hpp"
#include "tfnorm/error.hpp"
#include "tfnorm/eval.hpp"
#include "tfnorm/lm.hpp"
#include "tfnorm/scorers.hpp"
#include "tfnorm/synth.hpp"
#include "tfnorm/wilcoxon.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <charconv>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

namespace {

using namespace tfnorm;

std::string shortest(double v) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

struct AnalyzerFlags {
    std::string stoplist;
    bool no_stem = false;
    std::string split = "punct";

    void add(CLI::App* app) {
        app->add_option("--stoplist", stoplist, "Stopword file, one word per line (default: bundled English list)")
            ->check(CLI::ExistingFile);
        app->add_flag("--no-stem", no_stem, "Disable Porter stemming");
        app->add_option("--split", split, "Token boundaries")->check(CLI::IsMember({"punct", "space"}));
    }

    TextPipeline pipeline() const {
        TextPipeline p;
        if (!stoplist.empty()) p.stoplist = Stoplist::load(stoplist);
        p.stemming = !no_stem;
        p.split = split == "space" ? SplitMode::Whitespace : SplitMode::Punctuation;
        return p;
    }
};

struct ModelFlags {
    std::string method = "dir";
    double lambda = 0.5;
    double mu = 1000.0;
    double lambda_s = 0.25;
    std::string tau = "info";
    bool set_queries = false;

    void add(CLI::App* app) {
        app->add_option("--method", method, "Scoring function")
            ->check(CLI::IsMember({"jm", "dir", "jmv", "jmv2", "dirv"}));
        app->add_option("--lambda", lambda, "JM-family smoothing weight in (0,1)");
        app->add_option("--mu", mu, "Dirichlet prior mass (> 0)");
        app->add_option("--lambda-s", lambda_s, "Term-specificity prior for jmv2, in (0,1)");
        app->add_option("--tau", tau, "Topic measure")->check(CLI::IsMember({"vocab", "info"}));
        app->add_flag("--set-queries", set_queries, "Ignore repeated query terms");
    }

    SmoothingConfig config() const {
        SmoothingConfig c;
        c.method = parse_method(method);
        c.lambda = lambda;
        c.mu = mu;
        c.lambda_s = lambda_s;
        c.topic = parse_topic_measure(tau);
        c.weight_by_qtf = !set_queries;
        c.validate();
        return c;
    }
};

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        double v = 0.0;
        const char* first = item.data();
        const char* last = item.data() + item.size();
        while (first < last && *first == ' ') ++first;
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc() || ptr == first) throw Error("bad number in grid list: '" + item + "'");
        out.push_back(v);
    }
    if (out.empty()) throw Error("empty grid list");
    return out;
}

std::vector<Query> select_queries(const std::vector<TopicQueries>& topics, QueryType type) {
    std::vector<Query> out;
    for (const auto& t : topics) out.push_back(t.get(type));
    return out;
}

void report_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

template <class Fn>
void with_output(const std::string& path, Fn&& fn) {
    if (path.empty() || path == "-") {
        fn(std::cout);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path + " for writing");
    fn(out);
    if (!out) throw Error("failed writing " + path);
}

// key = value lines; '#' starts a comment.
std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config file " + path);
    std::vector<std::pair<std::string, std::string>> out;
    std::string line;
    std::size_t lineno = 0;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("expected 'key = value' in " + path, lineno);
        std::string key = trim(line.substr(0, eq));
        std::replace(key.begin(), key.end(), '_', '-');
        if (key.empty()) throw ParseError("missing key in " + path, lineno);
        out.emplace_back(key, trim(line.substr(eq + 1)));
    }
    return out;
}

// Config entries become leading --key=value arguments, so flags given on the
// command line come later and take precedence.
std::vector<std::string> expand_config(CLI::App& app, std::vector<std::string> args) {
    if (args.empty()) return args;
    CLI::App* sub = nullptr;
    try {
        sub = app.get_subcommand(args[0]);
    } catch (const CLI::OptionNotFound&) {
        return args;
    }
    std::string config_path;
    for (std::size_t i = 1; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0) config_path = args[i].substr(9);
    }
    if (config_path.empty()) return args;
    std::vector<std::string> out{args[0]};
    for (const auto& [key, value] : read_config(config_path)) {
        const CLI::Option* opt = sub->get_option_no_throw("--" + key);
        if (opt == nullptr || key == "config")
            throw Error("config key '" + key + "' is not an option of '" + args[0] + "'");
        out.push_back("--" + key + "=" + value);
    }
    out.insert(out.end(), args.begin() + 1, args.end());
    return out;
}

int cmd_index(const std::string& corpus, const std::string& out_path, const std::string& format,
              const AnalyzerFlags& analyzer, unsigned workers) {
    const CorpusFormat fmt = format == "trec"    ? CorpusFormat::Trec
                             : format == "lines" ? CorpusFormat::Lines
                                                 : CorpusFormat::Auto;
    const auto raw = read_corpus(std::filesystem::path(corpus), fmt);
    const InvertedIndex index = build_index(raw, analyzer.pipeline(), workers);
    index.save(std::filesystem::path(out_path));
    const auto& s = index.stats();
    std::cout << "documents\t" << s.doc_count << '\n'
              << "terms\t" << s.ctf.size() << '\n'
              << "tokens\t" << s.total_length << '\n'
              << "mean_tau_vocab\t" << shortest(s.mean_tau_vocab) << '\n'
              << "mean_tau_info\t" << shortest(s.mean_tau_info) << '\n';
    return 0;
}

int cmd_search(const std::string& index_path, const std::string& text, const std::string& qid,
               const ModelFlags& model, std::size_t k, const std::string& tag) {
    const SmoothingConfig cfg = model.config();
    const InvertedIndex index = InvertedIndex::load(std::filesystem::path(index_path));
    const Query q = Query::from_text(qid, text, index.analyzer().pipeline());
    if (q.terms.empty()) throw Error("query has no indexable terms after analysis");
    for (const auto& t : unknown_terms(q, index.stats()))
        std::cerr << "warning: query term '" << t << "' does not occur in the collection\n";
    Run run;
    run.tag = tag;
    run.lists[qid] = rank(index, q, cfg, k);
    write_trec_run(std::cout, run);
    return 0;
}

int cmd_batch(const std::string& index_path, const std::string& topics_path, const std::string& qtype,
              const ModelFlags& model, std::size_t k, const std::string& tag, const std::string& out_path,
              unsigned workers) {
    const SmoothingConfig cfg = model.config();
    const InvertedIndex index = InvertedIndex::load(std::filesystem::path(index_path));
    const auto topics = make_queries(parse_topics(std::filesystem::path(topics_path)),
                                     index.analyzer().pipeline());
    std::vector<std::string> warnings;
    const Run run = run_batch(index, select_queries(topics, parse_query_type(qtype)), cfg, k, tag,
                              workers, &warnings);
    report_warnings(warnings);
    if (run.lists.empty()) throw Error("no query could be run");
    with_output(out_path, [&](std::ostream& out) { write_trec_run(out, run); });
    return 0;
}

nlohmann::ordered_json significance_json(const std::vector<SignificanceRecord>& records) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& r : records) {
        arr.push_back({{"metric", r.metric},
                       {"baseline_mean", r.baseline_mean},
                       {"run_mean", r.run_mean},
                       {"n", r.test.n},
                       {"statistic", r.test.statistic},
                       {"p_value", r.test.p_value},
                       {"exact", r.test.exact},
                       {"sig95", r.test.sig95},
                       {"sig99", r.test.sig99}});
    }
    return arr;
}

// Pairs per-query metrics of two reports on the queries both evaluated.
std::vector<SignificanceRecord> compare(const EvalReport& baseline, const EvalReport& run,
                                        std::vector<std::string>& warnings) {
    std::map<std::string, const QueryMetrics*> base_by_qid;
    for (const auto& m : baseline.per_query) base_by_qid[m.qid] = &m;
    std::vector<const QueryMetrics*> a, b;
    for (const auto& m : run.per_query) {
        if (auto it = base_by_qid.find(m.qid); it != base_by_qid.end()) {
            a.push_back(it->second);
            b.push_back(&m);
        }
    }
    if (a.size() != run.per_query.size() || a.size() != baseline.per_query.size())
        warnings.push_back("significance test uses the " + std::to_string(a.size()) +
                           " queries evaluated in both runs");
    if (a.empty()) throw Error("runs share no evaluated query");
    std::vector<SignificanceRecord> out;
    for (const char* metric : {"map", "p5", "p10"}) {
        auto pick = [&](const QueryMetrics& m) {
            return std::string_view(metric) == "map" ? m.ap : std::string_view(metric) == "p5" ? m.p5 : m.p10;
        };
        std::vector<double> xa, xb;
        for (std::size_t i = 0; i < a.size(); ++i) {
            xa.push_back(pick(*a[i]));
            xb.push_back(pick(*b[i]));
        }
        SignificanceRecord r;
        r.metric = metric;
        for (double v : xa) r.baseline_mean += v;
        for (double v : xb) r.run_mean += v;
        r.baseline_mean /= static_cast<double>(xa.size());
        r.run_mean /= static_cast<double>(xb.size());
        r.test = wilcoxon_signed_rank(xa, xb);
        out.push_back(r);
    }
    return out;
}

int cmd_evaluate(const std::string& run_path, const std::string& qrels_path, const std::string& baseline_path,
                 bool json, const std::string& out_path) {
    const Qrels qrels = Qrels::load(qrels_path);
    const EvalReport report = evaluate_run(parse_trec_run(std::filesystem::path(run_path)), qrels);
    report_warnings(report.warnings);
    if (!report.error.empty()) throw Error(report.error);

    std::vector<SignificanceRecord> sig;
    if (!baseline_path.empty()) {
        const EvalReport base = evaluate_run(parse_trec_run(std::filesystem::path(baseline_path)), qrels);
        if (!base.error.empty()) throw Error("baseline: " + base.error);
        std::vector<std::string> warnings;
        sig = compare(base, report, warnings);
        report_warnings(warnings);
    }

    with_output(out_path, [&](std::ostream& out) {
        if (json) {
            std::ostringstream body;
            write_report_json(body, report);
            auto doc = nlohmann::ordered_json::parse(body.str());
            if (!sig.empty()) doc["significance"] = significance_json(sig);
            out << doc.dump(2) << '\n';
            return;
        }
        write_report_text(out, report);
        for (const auto& r : sig) {
            out << "significance\t" << r.metric << "\tbaseline=" << shortest(r.baseline_mean)
                << "\trun=" << shortest(r.run_mean) << "\tn=" << r.test.n
                << "\tp=" << shortest(r.test.p_value) << (r.test.exact ? "\texact" : "\tnormal")
                << "\tsig95=" << (r.test.sig95 ? "yes" : "no") << "\tsig99=" << (r.test.sig99 ? "yes" : "no")
                << '\n';
        }
    });
    return 0;
}

int cmd_sweep(const std::string& index_path, const std::string& topics_path, const std::string& qrels_path,
              const std::string& qtype, const ModelFlags& model, const std::string& lambda_grid,
              const std::string& mu_grid, std::size_t k, const std::string& out_path, unsigned workers) {
    const SmoothingConfig base = model.config();
    SweepGrid grid = SweepGrid::defaults();
    if (!lambda_grid.empty()) grid.lambdas = parse_list(lambda_grid);
    if (!mu_grid.empty()) grid.mus = parse_list(mu_grid);
    grid.validate();
    const InvertedIndex index = InvertedIndex::load(std::filesystem::path(index_path));
    const auto topics = make_queries(parse_topics(std::filesystem::path(topics_path)),
                                     index.analyzer().pipeline());
    const Qrels qrels = Qrels::load(qrels_path);
    const SweepResult result =
        sweep(index, select_queries(topics, parse_query_type(qtype)), qrels, base, grid, k, workers);
    with_output(out_path, [&](std::ostream& out) { write_sweep_table(out, result); });
    const auto& best = result.best_row();
    std::cerr << "best " << to_string(base.method) << ' '
              << (uses_lambda(base.method) ? "lambda=" : "mu=") << shortest(best.parameter)
              << " map=" << shortest(best.map) << '\n';
    return 0;
}

int cmd_axioms(const SuiteOptions& opts, const std::string& json_path, unsigned workers) {
    const AxiomReport report = run_axiom_suite(opts, workers);
    write_table(std::cout, report);
    if (!json_path.empty()) with_output(json_path, [&](std::ostream& out) { write_json(out, report); });
    return report.matrix_holds() ? 0 : 3;
}

int cmd_synth(const SyntheticOptions& opts, const std::string& dir) {
    const auto collection = make_synthetic_collection(opts);
    collection.write(dir);
    std::cout << "documents\t" << collection.docs.size() << '\n'
              << "topics\t" << collection.topics.size() << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Language-model retrieval with verbosity- and topicality-aware TF normalization"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    std::size_t k = 1000;
    std::string config_path;
    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "key = value file; command-line flags take precedence")
            ->check(CLI::ExistingFile);
        sub->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
    };

    // index
    auto* index_cmd = app.add_subcommand("index", "Build an index from a corpus");
    std::string corpus_path, index_path, corpus_format = "auto";
    AnalyzerFlags analyzer;
    index_cmd->add_option("--corpus", corpus_path, "Corpus file (id<TAB>text, JSON lines or TREC <DOC>)")
        ->required()
        ->check(CLI::ExistingFile);
    index_cmd->add_option("--index", index_path, "Output index file")->required();
    index_cmd->add_option("--format", corpus_format, "Corpus format")
        ->check(CLI::IsMember({"auto", "lines", "trec"}));
    analyzer.add(index_cmd);
    common(index_cmd);

    // search
    auto* search_cmd = app.add_subcommand("search", "Rank documents for one query");
    std::string query_text, qid = "1", tag = "tfnorm";
    ModelFlags model;
    search_cmd->add_option("--index", index_path, "Index file")->required()->check(CLI::ExistingFile);
    search_cmd->add_option("--query", query_text, "Query text")->required();
    search_cmd->add_option("--qid", qid, "Query id written to the run lines");
    search_cmd->add_option("--tag", tag, "Run tag");
    search_cmd->add_option("--k", k, "Retrieval depth")->check(CLI::PositiveNumber);
    model.add(search_cmd);
    common(search_cmd);

    // batch
    auto* batch_cmd = app.add_subcommand("batch", "Run every topic and write a TREC run file");
    std::string topics_path, qtype = "sk", out_path;
    batch_cmd->add_option("--index", index_path, "Index file")->required()->check(CLI::ExistingFile);
    batch_cmd->add_option("--topics", topics_path, "TREC topics file")->required()->check(CLI::ExistingFile);
    batch_cmd->add_option("--qtype", qtype, "Query variant")->check(CLI::IsMember({"sk", "sv", "lv"}));
    batch_cmd->add_option("--k", k, "Retrieval depth")->check(CLI::PositiveNumber);
    batch_cmd->add_option("--tag", tag, "Run tag");
    batch_cmd->add_option("--out", out_path, "Run file (default: stdout)");
    model.add(batch_cmd);
    common(batch_cmd);

    // evaluate
    auto* eval_cmd = app.add_subcommand("evaluate", "Score a run against relevance judgments");
    std::string run_path, qrels_path, baseline_path;
    bool json = false;
    eval_cmd->add_option("--run", run_path, "TREC run file")->required()->check(CLI::ExistingFile);
    eval_cmd->add_option("--qrels", qrels_path, "Qrels file")->required()->check(CLI::ExistingFile);
    eval_cmd->add_option("--baseline", baseline_path, "Baseline run for a paired Wilcoxon test")
        ->check(CLI::ExistingFile);
    eval_cmd->add_flag("--json", json, "Emit JSON");
    eval_cmd->add_option("--out", out_path, "Report file (default: stdout)");
    common(eval_cmd);

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "Evaluate a method over its parameter grid");
    std::string lambda_grid, mu_grid;
    sweep_cmd->add_option("--index", index_path, "Index file")->required()->check(CLI::ExistingFile);
    sweep_cmd->add_option("--topics", topics_path, "TREC topics file")->required()->check(CLI::ExistingFile);
    sweep_cmd->add_option("--qrels", qrels_path, "Qrels file")->required()->check(CLI::ExistingFile);
    sweep_cmd->add_option("--qtype", qtype, "Query variant")->check(CLI::IsMember({"sk", "sv", "lv"}));
    sweep_cmd->add_option("--k", k, "Retrieval depth")->check(CLI::PositiveNumber);
    sweep_cmd->add_option("--lambda-grid", lambda_grid, "Comma-separated lambda values");
    sweep_cmd->add_option("--mu-grid", mu_grid, "Comma-separated mu values");
    sweep_cmd->add_option("--out", out_path, "Table file (default: stdout)");
    model.add(sweep_cmd);
    common(sweep_cmd);

    // axioms
    auto* axioms_cmd = app.add_subcommand("axioms", "Check VNC/TNC for every scorer on seeded instances");
    SuiteOptions suite;
    std::string json_path;
    axioms_cmd->add_option("--seed", suite.seed, "Instance generator seed");
    axioms_cmd->add_option("--corpora", suite.corpora, "Random corpora")->check(CLI::NonNegativeNumber);
    axioms_cmd->add_option("--instances", suite.instances_per_corpus, "Instances per corpus")
        ->check(CLI::NonNegativeNumber);
    axioms_cmd->add_option("--json", json_path, "Also write the report as JSON to this file");
    common(axioms_cmd);

    // synth
    auto* synth_cmd = app.add_subcommand("synth", "Generate the synthetic test collection");
    SyntheticOptions synth;
    std::string synth_dir;
    synth_cmd->add_option("--out", synth_dir, "Output directory")->required();
    synth_cmd->add_option("--seed", synth.seed, "Generator seed");
    synth_cmd->add_option("--documents", synth.documents, "Number of documents")->check(CLI::PositiveNumber);
    synth_cmd->add_option("--topics", synth.topics, "Number of topics")->check(CLI::PositiveNumber);
    common(synth_cmd);

    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        args = expand_config(app, args);
    } catch (const std::exception& e) {
        std::cerr << "tfn: " << e.what() << '\n';
        return 2;
    }
    std::reverse(args.begin(), args.end());  // CLI11 consumes the vector from the back
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*index_cmd) return cmd_index(corpus_path, index_path, corpus_format, analyzer, workers);
        if (*search_cmd) return cmd_search(index_path, query_text, qid, model, k, tag);
        if (*batch_cmd) return cmd_batch(index_path, topics_path, qtype, model, k, tag, out_path, workers);
        if (*eval_cmd) return cmd_evaluate(run_path, qrels_path, baseline_path, json, out_path);
        if (*sweep_cmd)
            return cmd_sweep(index_path, topics_path, qrels_path, qtype, model, lambda_grid, mu_grid, k,
                             out_path, workers);
        if (*axioms_cmd) return cmd_axioms(suite, json_path, workers);
        if (*synth_cmd) return cmd_synth(synth, synth_dir);
    } catch (const std::exception& e) {
        std::cerr << "tfn: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
