#include "tfnorm/corpus.hpp"

#include "tfnorm/error.hpp"
#include "tfnorm/lm.hpp"
#include "tfnorm/parallel.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

namespace tfnorm {

namespace {

bool has_space(std::string_view s) {
    return std::any_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

void check_doc_id(std::string_view id) {
    if (id.empty()) throw Error("document id must not be empty");
    if (has_space(id)) throw Error("document id contains whitespace: '" + std::string(id) + "'");
}

std::string format_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

} // namespace

// ---------------------------------------------------------------------------
// Document / CollectionStats

Document Document::from_counts(std::string doc_id, TermCounts tf) {
    std::erase_if(tf, [](const auto& kv) { return kv.second == 0; });
    if (tf.empty()) throw Error("document '" + doc_id + "' has no terms");
    Document d;
    d.id_ = std::move(doc_id);
    for (const auto& [term, n] : tf) d.length_ += n;
    d.info_quantity_ = information_quantity(tf);
    d.tf_ = std::move(tf);
    return d;
}

Count Document::tf(std::string_view term) const {
    auto it = tf_.find(term);
    return it == tf_.end() ? 0 : it->second;
}

Count CollectionStats::cf(std::string_view term) const {
    auto it = ctf.find(term);
    return it == ctf.end() ? 0 : it->second;
}

CollectionStats CollectionStats::compute(const std::vector<Document>& docs) {
    CollectionStats s;
    double sum_vocab = 0.0;
    double sum_info = 0.0;
    for (const auto& d : docs) {
        for (const auto& [term, n] : d.tf()) s.ctf[term] += n;
        s.total_length += d.length();
        sum_vocab += static_cast<double>(d.vocab_size());
        sum_info += d.info_quantity();
    }
    s.doc_count = docs.size();
    if (s.doc_count > 0) {
        s.mean_tau_vocab = sum_vocab / static_cast<double>(s.doc_count);
        s.mean_tau_info = sum_info / static_cast<double>(s.doc_count);
    }
    return s;
}

// ---------------------------------------------------------------------------
// Analyzer settings

TextPipeline AnalyzerSettings::pipeline() const {
    TextPipeline p;
    p.split = split;
    p.stemming = stemming;
    p.stoplist = Stoplist(std::set<std::string>(stopwords.begin(), stopwords.end()));
    return p;
}

AnalyzerSettings AnalyzerSettings::from(const TextPipeline& p) {
    AnalyzerSettings a;
    a.split = p.split;
    a.stemming = p.stemming;
    a.stopwords.assign(p.stoplist.words().begin(), p.stoplist.words().end());
    return a;
}

// ---------------------------------------------------------------------------
// Index

InvertedIndex::InvertedIndex(std::vector<Document> docs, AnalyzerSettings analyzer)
    : docs_(std::move(docs)), analyzer_(std::move(analyzer)) {
    if (docs_.empty()) throw Error("cannot build an index from an empty corpus");
    std::sort(docs_.begin(), docs_.end(),
              [](const Document& a, const Document& b) { return a.id() < b.id(); });
    for (std::size_t i = 1; i < docs_.size(); ++i)
        if (docs_[i].id() == docs_[i - 1].id())
            throw Error("duplicate document id: " + docs_[i].id());
    for (std::size_t i = 0; i < docs_.size(); ++i)
        for (const auto& [term, n] : docs_[i].tf())
            postings_[term].push_back({static_cast<std::uint32_t>(i), n});
    stats_ = CollectionStats::compute(docs_);
    verify();
}

const std::vector<Posting>& InvertedIndex::postings(std::string_view term) const {
    static const std::vector<Posting> kEmpty;
    auto it = postings_.find(term);
    return it == postings_.end() ? kEmpty : it->second;
}

const Document* InvertedIndex::find(std::string_view doc_id) const {
    auto it = std::lower_bound(docs_.begin(), docs_.end(), doc_id,
                               [](const Document& d, std::string_view id) { return d.id() < id; });
    return (it != docs_.end() && it->id() == doc_id) ? &*it : nullptr;
}

void InvertedIndex::verify() const {
    if (postings_.size() != stats_.ctf.size())
        throw Error("index inconsistent: postings and collection vocabulary differ in size");
    Count total = 0;
    for (const auto& d : docs_) total += d.length();
    if (total != stats_.total_length) throw Error("index inconsistent: total length mismatch");
    for (const auto& [term, list] : postings_) {
        Count sum = 0;
        for (std::size_t i = 0; i < list.size(); ++i) {
            const auto& p = list[i];
            if (i > 0 && list[i - 1].doc >= p.doc)
                throw Error("index inconsistent: postings for '" + term + "' not sorted");
            if (p.doc >= docs_.size() || docs_[p.doc].tf(term) != p.tf)
                throw Error("index inconsistent: posting for '" + term + "' disagrees with document");
            sum += p.tf;
        }
        if (sum != stats_.cf(term))
            throw Error("index inconsistent: collection frequency of '" + term + "'");
    }
}

// Format (text, one record per line, tokens separated by single spaces):
//   tfnorm-index <version>
//   analyzer <punct|space> <stem 0|1> <n-stopwords>
//   <stopword>                                  (n lines)
//   stats <docs> <total_length> <terms> <mean_tau_vocab> <mean_tau_info>
//   doc <id> <length> <vocab_size> <info_quantity> (per document, id order)
//   <term> <tf>                                 (vocab_size lines, term order)
//   end
// Reals use the shortest representation that round-trips exactly.
void InvertedIndex::save(std::ostream& out) const {
    out << kFormatTag << ' ' << kFormatVersion << '\n';
    out << "analyzer " << (analyzer_.split == SplitMode::Punctuation ? "punct" : "space") << ' '
        << (analyzer_.stemming ? 1 : 0) << ' ' << analyzer_.stopwords.size() << '\n';
    for (const auto& w : analyzer_.stopwords) out << w << '\n';
    out << "stats " << stats_.doc_count << ' ' << stats_.total_length << ' ' << stats_.ctf.size()
        << ' ' << format_double(stats_.mean_tau_vocab) << ' ' << format_double(stats_.mean_tau_info)
        << '\n';
    for (const auto& d : docs_) {
        out << "doc " << d.id() << ' ' << d.length() << ' ' << d.vocab_size() << ' '
            << format_double(d.info_quantity()) << '\n';
        for (const auto& [term, n] : d.tf()) out << term << ' ' << n << '\n';
    }
    out << "end\n";
}

void InvertedIndex::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write index: " + path.string());
    save(out);
    if (!out) throw Error("error writing index: " + path.string());
}

namespace {

class LineReader {
public:
    explicit LineReader(std::istream& in) : in_(in) {}

    std::vector<std::string> fields(std::string_view expect_tag = {}, std::size_t expect_n = 0) {
        std::string line;
        if (!std::getline(in_, line)) throw ParseError("unexpected end of index file", line_ + 1);
        ++line_;
        std::istringstream ss(line);
        std::vector<std::string> out;
        for (std::string f; ss >> f;) out.push_back(std::move(f));
        if (!expect_tag.empty() && (out.empty() || out.front() != expect_tag))
            fail("expected '" + std::string(expect_tag) + "' record");
        if (expect_n && out.size() != expect_n) fail("wrong number of fields");
        return out;
    }

    template <class T>
    T number(const std::string& s) {
        T v{};
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || p != s.data() + s.size()) fail("bad number '" + s + "'");
        return v;
    }

    [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, line_); }

private:
    std::istream& in_;
    std::size_t line_ = 0;
};

} // namespace

InvertedIndex InvertedIndex::load(std::istream& in) {
    LineReader r(in);
    auto head = r.fields(kFormatTag, 2);
    if (r.number<int>(head[1]) != kFormatVersion) r.fail("unsupported index version " + head[1]);

    auto an = r.fields("analyzer", 4);
    AnalyzerSettings analyzer;
    if (an[1] == "punct") analyzer.split = SplitMode::Punctuation;
    else if (an[1] == "space") analyzer.split = SplitMode::Whitespace;
    else r.fail("unknown split mode " + an[1]);
    analyzer.stemming = r.number<int>(an[2]) != 0;
    auto n_stop = r.number<std::size_t>(an[3]);
    for (std::size_t i = 0; i < n_stop; ++i) {
        auto f = r.fields({}, 1);
        analyzer.stopwords.push_back(f[0]);
    }

    auto st = r.fields("stats", 6);
    auto n_docs = r.number<Count>(st[1]);
    auto total = r.number<Count>(st[2]);
    auto n_terms = r.number<std::size_t>(st[3]);
    auto mean_vocab = r.number<double>(st[4]);
    auto mean_info = r.number<double>(st[5]);

    std::vector<Document> docs;
    docs.reserve(n_docs);
    for (Count i = 0; i < n_docs; ++i) {
        auto h = r.fields("doc", 5);
        auto length = r.number<Count>(h[2]);
        auto vocab = r.number<std::size_t>(h[3]);
        auto info = r.number<double>(h[4]);
        TermCounts tf;
        for (std::size_t j = 0; j < vocab; ++j) {
            auto f = r.fields({}, 2);
            tf.emplace(f[0], r.number<Count>(f[1]));
        }
        auto d = Document::from_counts(h[1], std::move(tf));
        if (d.length() != length || d.vocab_size() != vocab || d.info_quantity() != info)
            r.fail("document '" + h[1] + "' statistics do not match its counts");
        if (!docs.empty() && docs.back().id() >= d.id()) r.fail("documents not sorted by id");
        docs.push_back(std::move(d));
    }
    r.fields("end", 1);

    InvertedIndex idx(std::move(docs), std::move(analyzer));
    const auto& s = idx.stats();
    if (s.total_length != total || s.ctf.size() != n_terms || s.mean_tau_vocab != mean_vocab ||
        s.mean_tau_info != mean_info)
        throw Error("index collection statistics do not match the document table");
    return idx;
}

InvertedIndex InvertedIndex::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open index: " + path.string());
    return load(in);
}

// ---------------------------------------------------------------------------
// Building

Document build_document(std::string doc_id, std::string_view text, const TextPipeline& pipeline) {
    check_doc_id(doc_id);
    TermCounts tf;
    for (auto& t : pipeline.analyze(text)) ++tf[std::move(t)];
    if (tf.empty()) throw Error("document '" + doc_id + "' has no indexable terms");
    return Document::from_counts(std::move(doc_id), std::move(tf));
}

InvertedIndex build_index(const std::vector<RawDocument>& raw, const TextPipeline& pipeline,
                          unsigned workers) {
    if (raw.empty()) throw Error("cannot build an index from an empty corpus");
    std::set<std::string_view> seen;
    for (const auto& r : raw)
        if (!seen.insert(r.id).second) throw Error("duplicate document id: " + r.id);

    std::vector<Document> docs(raw.size());
    parallel_for(raw.size(), workers,
                 [&](std::size_t i) { docs[i] = build_document(raw[i].id, raw[i].text, pipeline); });
    return InvertedIndex(std::move(docs), AnalyzerSettings::from(pipeline));
}

// ---------------------------------------------------------------------------
// Corpus readers

namespace {

std::vector<RawDocument> read_lines(std::istream& in) {
    std::vector<RawDocument> out;
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos) continue;
        if (line[first] == '{') {
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(line);
            } catch (const nlohmann::json::exception& e) {
                throw ParseError(std::string("bad JSON record: ") + e.what(), n);
            }
            if (!j.is_object() || !j.contains("id") || !j.contains("text") || !j["id"].is_string() ||
                !j["text"].is_string())
                throw ParseError("JSON record needs string fields 'id' and 'text'", n);
            out.push_back({j["id"].get<std::string>(), j["text"].get<std::string>()});
        } else {
            auto tab = line.find('\t');
            if (tab == std::string::npos) throw ParseError("expected 'id<TAB>text'", n);
            out.push_back({line.substr(0, tab), line.substr(tab + 1)});
        }
    }
    return out;
}

std::vector<RawDocument> read_trec(std::istream& in) {
    std::vector<RawDocument> out;
    std::string line;
    std::size_t n = 0;
    bool in_doc = false;
    std::size_t doc_start = 0;
    std::string id;
    std::string body;
    while (std::getline(in, line)) {
        ++n;
        std::size_t pos = 0;
        while (pos <= line.size()) {
            if (!in_doc) {
                auto open = line.find("<DOC>", pos);
                if (open == std::string::npos) {
                    if (line.find_first_not_of(" \t\r", pos) != std::string::npos)
                        throw ParseError("text outside <DOC>", n);
                    break;
                }
                if (line.find_first_not_of(" \t\r", pos) < open)
                    throw ParseError("text outside <DOC>", n);
                in_doc = true;
                doc_start = n;
                id.clear();
                body.clear();
                pos = open + 5;
                continue;
            }
            auto close = line.find("</DOC>", pos);
            std::string chunk = line.substr(pos, close == std::string::npos ? std::string::npos : close - pos);
            if (chunk.find("<DOC>") != std::string::npos) throw ParseError("nested <DOC>", n);
            auto no = chunk.find("<DOCNO>");
            if (no != std::string::npos) {
                auto end = chunk.find("</DOCNO>", no);
                if (end == std::string::npos) throw ParseError("unterminated <DOCNO>", n);
                std::istringstream ss(chunk.substr(no + 7, end - no - 7));
                ss >> id;
                chunk.erase(no, end + 8 - no);
            }
            // Strip remaining markup.
            std::string clean;
            bool tag = false;
            for (char c : chunk) {
                if (c == '<') tag = true;
                else if (c == '>') { tag = false; clean.push_back(' '); }
                else if (!tag) clean.push_back(c);
            }
            body += clean;
            body.push_back(' ');
            if (close == std::string::npos) break;
            if (id.empty()) throw ParseError("<DOC> without <DOCNO>", doc_start);
            out.push_back({id, body});
            in_doc = false;
            pos = close + 6;
        }
    }
    if (in_doc) throw ParseError("unterminated <DOC>", doc_start);
    return out;
}

} // namespace

std::vector<RawDocument> read_corpus(std::istream& in, CorpusFormat format) {
    if (format == CorpusFormat::Auto) {
        std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        auto first = content.find_first_not_of(" \t\r\n");
        bool trec = first != std::string::npos && content.compare(first, 5, "<DOC>") == 0;
        std::istringstream ss(content);
        return trec ? read_trec(ss) : read_lines(ss);
    }
    return format == CorpusFormat::Trec ? read_trec(in) : read_lines(in);
}

std::vector<RawDocument> read_corpus(const std::filesystem::path& path, CorpusFormat format) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open corpus: " + path.string());
    return read_corpus(in, format);
}

} // namespace tfnorm
