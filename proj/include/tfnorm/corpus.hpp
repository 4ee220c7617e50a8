#pragma once

#include "tfnorm/text.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tfnorm {

using Count = std::uint64_t;
using TermCounts = std::map<std::string, Count, std::less<>>;

/// A bag-of-words document with cached length and topic statistics.
/// Zero counts are never stored.
class Document {
public:
    Document() = default;

    /// Builds from raw counts; zero entries are dropped. Throws if no term
    /// has a positive count.
    static Document from_counts(std::string doc_id, TermCounts tf);

    const std::string& id() const noexcept { return id_; }
    const TermCounts& tf() const noexcept { return tf_; }
    Count tf(std::string_view term) const;
    Count length() const noexcept { return length_; }
    Count vocab_size() const noexcept { return tf_.size(); }
    /// exp(entropy) of the unsmoothed document model.
    double info_quantity() const noexcept { return info_quantity_; }

    friend bool operator==(const Document&, const Document&) = default;

private:
    std::string id_;
    TermCounts tf_;
    Count length_ = 0;
    double info_quantity_ = 0.0;
};

struct CollectionStats {
    TermCounts ctf;
    Count total_length = 0;
    Count doc_count = 0;
    double mean_tau_vocab = 0.0;
    double mean_tau_info = 0.0;

    Count cf(std::string_view term) const;

    /// Accumulates over documents in the given order.
    static CollectionStats compute(const std::vector<Document>& docs);

    friend bool operator==(const CollectionStats&, const CollectionStats&) = default;
};

struct Posting {
    std::uint32_t doc;  // position in InvertedIndex::docs(), which is sorted by id
    Count tf;

    friend bool operator==(const Posting&, const Posting&) = default;
};

/// Pipeline settings recorded with the index so queries are analyzed the
/// same way documents were.
struct AnalyzerSettings {
    SplitMode split = SplitMode::Punctuation;
    bool stemming = true;
    std::vector<std::string> stopwords;  // sorted

    TextPipeline pipeline() const;
    static AnalyzerSettings from(const TextPipeline& p);

    friend bool operator==(const AnalyzerSettings&, const AnalyzerSettings&) = default;
};

/// Immutable term -> postings map plus the document table and collection
/// statistics. Documents are stored sorted by id; postings lists follow
/// that order.
class InvertedIndex {
public:
    static constexpr std::string_view kFormatTag = "tfnorm-index";
    static constexpr int kFormatVersion = 1;

    InvertedIndex() = default;
    /// Throws on an empty document set or duplicate ids.
    InvertedIndex(std::vector<Document> docs, AnalyzerSettings analyzer);

    const std::vector<Document>& docs() const noexcept { return docs_; }
    const CollectionStats& stats() const noexcept { return stats_; }
    const AnalyzerSettings& analyzer() const noexcept { return analyzer_; }
    const std::map<std::string, std::vector<Posting>, std::less<>>& postings() const noexcept {
        return postings_;
    }
    const std::vector<Posting>& postings(std::string_view term) const;
    const Document* find(std::string_view doc_id) const;

    /// Cross-checks postings, document table and statistics; throws on any mismatch.
    void verify() const;

    void save(std::ostream& out) const;
    void save(const std::filesystem::path& path) const;
    static InvertedIndex load(std::istream& in);
    static InvertedIndex load(const std::filesystem::path& path);

    friend bool operator==(const InvertedIndex&, const InvertedIndex&) = default;

private:
    std::vector<Document> docs_;
    std::map<std::string, std::vector<Posting>, std::less<>> postings_;
    CollectionStats stats_;
    AnalyzerSettings analyzer_;
};

struct RawDocument {
    std::string id;
    std::string text;
};

/// Runs the text pipeline over one document. Throws when no token survives.
Document build_document(std::string doc_id, std::string_view text, const TextPipeline& pipeline);

/// Throws on an empty corpus, an empty or duplicate id, or a document with
/// no surviving tokens. `workers` > 1 analyzes documents concurrently.
InvertedIndex build_index(const std::vector<RawDocument>& docs, const TextPipeline& pipeline,
                          unsigned workers = 1);

enum class CorpusFormat { Auto, Lines, Trec };

/// Lines: one document per line, either `id<TAB>text` or a JSON object
/// {"id": ..., "text": ...}. Trec: <DOC><DOCNO>id</DOCNO> ... </DOC>.
std::vector<RawDocument> read_corpus(std::istream& in, CorpusFormat format = CorpusFormat::Auto);
std::vector<RawDocument> read_corpus(const std::filesystem::path& path,
                                     CorpusFormat format = CorpusFormat::Auto);

} // namespace tfnorm
