#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace tfnorm {

using Token = std::string;

enum class SplitMode {
    Punctuation,  // any non-alphanumeric byte separates tokens
    Whitespace    // only whitespace separates tokens
};

/// Lowercased tokens. Never throws; empty input gives an empty list.
std::vector<Token> tokenize(std::string_view text, SplitMode mode = SplitMode::Punctuation);

class Stoplist {
public:
    Stoplist() = default;
    explicit Stoplist(std::set<std::string> words) : words_(std::move(words)) {}

    /// One word per line; blank lines and lines starting with '#' are ignored.
    static Stoplist load(const std::filesystem::path& path);
    /// The bundled 570-word English list (SMART).
    static const Stoplist& english();

    bool contains(std::string_view token) const { return words_.find(std::string(token)) != words_.end(); }
    std::size_t size() const noexcept { return words_.size(); }
    const std::set<std::string>& words() const noexcept { return words_; }

private:
    std::set<std::string> words_;
};

std::vector<Token> remove_stopwords(const std::vector<Token>& tokens, const Stoplist& stoplist);

/// Classic Porter (1980) suffix stripper. Tokens of length <= 2 and tokens
/// containing anything other than lowercase ASCII letters are returned as is.
Token stem(std::string_view token);

/// tokenize -> remove_stopwords -> stem, with each stage configurable.
struct TextPipeline {
    Stoplist stoplist = Stoplist::english();
    SplitMode split = SplitMode::Punctuation;
    bool stemming = true;

    std::vector<Token> analyze(std::string_view text) const;
};

} // namespace tfnorm
