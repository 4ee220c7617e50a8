#include "tfnorm/text.hpp"

#include "tfnorm/error.hpp"

#include <algorithm>
#include <array>
#include <fstream>

namespace tfnorm {

namespace {

bool is_alnum(unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

bool is_space(unsigned char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

char lower(unsigned char c) {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : static_cast<char>(c);
}

} // namespace

std::vector<Token> tokenize(std::string_view text, SplitMode mode) {
    std::vector<Token> out;
    Token cur;
    for (unsigned char c : text) {
        bool boundary = mode == SplitMode::Punctuation ? !is_alnum(c) : is_space(c);
        if (boundary) {
            if (!cur.empty()) out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(lower(c));
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

Stoplist Stoplist::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open stoplist: " + path.string());
    std::set<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        auto toks = tokenize(line, SplitMode::Whitespace);
        if (toks.empty() || toks.front().starts_with('#')) continue;
        for (auto& t : toks) words.insert(std::move(t));
    }
    return Stoplist(std::move(words));
}

const Stoplist& Stoplist::english() {
    static const Stoplist list = [] {
        static constexpr const char* kWords[] = {
#include "stopwords_en.inc"
        };
        return Stoplist(std::set<std::string>(std::begin(kWords), std::end(kWords)));
    }();
    return list;
}

std::vector<Token> remove_stopwords(const std::vector<Token>& tokens, const Stoplist& stoplist) {
    std::vector<Token> out;
    out.reserve(tokens.size());
    std::copy_if(tokens.begin(), tokens.end(), std::back_inserter(out),
                 [&](const Token& t) { return !stoplist.contains(t); });
    return out;
}

// ---------------------------------------------------------------------------
// Porter stemmer. The word is held in w_; `end_` is one past the last live
// character and `stem_end_` marks the stem boundary after a suffix match.

namespace {

class PorterStemmer {
public:
    explicit PorterStemmer(std::string word) : w_(std::move(word)), end_(w_.size()) {}

    std::string run() {
        step1a();
        step1b();
        step1c();
        step2();
        step3();
        step4();
        step5a();
        step5b();
        w_.resize(end_);
        return w_;
    }

private:
    bool consonant(std::size_t i) const {
        switch (w_[i]) {
            case 'a': case 'e': case 'i': case 'o': case 'u': return false;
            case 'y': return i == 0 || !consonant(i - 1);
            default: return true;
        }
    }

    // m() in [C](VC)^m[V] over w_[0, len).
    int measure(std::size_t len) const {
        int m = 0;
        std::size_t i = 0;
        while (i < len && consonant(i)) ++i;
        while (i < len) {
            while (i < len && !consonant(i)) ++i;
            if (i >= len) break;
            while (i < len && consonant(i)) ++i;
            ++m;
        }
        return m;
    }

    bool has_vowel(std::size_t len) const {
        for (std::size_t i = 0; i < len; ++i)
            if (!consonant(i)) return true;
        return false;
    }

    bool double_consonant(std::size_t len) const {
        return len >= 2 && w_[len - 1] == w_[len - 2] && consonant(len - 1);
    }

    // *o: stem ends cvc and the final c is not w, x or y.
    bool cvc(std::size_t len) const {
        if (len < 3) return false;
        if (!consonant(len - 1) || consonant(len - 2) || !consonant(len - 3)) return false;
        char c = w_[len - 1];
        return c != 'w' && c != 'x' && c != 'y';
    }

    bool ends(std::string_view suffix) const {
        return end_ >= suffix.size() && std::string_view(w_).substr(0, end_).ends_with(suffix);
    }

    void replace(std::string_view suffix, std::string_view with) {
        w_.replace(end_ - suffix.size(), suffix.size(), with);
        end_ = end_ - suffix.size() + with.size();
        w_.resize(end_);
    }

    struct Rule {
        std::string_view suffix;
        std::string_view replacement;
    };

    // Longest matching suffix wins; if its condition fails the step does nothing.
    template <std::size_t N>
    void apply_longest(const std::array<Rule, N>& rules, int min_measure) {
        const Rule* best = nullptr;
        for (const auto& r : rules)
            if (ends(r.suffix) && (!best || r.suffix.size() > best->suffix.size())) best = &r;
        if (best && measure(end_ - best->suffix.size()) > min_measure)
            replace(best->suffix, best->replacement);
    }

    void step1a() {
        if (ends("sses")) replace("sses", "ss");
        else if (ends("ies")) replace("ies", "i");
        else if (ends("ss")) {}
        else if (ends("s")) replace("s", "");
    }

    void step1b() {
        if (ends("eed")) {
            if (measure(end_ - 3) > 0) replace("eed", "ee");
            return;
        }
        std::string_view hit;
        if (ends("ed") && has_vowel(end_ - 2)) hit = "ed";
        else if (ends("ing") && has_vowel(end_ - 3)) hit = "ing";
        if (hit.empty()) return;
        replace(hit, "");

        if (ends("at")) replace("at", "ate");
        else if (ends("bl")) replace("bl", "ble");
        else if (ends("iz")) replace("iz", "ize");
        else if (double_consonant(end_)) {
            char c = w_[end_ - 1];
            if (c != 'l' && c != 's' && c != 'z') {
                --end_;
                w_.resize(end_);
            }
        } else if (measure(end_) == 1 && cvc(end_)) {
            w_.push_back('e');
            ++end_;
        }
    }

    void step1c() {
        if (ends("y") && has_vowel(end_ - 1)) w_[end_ - 1] = 'i';
    }

    void step2() {
        static constexpr std::array<Rule, 20> rules{{
            {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"}, {"anci", "ance"},
            {"izer", "ize"},    {"abli", "able"},   {"alli", "al"},   {"entli", "ent"},
            {"eli", "e"},       {"ousli", "ous"},   {"ization", "ize"}, {"ation", "ate"},
            {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"}, {"fulness", "ful"},
            {"ousness", "ous"}, {"aliti", "al"},    {"iviti", "ive"},  {"biliti", "ble"},
        }};
        apply_longest(rules, 0);
    }

    void step3() {
        static constexpr std::array<Rule, 7> rules{{
            {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
            {"ical", "ic"},  {"ful", ""},   {"ness", ""},
        }};
        apply_longest(rules, 0);
    }

    void step4() {
        static constexpr std::array<std::string_view, 19> suffixes{
            "al",  "ance", "ence", "er",  "ic",  "able", "ible", "ant", "ement", "ment",
            "ent", "ion",  "ou",   "ism", "ate", "iti",  "ous",  "ive", "ize"};
        std::string_view best;
        for (auto s : suffixes)
            if (ends(s) && s.size() > best.size()) best = s;
        if (best.empty()) return;
        std::size_t stem_len = end_ - best.size();
        if (measure(stem_len) <= 1) return;
        if (best == "ion" && !(stem_len > 0 && (w_[stem_len - 1] == 's' || w_[stem_len - 1] == 't')))
            return;
        replace(best, "");
    }

    void step5a() {
        if (!ends("e")) return;
        std::size_t stem_len = end_ - 1;
        int m = measure(stem_len);
        if (m > 1 || (m == 1 && !cvc(stem_len))) replace("e", "");
    }

    void step5b() {
        if (measure(end_) > 1 && double_consonant(end_) && w_[end_ - 1] == 'l') {
            --end_;
            w_.resize(end_);
        }
    }

    std::string w_;
    std::size_t end_;
};

} // namespace

Token stem(std::string_view token) {
    if (token.size() <= 2) return Token(token);
    if (!std::all_of(token.begin(), token.end(), [](char c) { return c >= 'a' && c <= 'z'; }))
        return Token(token);
    return PorterStemmer(std::string(token)).run();
}

std::vector<Token> TextPipeline::analyze(std::string_view text) const {
    auto tokens = remove_stopwords(tokenize(text, split), stoplist);
    if (stemming)
        for (auto& t : tokens) t = stem(t);
    return tokens;
}

} // namespace tfnorm
