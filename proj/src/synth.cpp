#include "tfnorm/synth.hpp"

#include "tfnorm/error.hpp"
#include "tfnorm/random.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

namespace tfnorm {

namespace {

// Consonant-vowel syllables with vowels a/o only: no English stopword and no
// Porter suffix rule matches such words, so they survive analysis unchanged.
class WordFactory {
public:
    explicit WordFactory(Rng& rng) : rng_(rng) {}

    std::string fresh() {
        static constexpr std::string_view kCons = "bdfgklmnprtvz";
        static constexpr std::string_view kVow = "ao";
        while (true) {
            std::string w;
            const std::size_t syllables = rng_.between(2, 3);
            for (std::size_t i = 0; i < syllables; ++i) {
                w.push_back(kCons[rng_.below(kCons.size())]);
                w.push_back(kVow[rng_.below(kVow.size())]);
            }
            if (used_.insert(w).second && !Stoplist::english().contains(w) && stem(w) == w) return w;
        }
    }

private:
    Rng& rng_;
    std::set<std::string> used_;
};

class WeightedPicker {
public:
    WeightedPicker() = default;
    explicit WeightedPicker(std::size_t n, double exponent) {
        double acc = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            acc += 1.0 / std::pow(static_cast<double>(r + 1), exponent);
            cumulative_.push_back(acc);
        }
    }

    std::size_t operator()(Rng& rng) const {
        const double u = rng.unit() * cumulative_.back();
        auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
        return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()),
                                     cumulative_.size() - 1);
    }

private:
    std::vector<double> cumulative_;
};

struct Vocabulary {
    std::vector<std::vector<std::string>> core;  // per topic, by descending weight
    std::vector<std::size_t> title_len;          // leading core terms used as the title
    std::vector<std::string> background;         // by descending frequency
    WeightedPicker core_pick;
    WeightedPicker background_pick;
};

std::size_t other_topic(Rng& rng, std::size_t topics, std::size_t topic) {
    std::size_t other = rng.below(topics - 1);
    return other >= topic ? other + 1 : other;
}

std::string segment(Rng& rng, const Vocabulary& v, std::size_t topic, const SyntheticOptions& o) {
    const std::size_t len = rng.between(o.segment_min, o.segment_max);
    const std::size_t topics = v.core.size();
    std::vector<std::string> words;
    for (std::size_t i = 0; i < len; ++i) {
        const double u = rng.unit();
        if (u < o.topical_share)
            words.push_back(v.core[topic][v.core_pick(rng)]);
        else if (u < o.topical_share + o.stray_rate && topics > 1)
            words.push_back(v.core[other_topic(rng, topics, topic)][v.core_pick(rng)]);
        else
            words.push_back(v.background[v.background_pick(rng)]);
    }
    if (topics > 1 && rng.chance(o.mention_rate)) {
        const std::size_t other = other_topic(rng, topics, topic);
        for (std::size_t i = 0; i < v.title_len[other]; ++i)
            words.insert(words.begin() + static_cast<std::ptrdiff_t>(rng.below(words.size() + 1)),
                         v.core[other][i]);
    }
    std::string text;
    for (const auto& w : words) text += (text.empty() ? "" : " ") + w;
    return text;
}

std::string join(const std::vector<std::string>& words) {
    std::string s;
    for (const auto& w : words) s += (s.empty() ? "" : " ") + w;
    return s;
}

} // namespace

SyntheticCollection make_synthetic_collection(const SyntheticOptions& o) {
    if (o.topics < 1 || o.documents < 1 || o.core_terms < 4 || o.background_terms < 1 ||
        o.segment_min < 1 || o.segment_max < o.segment_min)
        throw Error("invalid synthetic collection options");

    Rng rng(o.seed);
    WordFactory words(rng);
    Vocabulary v;
    const std::size_t pool_size = o.core_pool ? o.core_pool : o.topics * o.core_terms;
    if (pool_size < o.core_terms) throw Error("core term pool smaller than a topic");
    std::vector<std::string> pool;
    for (std::size_t i = 0; i < pool_size; ++i) pool.push_back(words.fresh());
    v.core.resize(o.topics);
    for (std::size_t t = 0; t < o.topics; ++t) {
        // Without a shared pool each topic owns a disjoint block.
        if (!o.core_pool) {
            v.core[t].assign(pool.begin() + static_cast<std::ptrdiff_t>(t * o.core_terms),
                             pool.begin() + static_cast<std::ptrdiff_t>((t + 1) * o.core_terms));
            continue;
        }
        while (v.core[t].size() < o.core_terms) {
            const auto& w = pool[rng.below(pool.size())];
            if (std::find(v.core[t].begin(), v.core[t].end(), w) == v.core[t].end()) v.core[t].push_back(w);
        }
    }
    for (std::size_t i = 0; i < o.background_terms; ++i) v.background.push_back(words.fresh());
    for (std::size_t t = 0; t < o.topics; ++t) v.title_len.push_back(rng.between(2, 3));
    v.core_pick = WeightedPicker(o.core_terms, 1.0);
    v.background_pick = WeightedPicker(o.background_terms, 1.0);

    SyntheticCollection out;
    char id[32];
    for (std::size_t t = 0; t < o.topics; ++t) {
        std::snprintf(id, sizeof id, "%zu", 101 + t);
        const auto& core = v.core[t];
        std::vector<std::string> title(core.begin(), core.begin() + static_cast<std::ptrdiff_t>(v.title_len[t]));
        std::vector<std::string> desc_terms(core.begin(), core.begin() + 4);
        desc_terms.push_back(v.background[v.background_pick(rng)]);
        desc_terms.push_back(v.background[v.background_pick(rng)]);
        std::vector<std::string> narr_terms(core.begin() + 2, core.begin() + std::min<std::ptrdiff_t>(7, static_cast<std::ptrdiff_t>(core.size())));
        for (int i = 0; i < 4; ++i) narr_terms.push_back(v.background[v.background_pick(rng)]);
        out.topics.push_back({id, join(title),
                              "Find documents that discuss " + join(desc_terms) + ".",
                              "A relevant document mentions " + join(narr_terms) +
                                  ". Documents that only mention them in passing are not relevant."});
    }

    for (std::size_t d = 0; d < o.documents; ++d) {
        std::snprintf(id, sizeof id, "SYN%05zu", d + 1);
        const double kind = rng.unit();
        std::vector<std::size_t> about;
        std::string text;
        if (kind < o.multi_share && o.topics >= 3) {
            const std::size_t n = std::min<std::size_t>(rng.between(3, 5), o.topics);
            while (about.size() < n) {
                std::size_t t = rng.below(o.topics);
                if (std::find(about.begin(), about.end(), t) == about.end()) about.push_back(t);
            }
            for (auto t : about) text += (text.empty() ? "" : "\n") + segment(rng, v, t, o);
        } else {
            about.push_back(rng.below(o.topics));
            const std::string seg = segment(rng, v, about[0], o);
            const std::size_t repeats = kind < o.multi_share + o.verbose_share ? rng.between(2, 4) : 1;
            for (std::size_t r = 0; r < repeats; ++r) text += (r ? " " : "") + seg;
        }
        for (auto t : about) out.qrels.add(out.topics[t].qid, id, 1);
        out.docs.push_back({id, std::move(text)});
    }
    return out;
}

void SyntheticCollection::write(const std::filesystem::path& dir) const {
    std::filesystem::create_directories(dir);
    {
        std::ofstream c(dir / "corpus.tsv", std::ios::binary);
        for (const auto& d : docs) {
            std::string text = d.text;
            std::replace(text.begin(), text.end(), '\n', ' ');
            c << d.id << '\t' << text << '\n';
        }
    }
    {
        std::ofstream t(dir / "topics.txt", std::ios::binary);
        for (const auto& tp : topics)
            t << "<top>\n<num> Number: " << tp.qid << "\n<title> " << tp.title
              << "\n<desc> Description:\n" << tp.desc << "\n<narr> Narrative:\n" << tp.narr
              << "\n</top>\n\n";
    }
    {
        std::ofstream q(dir / "qrels.txt", std::ios::binary);
        qrels.write(q);
    }
    if (!std::filesystem::exists(dir / "qrels.txt")) throw Error("cannot write synthetic collection");
}

} // namespace tfnorm
