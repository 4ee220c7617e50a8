#include "tfnorm/error.hpp"
#include "tfnorm/eval.hpp"
#include "tfnorm/synth.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace tfnorm;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

} // namespace

TEST_CASE("synthetic collection shape") {
    SyntheticOptions o;
    o.documents = 300;
    o.topics = 20;
    const auto c = make_synthetic_collection(o);
    CHECK(c.docs.size() == 300);
    CHECK(c.topics.size() == 20);
    std::size_t judged = 0, multi = 0;
    for (const auto& d : c.docs) {
        std::size_t topics = 0;
        for (const auto& t : c.topics) topics += c.qrels.relevant(t.qid, d.id) ? 1 : 0;
        CHECK(topics >= 1);
        CHECK(topics <= 5);
        judged += topics;
        if (topics >= 3) ++multi;
    }
    CHECK(multi > 30);  // about 30% multi-topical
    std::size_t listed = 0;
    for (const auto& t : c.topics) listed += c.qrels.num_relevant(t.qid);
    CHECK(listed == judged);
}

TEST_CASE("synthetic words survive analysis unchanged") {
    SyntheticOptions o;
    o.documents = 50;
    const auto c = make_synthetic_collection(o);
    const TextPipeline p;
    for (const auto& d : c.docs) CHECK(p.analyze(d.text) == tokenize(d.text));
    for (const auto& t : c.topics) {
        CHECK(p.analyze(t.title) == tokenize(t.title));
        const auto n = tokenize(t.title).size();
        CHECK(n >= 2);
        CHECK(n <= 3);
    }
}

TEST_CASE("verbose documents repeat one segment") {
    const auto c = make_synthetic_collection({});
    std::size_t verbose = 0;
    for (const auto& d : c.docs) {
        const auto toks = tokenize(d.text);
        for (std::size_t k = 2; k <= 4; ++k) {
            if (toks.size() % k) continue;
            const std::size_t seg = toks.size() / k;
            bool repeated = true;
            for (std::size_t i = seg; i < toks.size() && repeated; ++i) repeated = toks[i] == toks[i - seg];
            if (repeated) {
                ++verbose;
                break;
            }
        }
    }
    CHECK(verbose > 120);  // about 20% of 1000
    CHECK(verbose < 280);
}

TEST_CASE("synthetic collection is seeded") {
    SyntheticOptions o;
    o.documents = 100;
    const auto a = make_synthetic_collection(o);
    const auto b = make_synthetic_collection(o);
    o.seed = 1;
    const auto c = make_synthetic_collection(o);
    bool same = true, differ = false;
    for (std::size_t i = 0; i < a.docs.size(); ++i) {
        same = same && a.docs[i].text == b.docs[i].text;
        differ = differ || a.docs[i].text != c.docs[i].text;
    }
    CHECK(same);
    CHECK(differ);
}

TEST_CASE("written files parse back") {
    SyntheticOptions o;
    o.documents = 80;
    o.topics = 10;
    const auto c = make_synthetic_collection(o);
    const auto dir = std::filesystem::temp_directory_path() / "tfnorm_synth_test";
    std::filesystem::remove_all(dir);
    c.write(dir);

    const auto docs = read_corpus(dir / "corpus.tsv");
    REQUIRE(docs.size() == c.docs.size());
    for (std::size_t i = 0; i < docs.size(); ++i) {
        CHECK(docs[i].id == c.docs[i].id);
        CHECK(tokenize(docs[i].text) == tokenize(c.docs[i].text));
    }
    const auto topics = parse_topics(dir / "topics.txt");
    REQUIRE(topics.size() == c.topics.size());
    for (std::size_t i = 0; i < topics.size(); ++i) {
        CHECK(topics[i].qid == c.topics[i].qid);
        CHECK(topics[i].title == c.topics[i].title);
        CHECK(topics[i].desc == c.topics[i].desc);
        CHECK(topics[i].narr == c.topics[i].narr);
    }
    const Qrels q = Qrels::load(dir / "qrels.txt");
    for (const auto& t : c.topics) CHECK(q.num_relevant(t.qid) == c.qrels.num_relevant(t.qid));

    const std::string first = slurp(dir / "corpus.tsv");
    c.write(dir);
    CHECK(slurp(dir / "corpus.tsv") == first);
    std::filesystem::remove_all(dir);
}

TEST_CASE("invalid synthetic options") {
    SyntheticOptions o;
    o.segment_max = o.segment_min - 1;
    CHECK_THROWS_AS(make_synthetic_collection(o), Error);
    o = {};
    o.documents = 0;
    CHECK_THROWS_AS(make_synthetic_collection(o), Error);
    o = {};
    o.core_pool = 3;
    CHECK_THROWS_AS(make_synthetic_collection(o), Error);
}
