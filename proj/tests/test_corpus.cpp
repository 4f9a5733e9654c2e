#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "dfd/corpus.hpp"
#include "dfd/errors.hpp"

using namespace dfd;

namespace {

// Independent window enumerator: recounts everything from raw token lists
// with its own containers, no shared code with the library.
struct Brute {
    std::set<std::string> vocab;
    std::map<std::string, long> uni;
    std::map<std::pair<std::string, std::string>, long> pair;  // lexicographic key order
    long total = 0;

    Brute(const std::vector<std::vector<std::string>>& docs, int w) {
        for (const auto& d : docs)
            for (const auto& t : d) vocab.insert(t);
        for (const auto& d : docs) {
            if (d.empty()) continue;
            const int n = static_cast<int>(d.size());
            const int count = n <= w ? 1 : n - w + 1;
            for (int s = 0; s < count; ++s) {
                std::set<std::string> seen(d.begin() + s, d.begin() + std::min(s + w, n));
                for (const auto& a : seen) ++uni[a];
                for (auto i = seen.begin(); i != seen.end(); ++i)
                    for (auto j = std::next(i); j != seen.end(); ++j) ++pair[{*i, *j}];
                ++total;
            }
        }
    }

    double p(const std::string& a) const { return static_cast<double>(uni.at(a)) / total; }
    long pair_count(const std::string& a, const std::string& b) const {
        auto key = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
        auto it = pair.find(key);
        return it == pair.end() ? 0 : it->second;
    }
    double pmi(const std::string& a, const std::string& b) const {
        return std::log((static_cast<double>(pair_count(a, b)) / total) / (p(a) * p(b)));
    }
    // PPMI row over sorted vocab, self entry zero.
    std::vector<double> vec(const std::string& a) const {
        std::vector<double> v;
        for (const auto& b : vocab) {
            if (b == a || pair_count(a, b) == 0)
                v.push_back(0.0);
            else
                v.push_back(std::max(0.0, pmi(a, b)));
        }
        return v;
    }
    double cosine(const std::string& a, const std::string& b) const {
        const auto va = vec(a), vb = vec(b);
        double dot = 0, na = 0, nb = 0;
        for (std::size_t i = 0; i < va.size(); ++i) {
            dot += va[i] * vb[i];
            na += va[i] * va[i];
            nb += vb[i] * vb[i];
        }
        if (na == 0 || nb == 0) return 0;
        return dot / (std::sqrt(na) * std::sqrt(nb));
    }
};

std::vector<corpus::Document> make_docs(const std::vector<std::vector<std::string>>& token_docs) {
    std::vector<corpus::Document> docs;
    for (std::size_t i = 0; i < token_docs.size(); ++i) {
        corpus::Document d;
        d.id = "doc" + std::to_string(i);
        d.tokens = token_docs[i];
        docs.push_back(d);
    }
    return docs;
}

// Three small corpora exercising short docs, repeats, and multi-window docs.
const std::vector<std::vector<std::vector<std::string>>> kToyCorpora = {
    {{"load", "heat", "rises"},
     {"load", "rain", "falls"},
     {"heat", "wave", "load", "peak"}},
    {{"load", "price", "gas", "load", "price"},
     {"gas", "price", "market"},
     {"load", "market", "demand", "gas", "price", "load"},
     {"demand", "load"}},
    {{"a", "b", "c", "d", "e", "f", "g", "load"},
     {"load", "b", "load", "c", "b", "a"},
     {"g", "f", "e", "load"},
     {"load", "a"},
     {"b", "load", "a", "c"}},
};

}  // namespace

TEST_CASE("tokenize lowercases, strips punctuation and digits, drops stopwords") {
    std::set<std::string> stop{"the", "and"};
    auto toks = corpus::tokenize("The LOAD, and 42 heat-waves!", stop);
    CHECK(toks == std::vector<std::string>{"load", "heat", "waves"});
    CHECK(corpus::tokenize("", stop).empty());
    CHECK(corpus::tokenize("1984 2001", stop).empty());
}

TEST_CASE("statistics match the brute-force window enumerator") {
    for (int w : {2, 3, 5}) {
        for (const auto& toy : kToyCorpora) {
            const auto stats = corpus::build_stats(make_docs(toy), w);
            const Brute brute(toy, w);

            REQUIRE(stats.total_windows == brute.total);
            REQUIRE(stats.vocab.size() == brute.vocab.size());
            for (const auto& a : brute.vocab) {
                CHECK(stats.p(stats.index_of(a)) == doctest::Approx(brute.p(a)).epsilon(1e-12));
                for (const auto& b : brute.vocab) {
                    if (a >= b) continue;
                    CHECK(stats.pair_count(stats.index_of(a), stats.index_of(b)) == brute.pair_count(a, b));
                    if (brute.pair_count(a, b) > 0) {
                        CHECK(corpus::pmi(stats, a, b) ==
                              doctest::Approx(brute.pmi(a, b)).epsilon(1e-12));
                    }
                }
            }
        }
    }
}

TEST_CASE("word vectors and cosine match the oracle") {
    for (const auto& toy : kToyCorpora) {
        const auto stats = corpus::build_stats(make_docs(toy), 3);
        const Brute brute(toy, 3);
        for (const auto& a : brute.vocab) {
            const auto wv = corpus::word_vector(stats, a);
            const auto bv = brute.vec(a);
            REQUIRE(wv.values.size() == bv.size());
            for (std::size_t i = 0; i < bv.size(); ++i)
                CHECK(wv.values[i] == doctest::Approx(bv[i]).epsilon(1e-12));
        }
        for (const auto& a : brute.vocab)
            for (const auto& b : brute.vocab) {
                if (a >= b) continue;
                const double bc = brute.cosine(a, b);
                if (bc > corpus::kCosineFloor)
                    CHECK(corpus::cosine(corpus::word_vector(stats, a), corpus::word_vector(stats, b)) ==
                          doctest::Approx(bc).epsilon(1e-12));
            }
    }
}

TEST_CASE("dcw scores match pmi over cosine and the ranking obeys the threshold") {
    for (const auto& toy : kToyCorpora) {
        const auto stats = corpus::build_stats(make_docs(toy), 3);
        const Brute brute(toy, 3);
        const auto ranking = corpus::rank_features(stats, "load", 0.1);

        int defined = 0;
        for (const auto& a : brute.vocab) {
            if (a == "load") continue;
            const double c = brute.cosine(a, "load");
            if (brute.pair_count(a, "load") == 0 || c <= corpus::kCosineFloor) {
                CHECK_THROWS_AS((void)corpus::dcw_score(stats, "load", a), ComputeError);
                continue;
            }
            ++defined;
            const double want = brute.pmi(a, "load") / c;
            CHECK(corpus::dcw_score(stats, "load", a) == doctest::Approx(want).epsilon(1e-12));
            // the same word must appear in the ranking with the same score
            bool found = false;
            for (const auto& e : ranking.entries)
                if (e.word == a) {
                    found = true;
                    CHECK(e.dcw == doctest::Approx(want).epsilon(1e-12));
                    CHECK(e.kept == (e.dcw > 0.1));
                }
            CHECK(found);
        }
        CHECK(static_cast<int>(ranking.entries.size()) == defined);
        CHECK(ranking.undefined_count ==
              static_cast<int>(brute.vocab.size()) - 1 - defined);

        // sorted dcw descending, ties by word ascending
        for (std::size_t i = 1; i < ranking.entries.size(); ++i) {
            const auto& prev = ranking.entries[i - 1];
            const auto& cur = ranking.entries[i];
            CHECK((prev.dcw > cur.dcw || (prev.dcw == cur.dcw && prev.word < cur.word)));
        }
    }
}

TEST_CASE("dcw is undefined for orthogonal context vectors") {
    // "temperature" and "load" co-occur only with each other, so their PPMI
    // rows share no nonzero coordinate and the cosine collapses to zero.
    const auto docs = make_docs({{"load", "temperature"}, {"load", "temperature"}});
    const auto stats = corpus::build_stats(docs, 2);
    CHECK_THROWS_WITH_AS((void)corpus::dcw_score(stats, "load", "temperature"),
                         doctest::Contains("undefined DCW"), ComputeError);
}

TEST_CASE("document ingestion order does not change the statistics") {
    auto toy = kToyCorpora[1];
    const auto a = corpus::build_stats(make_docs(toy), 3);
    std::reverse(toy.begin(), toy.end());
    const auto b = corpus::build_stats(make_docs(toy), 3);
    CHECK(a.vocab == b.vocab);
    CHECK(a.unigram_windows == b.unigram_windows);
    CHECK(a.pair_windows == b.pair_windows);
    CHECK(a.total_windows == b.total_windows);
}

TEST_CASE("mutual information equals the brute-force pair sum") {
    for (const auto& toy : kToyCorpora) {
        const auto stats = corpus::build_stats(make_docs(toy), 3);
        const Brute brute(toy, 3);
        double want = 0;
        for (const auto& [key, count] : brute.pair)
            want += (static_cast<double>(count) / brute.total) * brute.pmi(key.first, key.second);
        CHECK(corpus::mutual_information(stats) == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("build_stats validation") {
    CHECK_THROWS_AS((void)corpus::build_stats(make_docs({{"a", "b"}}), 1), ValidationError);
    CHECK_THROWS_AS((void)corpus::build_stats({}, 3), ValidationError);
    const auto stats = corpus::build_stats(make_docs({{"a", "b"}}), 3);
    CHECK_THROWS_AS((void)stats.index_of("zebra"), ValidationError);
    CHECK_THROWS_AS((void)corpus::rank_features(stats, "zebra", 0.1), ValidationError);
}
