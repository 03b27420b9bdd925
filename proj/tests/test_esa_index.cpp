#include <doctest.h>

#include <omp.h>

#include <cmath>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "dataless/concept_vector.hpp"
#include "dataless/error.hpp"
#include "dataless/esa_index.hpp"
#include "support.hpp"

using namespace dataless;
using fixtures::corpus;

namespace {

std::string serialize(const EsaIndex& index) {
    std::ostringstream os;
    index.write(os);
    return os.str();
}

ConceptVector vec(std::size_t dim, std::vector<ConceptEntry> entries) {
    return ConceptVector::from_entries(dim, std::move(entries));
}

// Postings recomputed from raw text with no shared code: term -> (concept, weight).
std::map<std::string, std::map<ConceptIndex, double>> brute_force_postings(const std::vector<ConceptDoc>& docs) {
    std::map<std::string, std::map<ConceptIndex, double>> tf;
    for (std::size_t c = 0; c < docs.size(); ++c)
        for (const auto& tok : tokenize(docs[c].text)) tf[tok][static_cast<ConceptIndex>(c)] += 1.0;
    std::map<std::string, std::map<ConceptIndex, double>> out;
    const double n = static_cast<double>(docs.size());
    for (const auto& [term, per_concept] : tf) {
        const double df = static_cast<double>(per_concept.size());
        if (df == n) continue;
        for (const auto& [c, count] : per_concept) out[term][c] = count * std::log(n / df);
    }
    return out;
}

}  // namespace

TEST_CASE("build_index weights") {
    const auto idx = build_index(corpus("en", {{"Physics", "quark quark quark energy"}, {"Art", "paint energy"}}));
    const auto quark = idx.postings("quark");
    REQUIRE(quark.size() == 1);
    CHECK(quark[0].concept_index == 0);
    CHECK(quark[0].weight == doctest::Approx(3.0 * std::log(2.0)).epsilon(1e-15));
    CHECK(idx.postings("energy").empty());
    CHECK(idx.doc_freq("energy") == 2);
    CHECK(idx.doc_freq("nothing") == 0);
    CHECK(idx.n_concepts() == 2);
    CHECK(idx.find_title("Art") == ConceptIndex{1});
    CHECK_FALSE(idx.find_title("Music").has_value());
}

TEST_CASE("prune_top_k") {
    const auto docs = corpus("en", {{"A", "x"}, {"B", "x x x"}, {"C", "x x"}, {"D", "y"}});
    const auto full = build_index(docs);
    CHECK(full.postings("x").size() == 3);
    IndexOptions opts;
    opts.prune_top_k = 1;
    const auto pruned = build_index(docs, opts);
    REQUIRE(pruned.postings("x").size() == 1);
    CHECK(pruned.postings("x")[0].concept_index == 1);
    CHECK(pruned.doc_freq("x") == 3);

    // Ties go to the lower concept index and postings stay sorted.
    const auto tied = build_index(corpus("en", {{"A", "x"}, {"B", "x"}, {"C", "x"}, {"D", "y"}}), IndexOptions{2});
    REQUIRE(tied.postings("x").size() == 2);
    CHECK(tied.postings("x")[0].concept_index == 0);
    CHECK(tied.postings("x")[1].concept_index == 1);
}

TEST_CASE("weights match a brute-force recomputation") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto world = fixtures::random_world(seed);
        const auto idx = build_index(world.concepts);
        const auto oracle = brute_force_postings(world.concepts);
        std::size_t non_empty = 0;
        for (const auto& term : idx.terms()) {
            const auto p = idx.postings(term);
            if (!p.empty()) ++non_empty;
            const auto it = oracle.find(term);
            if (it == oracle.end()) {
                CHECK(p.empty());
                continue;
            }
            REQUIRE(p.size() == it->second.size());
            for (const auto& e : p) CHECK(e.weight == doctest::Approx(it->second.at(e.concept_index)).epsilon(1e-14));
        }
        CHECK(non_empty == oracle.size());
    }
}

TEST_CASE("embed_text") {
    const auto idx = build_index(corpus("en", {{"A", "a b"}, {"B", "b c c"}, {"C", "d"}}));
    CHECK(embed_text(idx, {}).is_zero());
    CHECK(embed_text(idx, {}).dimension() == 3);
    CHECK(embed_text(idx, {"zzz"}).is_zero());

    const auto a = embed_text(idx, {"a"});
    const auto postings = idx.postings("a");
    REQUIRE(a.nnz() == postings.size());
    for (std::size_t i = 0; i < postings.size(); ++i) CHECK(a.entries()[i] == postings[i]);

    CHECK(embed_text(idx, {"a", "a"}) == a.scaled(2.0));
}

TEST_CASE("embed_text is additive over concatenation") {
    std::mt19937_64 rng(9);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto world = fixtures::random_world(seed);
        const auto idx = build_index(world.concepts);
        for (int trial = 0; trial < 10; ++trial) {
            std::vector<std::string> a;
            std::vector<std::string> b;
            for (std::size_t i = 0; i < rng() % 8; ++i) a.push_back(world.vocabulary[rng() % world.vocabulary.size()]);
            for (std::size_t i = 0; i < rng() % 8; ++i) b.push_back(world.vocabulary[rng() % world.vocabulary.size()]);
            auto ab = a;
            ab.insert(ab.end(), b.begin(), b.end());
            const auto lhs = embed_text(idx, ab);
            const auto rhs = embed_text(idx, a) + embed_text(idx, b);
            REQUIRE(lhs.nnz() == rhs.nnz());
            for (std::size_t i = 0; i < lhs.nnz(); ++i) {
                CHECK(lhs.entries()[i].concept_index == rhs.entries()[i].concept_index);
                CHECK(lhs.entries()[i].weight == doctest::Approx(rhs.entries()[i].weight).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("cosine") {
    const auto u = vec(3, {{0, 1.0}, {1, 1.0}});
    const auto v = vec(3, {{1, 1.0}, {2, 1.0}});
    CHECK(cosine(u, v) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(cosine(u, u) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(cosine(vec(3, {{0, 2.0}}), vec(3, {{2, 5.0}})) == 0.0);
    CHECK(cosine(u, ConceptVector(3)) == 0.0);
    CHECK_THROWS_AS(dot(u, ConceptVector(4)), Error);
    CHECK_THROWS_AS(vec(3, {{3, 1.0}}), Error);
    CHECK_THROWS_AS(vec(3, {{0, -1.0}}), Error);
    CHECK(vec(3, {{2, 1.0}, {0, 1.0}, {2, 2.0}, {1, 0.0}}) == vec(3, {{0, 1.0}, {2, 3.0}}));
}

TEST_CASE("cosine properties on random vectors") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> w(0.0, 5.0);
    auto random_vec = [&] {
        std::vector<ConceptEntry> e;
        for (std::size_t i = 0; i < rng() % 10; ++i) e.push_back({static_cast<ConceptIndex>(rng() % 16), w(rng)});
        return vec(16, e);
    };
    for (int trial = 0; trial < 1000; ++trial) {
        const auto a = random_vec();
        const auto b = random_vec();
        const double c = cosine(a, b);
        CHECK(c >= 0.0);
        CHECK(c <= 1.0);
        CHECK(c == cosine(b, a));
        const double alpha = 0.01 + w(rng);
        CHECK(cosine(a.scaled(alpha), b) == doctest::Approx(c).epsilon(1e-12));
        if (!a.is_zero()) CHECK(cosine(a, a) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("index serialization round trip") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto world = fixtures::random_world(seed);
        IndexOptions opts;
        if (seed % 2) opts.prune_top_k = 1 + seed % 3;
        const auto idx = build_index(world.concepts, opts);
        const auto text = serialize(idx);
        std::istringstream in(text);
        const auto back = EsaIndex::read(in);
        CHECK(back == idx);
        CHECK(serialize(back) == text);
    }
    std::istringstream junk("{\"format\":\"something-else\"}\n");
    CHECK_THROWS_AS(EsaIndex::read(junk), Error);
}

TEST_CASE("index build is identical for every thread count and matches the serial build") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto world = fixtures::random_world(seed);
        const auto reference = serialize(build_index_serial(world.concepts));
        for (const int threads : {1, 2, 8}) {
            omp_set_num_threads(threads);
            CHECK(serialize(build_index(world.concepts)) == reference);
        }
        omp_set_num_threads(1);
    }
}

TEST_CASE("restrict recomputes document frequencies") {
    // Ten concepts; restricting to a subset must match an index built from that subset.
    std::vector<std::pair<std::string, std::string>> rows;
    const char* texts[10] = {"alpha beta gamma", "beta beta delta", "gamma epsilon", "alpha zeta", "eta theta beta",
                             "iota alpha alpha", "kappa beta", "lambda gamma mu", "mu nu alpha", "xi beta omicron"};
    for (int i = 0; i < 10; ++i) rows.emplace_back("C" + std::to_string(i), texts[i]);
    const auto docs = corpus("en", rows);
    const auto full = build_index(docs);
    const std::vector<ConceptIndex> subset{9, 1, 4, 6};
    const auto restricted = full.restrict(subset);

    std::vector<ConceptDoc> sub_docs;
    for (const auto c : subset) sub_docs.push_back(docs[c]);
    const auto oracle = brute_force_postings(sub_docs);

    CHECK(restricted.n_concepts() == subset.size());
    CHECK(restricted.titles() == std::vector<std::string>{"C9", "C1", "C4", "C6"});
    for (const auto& term : restricted.terms()) {
        std::size_t df = 0;
        for (const auto& d : sub_docs) {
            const auto toks = tokenize(d.text);
            if (std::find(toks.begin(), toks.end(), term) != toks.end()) ++df;
        }
        CHECK(restricted.doc_freq(term) == df);
        const auto p = restricted.postings(term);
        const auto it = oracle.find(term);
        if (it == oracle.end()) {
            CHECK(p.empty());
            continue;
        }
        REQUIRE(p.size() == it->second.size());
        for (const auto& e : p) CHECK(e.weight == doctest::Approx(it->second.at(e.concept_index)).epsilon(1e-14));
    }
    // "beta" occurs in every kept concept, so it disappears after restriction.
    CHECK(restricted.postings("beta").empty());
    CHECK_FALSE(full.postings("beta").empty());
}
