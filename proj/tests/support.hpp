#pragma once

// Fixture builders shared by the unit tests and the acceptance runner.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "dataless/classifier.hpp"
#include "dataless/clesa.hpp"
#include "dataless/corpus_store.hpp"
#include "dataless/esa_index.hpp"
#include "dataless/ranking.hpp"
#include "dataless/ranksvm.hpp"

namespace fixtures {

using namespace dataless;

inline LanguageCode lang(const char* code) { return LanguageCode(code); }

inline std::vector<ConceptDoc> corpus(const char* code, const std::vector<std::pair<std::string, std::string>>& rows) {
    std::vector<ConceptDoc> out;
    for (std::size_t i = 0; i < rows.size(); ++i)
        out.push_back({static_cast<std::int64_t>(i), rows[i].first, lang(code), rows[i].second});
    return out;
}

inline Document doc(const std::string& id, const char* code, const std::string& text,
                    std::optional<LabelId> gold = std::nullopt) {
    return {id, lang(code), text, gold};
}

inline TitleLinkTable identity_links(const EsaIndex& a, const EsaIndex& b) {
    TitleLinkTable t{a.lang(), b.lang(), {}, 0};
    for (const auto& title : a.titles()) t.links.emplace_back(title, title);
    return t;
}

inline void write_text(const std::filesystem::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    out << content;
}

inline std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

// Random monolingual world: concepts over a small vocabulary, labels and documents drawn
// from it. Used for reduction identities and property tests.
struct RandomWorld {
    std::vector<ConceptDoc> concepts;
    std::vector<LabelDescription> labels;
    std::vector<Document> docs;
    std::vector<std::string> vocabulary;
};

inline RandomWorld random_world(std::uint64_t seed, const char* code = "en") {
    std::mt19937_64 rng(seed);
    const std::size_t n_vocab = 20 + rng() % 40;
    const std::size_t n_concepts = 4 + rng() % 12;
    RandomWorld w;
    for (std::size_t i = 0; i < n_vocab; ++i) w.vocabulary.push_back("w" + std::to_string(i));
    auto text = [&](std::size_t len) {
        std::string s;
        for (std::size_t i = 0; i < len; ++i) s += (i ? " " : "") + w.vocabulary[rng() % n_vocab];
        return s;
    };
    for (std::size_t c = 0; c < n_concepts; ++c)
        w.concepts.push_back({static_cast<std::int64_t>(c), "C" + std::to_string(c), lang(code), text(5 + rng() % 30)});
    const std::size_t n_labels = 2 + rng() % 4;
    for (std::size_t l = 0; l < n_labels; ++l)
        w.labels.push_back({static_cast<LabelId>(l * 3 + 1), "n" + std::to_string(l), text(1 + rng() % 6)});
    const std::size_t n_docs = 5 + rng() % 20;
    for (std::size_t d = 0; d < n_docs; ++d) w.docs.push_back(doc("d" + std::to_string(d), code, text(rng() % 15)));
    return w;
}

// Typology with `n_plain` ordinary features plus the four key features. Column order
// puts the key features first.
inline TypologyTable typology_with(std::size_t n_plain) {
    std::vector<std::string> ids{"genus", "family", "macroarea", "countrycodes"};
    for (std::size_t i = 0; i < n_plain; ++i) ids.push_back("f" + std::to_string(i));
    return TypologyTable(ids, {"genus", "family", "macroarea", "countrycodes"});
}

// Planted ranking benchmark: every language gets random categorical features; the
// measured accuracy of bridge j for source i is sigmoid(w* . x_ij) plus Gaussian noise.
struct PlantedBenchmark {
    TypologyTable typology = typology_with(0);
    std::vector<double> w_star;
    AccuracyMatrix accuracy;
    std::vector<LanguageCode> sources;
    std::vector<LanguageCode> bridges;

    double planted_score(const LanguageCode& s, const LanguageCode& b) const {
        const auto x = pair_features(typology, s, b).x;
        double v = 0.0;
        for (std::size_t f = 0; f < x.size(); ++f) v += w_star[f] * x[f];
        return v;
    }
};

inline PlantedBenchmark planted_benchmark(std::uint64_t seed, std::size_t n_sources = 30, std::size_t n_bridges = 8,
                                          std::size_t n_plain = 16, double sigma = 0.02) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    PlantedBenchmark b;
    b.typology = typology_with(n_plain);
    const std::size_t n_features = b.typology.feature_count();
    auto add_language = [&](const std::string& code) {
        TypologyTable::Row row;
        for (std::size_t f = 0; f < n_features; ++f) row.emplace_back(std::to_string(rng() % 3));
        b.typology.add_row(LanguageCode(code), row);
        return LanguageCode(code);
    };
    for (std::size_t i = 0; i < n_sources; ++i) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "s%02zu", i);
        b.sources.push_back(add_language(buf));
    }
    for (std::size_t j = 0; j < n_bridges; ++j) b.bridges.push_back(add_language("b" + std::to_string(j)));
    for (std::size_t f = 0; f < n_features; ++f) b.w_star.push_back(gauss(rng));
    for (const auto& s : b.sources) {
        auto& row = b.accuracy[s];
        for (const auto& br : b.bridges) {
            const double acc = 1.0 / (1.0 + std::exp(-b.planted_score(s, br))) + sigma * gauss(rng);
            row.emplace_back(br, acc);
        }
    }
    return b;
}

// Three-language fixture: source-language documents, a source->bridge dictionary, and
// bridge<->English concepts linked by title. Each topic has its own words in every
// language, and English labels use only English words.
struct ThreeLanguageFixture {
    EsaIndex bridge_index;
    EsaIndex english_index;
    ClesaSpace space;
    BilingualDictionary dictionary{lang("sw"), lang("lw")};
    std::vector<LabelDescription> labels;
    std::vector<Document> docs;
    std::vector<std::string> bridge_words;  // every bridge word, all topics
};

inline ThreeLanguageFixture three_language_fixture(std::uint64_t seed = 7) {
    constexpr std::size_t kTopics = 3;
    constexpr std::size_t kWordsPerTopic = 12;
    constexpr std::size_t kConceptsPerTopic = 4;
    std::mt19937_64 rng(seed);
    auto word = [](const char* prefix, std::size_t topic, std::size_t i) {
        return std::string(prefix) + "t" + std::to_string(topic) + "x" + std::to_string(i);
    };
    std::vector<std::pair<std::string, std::string>> lw_rows;
    std::vector<std::pair<std::string, std::string>> en_rows;
    for (std::size_t t = 0; t < kTopics; ++t) {
        for (std::size_t c = 0; c < kConceptsPerTopic; ++c) {
            std::string lw_text;
            std::string en_text;
            for (std::size_t i = 0; i < kWordsPerTopic; ++i) {
                const std::size_t reps = 1 + rng() % 3;
                for (std::size_t r = 0; r < reps; ++r) {
                    lw_text += word("lw", t, i) + " ";
                    en_text += word("en", t, i) + " ";
                }
            }
            const std::string title = "T" + std::to_string(t) + "C" + std::to_string(c);
            lw_rows.emplace_back("lw_" + title, lw_text);
            en_rows.emplace_back("en_" + title, en_text);
        }
    }
    ThreeLanguageFixture fx;
    fx.bridge_index = build_index(corpus("lw", lw_rows));
    fx.english_index = build_index(corpus("en", en_rows));
    TitleLinkTable links{lang("lw"), lang("en"), {}, 0};
    for (std::size_t i = 0; i < lw_rows.size(); ++i) links.links.emplace_back(lw_rows[i].first, en_rows[i].first);
    fx.space = build_clesa(fx.bridge_index, fx.english_index, links);

    for (std::size_t t = 0; t < kTopics; ++t) {
        for (std::size_t i = 0; i < kWordsPerTopic; ++i) {
            fx.dictionary.add(word("sw", t, i), word("lw", t, i));
            fx.bridge_words.push_back(word("lw", t, i));
        }
        std::string desc;
        for (std::size_t i = 0; i < 4; ++i) desc += word("en", t, i) + " ";
        fx.labels.push_back({static_cast<LabelId>(t), "topic" + std::to_string(t), desc});
    }
    for (std::size_t d = 0; d < 90; ++d) {
        const std::size_t t = d % kTopics;
        std::string text;
        for (std::size_t i = 0; i < 3; ++i) text += word("sw", t, rng() % kWordsPerTopic) + " ";
        fx.docs.push_back(doc("doc" + std::to_string(d), "sw", text, static_cast<LabelId>(t)));
    }
    return fx;
}

// Replaces the target of the first round(fraction * size) entries of a seeded
// permutation with a bridge word from another topic. Larger fractions corrupt a
// superset of the entries corrupted by smaller ones.
inline BilingualDictionary corrupt_dictionary(const ThreeLanguageFixture& fx, double fraction, std::uint64_t seed) {
    std::vector<std::pair<std::string, std::string>> rows;
    for (const auto& [src, tgts] : fx.dictionary.entries()) rows.emplace_back(src, tgts.front());
    std::mt19937_64 rng(seed);
    std::vector<std::size_t> order(rows.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<std::size_t> pick(rows.size());
    for (auto& p : pick) p = rng();
    const auto n_bad = static_cast<std::size_t>(std::lround(fraction * static_cast<double>(rows.size())));
    auto topic_of = [](const std::string& w) { return w.substr(2, w.find('x') - 2); };
    for (std::size_t k = 0; k < n_bad; ++k) {
        auto& [src, tgt] = rows[order[k]];
        std::vector<std::string> wrong;
        for (const auto& w : fx.bridge_words)
            if (topic_of(w) != topic_of(tgt)) wrong.push_back(w);
        tgt = wrong[pick[order[k]] % wrong.size()];
    }
    BilingualDictionary out(fx.dictionary.src(), fx.dictionary.tgt());
    for (const auto& [src, tgt] : rows) out.add(src, tgt);
    return out;
}

inline double accuracy_of(const std::vector<Prediction>& preds, const std::vector<Document>& docs) {
    std::size_t right = 0;
    for (std::size_t i = 0; i < preds.size(); ++i)
        if (preds[i].label_id == docs[i].gold_label) ++right;
    return static_cast<double>(right) / static_cast<double>(preds.size());
}

}  // namespace fixtures
