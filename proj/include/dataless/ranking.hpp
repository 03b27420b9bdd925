#pragma once

// Scoring candidate bridge languages for a source language: typological similarity,
// concept-corpus size, interlanguage link counts, and their rank-weight combination.
// The learned ranker lives in ranksvm.hpp.

#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "dataless/corpus_store.hpp"

namespace dataless {

enum class RankMethod { linguistic, wiki_size, lang_links, harmonic, ranksvm };

const char* to_string(RankMethod method);
RankMethod parse_rank_method(const std::string& name);

inline constexpr double kDefaultKeyFeatureWeight = 50.0;

/// Typological similarity: each key feature the two languages share counts
/// `key_weight`, every other shared feature counts 1. A feature is shared only when
/// both values are present and equal.
double linguistic_similarity(const TypologyTable& table, const LanguageCode& l1, const LanguageCode& l2,
                             double key_weight = kDefaultKeyFeatureWeight);

/// Binary agreement vector over all features (key features are ordinary coordinates).
struct PairFeatureVector {
    LanguageCode src;
    LanguageCode tgt;
    std::vector<double> x;
};

PairFeatureVector pair_features(const TypologyTable& table, const LanguageCode& src, const LanguageCode& tgt);

/// Concept-corpus size per language.
class WikiSizes {
public:
    void set(const LanguageCode& lang, double count);
    /// Throws a validation error for unrecorded languages.
    double score(const LanguageCode& lang) const;
    bool contains(const LanguageCode& lang) const { return counts_.count(lang) != 0; }

private:
    std::map<LanguageCode, double> counts_;
};

/// Directed link counts from one language's titles to another's.
class LinkCounts {
public:
    void set(const LanguageCode& from, const LanguageCode& to, double count);
    /// Throws a validation error for unrecorded pairs.
    double score(const LanguageCode& from, const LanguageCode& to) const;

private:
    std::map<std::pair<LanguageCode, LanguageCode>, double> counts_;
};

// lang,count
WikiSizes read_wiki_sizes(std::istream& in, const std::string& source = "<stream>");
// lang_a,lang_b,count
LinkCounts read_link_counts(std::istream& in, const std::string& source = "<stream>");

inline double wiki_size_score(const WikiSizes& sizes, const LanguageCode& lang) { return sizes.score(lang); }
inline double lang_links_score(const LinkCounts& links, const LanguageCode& from, const LanguageCode& to) {
    return links.score(from, to);
}

struct RankWeight {
    std::size_t rank = 1;  // 1-based; tied scores share the smallest rank
    std::size_t n = 1;
    double value = 1.0;    // (n - rank + 1) / n

    bool operator==(const RankWeight&) const = default;
};

RankWeight make_rank_weight(std::size_t rank, std::size_t n);

/// Ranks by descending score and converts ranks to weights in (0, 1].
std::map<LanguageCode, RankWeight> to_rank_weights(const std::vector<std::pair<LanguageCode, double>>& scores);

/// Harmonic mean of two rank weights; 0 when either is 0.
double harmonic_combine(double linguistic_weight, double size_weight);

struct BridgeScore {
    LanguageCode src;
    LanguageCode tgt;
    RankMethod method;
    double value;
};

struct RankSvmModel;

/// Inputs a ranking method may need; only the ones the method uses must be set.
struct RankingInputs {
    const TypologyTable* typology = nullptr;
    const WikiSizes* wiki_sizes = nullptr;
    const LinkCounts* link_counts = nullptr;
    const RankSvmModel* model = nullptr;
    double key_weight = kDefaultKeyFeatureWeight;
};

/// Scores every candidate bridge for `src`, best first (ties by language code).
/// Harmonic combines the linguistic and concept-corpus-size rank weights.
std::vector<BridgeScore> rank_bridges(RankMethod method, const LanguageCode& src,
                                      const std::vector<LanguageCode>& candidates, const RankingInputs& inputs);

/// swl,rank,lwl,score
void write_rankings(std::ostream& out, const std::vector<std::vector<BridgeScore>>& rankings);

}  // namespace dataless
