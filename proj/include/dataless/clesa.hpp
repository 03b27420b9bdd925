#pragma once

// Cross-lingual ESA: two monolingual indexes restricted to the concepts joined by
// interlanguage title links, with shared coordinate i naming pair i on both sides.

#include <iosfwd>
#include <utility>
#include <vector>

#include "dataless/corpus_store.hpp"
#include "dataless/esa_index.hpp"

namespace dataless {

enum class Side { a, b };

struct ClesaBuildStats {
    std::size_t missing_a = 0;  // links whose lang_a title is not in index a
    std::size_t missing_b = 0;
    std::size_t reused = 0;     // links reusing a concept already paired
};

class ClesaSpace {
public:
    static constexpr int kFormatVersion = 1;

    ClesaSpace() = default;

    const LanguageCode& lang_a() const noexcept { return index_a_.lang(); }
    const LanguageCode& lang_b() const noexcept { return index_b_.lang(); }
    const LanguageCode& lang(Side side) const noexcept { return side == Side::a ? lang_a() : lang_b(); }

    std::size_t n_shared() const noexcept { return pairs_.size(); }
    /// (concept index in the full corpus a, concept index in the full corpus b).
    const std::vector<std::pair<ConceptIndex, ConceptIndex>>& pairs() const noexcept { return pairs_; }

    /// Restricted index whose coordinates are the shared coordinates.
    const EsaIndex& index(Side side) const noexcept { return side == Side::a ? index_a_ : index_b_; }
    const ClesaBuildStats& build_stats() const noexcept { return stats_; }

    /// Side whose language is `lang`; throws a validation error if neither matches.
    Side side_of(const LanguageCode& lang) const;

    void write(std::ostream& out) const;
    static ClesaSpace read(std::istream& in, const std::string& source = "<stream>");

    bool operator==(const ClesaSpace& other) const {
        return pairs_ == other.pairs_ && index_a_ == other.index_a_ && index_b_ == other.index_b_;
    }

private:
    friend ClesaSpace build_clesa(const EsaIndex&, const EsaIndex&, const TitleLinkTable&);

    std::vector<std::pair<ConceptIndex, ConceptIndex>> pairs_;
    EsaIndex index_a_;
    EsaIndex index_b_;
    ClesaBuildStats stats_;
};

/// Keeps link rows whose titles exist in both indexes, in link-table order, skipping
/// rows that would pair an already paired concept. Term statistics are recomputed on
/// the surviving concepts. Throws a validation error for language mismatches or an
/// empty shared space.
ClesaSpace build_clesa(const EsaIndex& index_a, const EsaIndex& index_b, const TitleLinkTable& links);

ConceptVector embed_shared(const ClesaSpace& space, const std::vector<std::string>& tokens, Side side);

}  // namespace dataless
