#pragma once

// Monolingual Explicit Semantic Analysis: an inverted index from words to the
// encyclopedia concepts whose articles use them, weighted by tf-idf.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "dataless/concept_vector.hpp"
#include "dataless/corpus_store.hpp"
#include "dataless/text.hpp"

namespace dataless {

struct TermCount {
    ConceptIndex concept_index;
    std::uint32_t count;

    bool operator==(const TermCount&) const = default;
};

struct IndexOptions {
    /// Keep only each term's k highest-weight concepts (ties to the lower index).
    std::optional<std::size_t> prune_top_k;
};

/// Concept coordinates are corpus positions 0..n_concepts-1; the corpus' own concept
/// ids are kept as metadata. Raw term counts are retained next to the weighted
/// postings so the index can be restricted to a concept subset with fresh statistics.
class EsaIndex {
public:
    static constexpr int kFormatVersion = 1;

    EsaIndex() = default;

    const LanguageCode& lang() const noexcept { return lang_; }
    std::size_t n_concepts() const noexcept { return titles_.size(); }
    std::size_t n_terms() const noexcept { return terms_.size(); }
    const std::optional<std::size_t>& prune_top_k() const noexcept { return prune_top_k_; }

    const std::vector<std::string>& titles() const noexcept { return titles_; }
    const std::vector<std::int64_t>& concept_ids() const noexcept { return concept_ids_; }
    std::optional<ConceptIndex> find_title(const std::string& title) const;

    /// Vocabulary in byte-lexicographic order.
    const std::vector<std::string>& terms() const noexcept { return terms_; }
    std::optional<std::uint32_t> term_id(const std::string& term) const;

    /// Number of concepts whose text contains `term`; 0 for unknown terms.
    std::size_t doc_freq(const std::string& term) const;
    /// Weighted postings sorted by concept index; empty for unknown or elided terms.
    std::span<const ConceptEntry> postings(const std::string& term) const;
    std::span<const ConceptEntry> postings(std::uint32_t term_id) const { return postings_[term_id]; }
    std::span<const TermCount> counts(std::uint32_t term_id) const { return counts_[term_id]; }

    /// Sum of the postings of every token; unknown tokens contribute nothing.
    ConceptVector embed(const std::vector<std::string>& tokens) const;

    /// Index over the concepts `coords` (new coordinate i = old coordinate coords[i])
    /// with N and document frequencies recomputed on that subset.
    EsaIndex restrict(const std::vector<ConceptIndex>& coords) const;

    void write(std::ostream& out) const;
    static EsaIndex read(std::istream& in, const std::string& source = "<stream>");

    bool operator==(const EsaIndex& other) const;

    /// Assembles an index from per-term concept counts (each sorted by concept index)
    /// and computes the weighted postings.
    static EsaIndex from_counts(LanguageCode lang, std::vector<std::string> titles,
                                std::vector<std::int64_t> concept_ids, std::vector<std::string> terms,
                                std::vector<std::vector<TermCount>> counts, IndexOptions options);

private:
    void finalize();

    LanguageCode lang_;
    std::vector<std::string> titles_;
    std::vector<std::int64_t> concept_ids_;
    std::unordered_map<std::string, ConceptIndex> title_lookup_;
    std::optional<std::size_t> prune_top_k_;
    std::vector<std::string> terms_;
    std::unordered_map<std::string, std::uint32_t> term_lookup_;
    std::vector<std::vector<TermCount>> counts_;
    std::vector<std::vector<ConceptEntry>> postings_;
};

/// tf * ln(N / df) postings for one term. Terms present in every concept get none.
std::vector<ConceptEntry> weigh_postings(std::span<const TermCount> counts, std::size_t n_concepts,
                                         const std::optional<std::size_t>& prune_top_k);

/// OpenMP-parallel build: concepts are tokenized concurrently, then merged in corpus
/// order, so the result is identical for every thread count.
EsaIndex build_index(const std::vector<ConceptDoc>& corpus, IndexOptions options = {});

/// Single-threaded reference build kept for tests and benchmarks.
EsaIndex build_index_serial(const std::vector<ConceptDoc>& corpus, IndexOptions options = {});

ConceptVector embed_text(const EsaIndex& index, const std::vector<std::string>& tokens);

}  // namespace dataless
