#pragma once

// Loading and validation of every external input: concept corpora, documents, label
// descriptions, bilingual dictionaries, interlanguage title links and typology tables.
// Everything returned here is immutable after construction.

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dataless/text.hpp"

namespace dataless {

using LabelId = std::int64_t;

struct ConceptDoc {
    std::int64_t concept_id = 0;
    std::string title;
    LanguageCode lang;
    std::string text;

    bool operator==(const ConceptDoc&) const = default;
};

struct Document {
    std::string doc_id;
    LanguageCode lang;
    std::string text;
    std::optional<LabelId> gold_label;

    bool operator==(const Document&) const = default;
};

struct LabelDescription {
    LabelId label_id = 0;
    std::string name;
    std::string description;

    bool operator==(const LabelDescription&) const = default;
};

/// Word-level translation table for one language pair. Keys and targets are single
/// normalized tokens; each entry list is non-empty and in priority order.
class BilingualDictionary {
public:
    BilingualDictionary(LanguageCode src, LanguageCode tgt) : src_(std::move(src)), tgt_(std::move(tgt)) {}

    const LanguageCode& src() const noexcept { return src_; }
    const LanguageCode& tgt() const noexcept { return tgt_; }

    /// nullptr when `word` (already normalized) has no entry.
    const std::vector<std::string>* lookup(const std::string& word) const;

    std::size_t size() const noexcept { return entries_.size(); }
    const std::map<std::string, std::vector<std::string>>& entries() const noexcept { return entries_; }

    /// Rows skipped because the source or target side was not a single token.
    std::size_t skipped_multiword() const noexcept { return skipped_multiword_; }

    /// Adds `tgt` to the end of `src`'s list unless already present. Both sides are
    /// normalized; returns false when either is not exactly one token.
    bool add(const std::string& src, const std::string& tgt);

    /// w -> [w] for every word in `vocabulary`.
    static BilingualDictionary identity(const LanguageCode& lang, const std::vector<std::string>& vocabulary);

    bool operator==(const BilingualDictionary&) const = default;

private:
    friend BilingualDictionary read_dictionary(std::istream&, const LanguageCode&, const LanguageCode&,
                                               const std::string&);

    LanguageCode src_;
    LanguageCode tgt_;
    std::map<std::string, std::vector<std::string>> entries_;
    std::size_t skipped_multiword_ = 0;
};

struct TitleLinkTable {
    LanguageCode lang_a;
    LanguageCode lang_b;
    std::vector<std::pair<std::string, std::string>> links;
    /// Rows dropped because a title had already been linked on either side.
    std::size_t duplicates_dropped = 0;
};

/// Categorical typology features per language. A missing value is std::nullopt.
class TypologyTable {
public:
    static constexpr std::size_t kKeyFeatureCount = 4;
    using KeyFeatures = std::array<std::string, kKeyFeatureCount>;
    using Row = std::vector<std::optional<std::string>>;

    TypologyTable(std::vector<std::string> feature_ids, KeyFeatures key_features);

    std::size_t feature_count() const noexcept { return feature_ids_.size(); }
    const std::vector<std::string>& feature_ids() const noexcept { return feature_ids_; }
    const KeyFeatures& key_features() const noexcept { return key_features_; }
    /// Column positions of the four key features, in `key_features()` order.
    const std::array<std::size_t, kKeyFeatureCount>& key_indices() const noexcept { return key_indices_; }
    bool is_key_feature(std::size_t column) const;

    void add_row(const LanguageCode& lang, Row row);
    bool contains(const LanguageCode& lang) const { return rows_.count(lang) != 0; }
    /// Throws a validation error for unknown languages.
    const Row& row(const LanguageCode& lang) const;
    std::size_t language_count() const noexcept { return rows_.size(); }
    std::vector<LanguageCode> languages() const;

private:
    std::vector<std::string> feature_ids_;
    KeyFeatures key_features_;
    std::array<std::size_t, kKeyFeatureCount> key_indices_{};
    std::unordered_map<LanguageCode, Row> rows_;
};

struct TypologyOptions {
    TypologyTable::KeyFeatures key_features{"genus", "family", "macroarea", "countrycodes"};
    std::vector<std::string> dropped_columns{"latitude", "longitude"};
};

// Concept corpora and documents are JSON lines: {"title": ..., "text": ..., "id": int}.
// Documents may also carry "label" (int); their doc_id is "id" (int or string), else
// "title", else the zero-based record number.
std::vector<ConceptDoc> read_concept_corpus(std::istream& in, const LanguageCode& lang,
                                            const std::string& source = "<stream>");
std::vector<ConceptDoc> load_concept_corpus(const std::filesystem::path& path, const LanguageCode& lang);
void write_concept_corpus(std::ostream& out, const std::vector<ConceptDoc>& corpus);

std::vector<Document> read_documents(std::istream& in, const LanguageCode& lang,
                                     const std::string& source = "<stream>");
std::vector<Document> load_documents(const std::filesystem::path& path, const LanguageCode& lang);
void write_documents(std::ostream& out, const std::vector<Document>& docs);

// label_id<TAB>name<TAB>description
std::vector<LabelDescription> read_labels(std::istream& in, const std::string& source = "<stream>");
std::vector<LabelDescription> load_labels(const std::filesystem::path& path);

// src_word<TAB>tgt_word[<TAB>rank]. Lower rank wins; unranked rows follow ranked ones
// in file order.
BilingualDictionary read_dictionary(std::istream& in, const LanguageCode& src, const LanguageCode& tgt,
                                    const std::string& source = "<stream>");
BilingualDictionary load_dictionary(const std::filesystem::path& path, const LanguageCode& src,
                                    const LanguageCode& tgt);
void write_dictionary(std::ostream& out, const BilingualDictionary& dict);

// title_in_lang_a<TAB>title_in_lang_b. The first link for a title wins.
TitleLinkTable read_title_links(std::istream& in, const LanguageCode& lang_a, const LanguageCode& lang_b,
                                const std::string& source = "<stream>");
TitleLinkTable load_title_links(const std::filesystem::path& path, const LanguageCode& lang_a,
                                const LanguageCode& lang_b);

// lang,feat1,feat2,... with RFC 4180 quoting; an empty cell is a missing value.
TypologyTable read_typology(std::istream& in, const TypologyOptions& options = {},
                            const std::string& source = "<stream>");
TypologyTable load_typology(const std::filesystem::path& path, const TypologyOptions& options = {});

}  // namespace dataless
