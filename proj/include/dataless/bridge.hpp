#pragma once

// Word-by-word translation of documents into a bridge language and dictionary
// coverage statistics.

#include <iosfwd>
#include <string>
#include <tuple>
#include <vector>

#include "dataless/corpus_store.hpp"

namespace dataless {

enum class Expansion {
    first_only,  // top-priority translation only
    all,         // every listed translation, in priority order
};

struct BridgedDocument {
    Document original;
    LanguageCode bridge_lang;
    std::vector<std::string> tokens;
    std::size_t covered = 0;
    std::size_t total = 0;
};

struct DocCoverage {
    std::string doc_id;
    std::size_t covered = 0;
    std::size_t total = 0;

    bool operator==(const DocCoverage&) const = default;
};

struct CoverageReport {
    LanguageCode src;
    LanguageCode tgt;
    double pct_words_covered = 0.0;
    std::size_t n_expressions = 0;
    std::size_t covered = 0;
    std::size_t total = 0;
    std::vector<DocCoverage> per_doc;
};

/// Throws a validation error when the dictionary source is not the document language.
BridgedDocument translate_document(const Document& doc, const BilingualDictionary& dict,
                                   Expansion expansion = Expansion::first_only);

/// Translates all documents, in parallel; output order follows input order.
std::vector<BridgedDocument> translate_documents(const std::vector<Document>& docs, const BilingualDictionary& dict,
                                                 Expansion expansion = Expansion::first_only);

/// Throws a validation error for an empty document list.
CoverageReport coverage_report(const std::vector<Document>& docs, const BilingualDictionary& dict);

/// doc_id,covered,total rows followed by one "#summary" line.
void write_coverage_report(std::ostream& out, const CoverageReport& report);

Expansion parse_expansion(const std::string& name);

}  // namespace dataless
