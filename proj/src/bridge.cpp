#include "dataless/bridge.hpp"

#include <ostream>

#include "dataless/error.hpp"
#include "dataless/io_util.hpp"

namespace dataless {

BridgedDocument translate_document(const Document& doc, const BilingualDictionary& dict, Expansion expansion) {
    if (doc.lang != dict.src())
        throw_validation("document '" + doc.doc_id + "' is in '" + doc.lang.str() + "' but the dictionary translates from '" +
                         dict.src().str() + "'");
    BridgedDocument out{doc, dict.tgt(), {}, 0, 0};
    for (const auto& tok : tokenize(doc.text)) {
        ++out.total;
        const auto* targets = dict.lookup(tok);
        if (!targets) continue;
        ++out.covered;
        if (expansion == Expansion::first_only) out.tokens.push_back(targets->front());
        else out.tokens.insert(out.tokens.end(), targets->begin(), targets->end());
    }
    return out;
}

std::vector<BridgedDocument> translate_documents(const std::vector<Document>& docs, const BilingualDictionary& dict,
                                                 Expansion expansion) {
    for (const auto& doc : docs)
        if (doc.lang != dict.src())
            throw_validation("document '" + doc.doc_id + "' is not in the dictionary source language '" +
                             dict.src().str() + "'");
    std::vector<BridgedDocument> out(docs.size());
    const auto n = static_cast<std::int64_t>(docs.size());
#pragma omp parallel for schedule(dynamic, 8)
    for (std::int64_t i = 0; i < n; ++i) out[i] = translate_document(docs[i], dict, expansion);
    return out;
}

CoverageReport coverage_report(const std::vector<Document>& docs, const BilingualDictionary& dict) {
    if (docs.empty()) throw_validation("coverage report needs at least one document");
    const auto bridged = translate_documents(docs, dict, Expansion::first_only);
    CoverageReport report{dict.src(), dict.tgt(), 0.0, dict.size(), 0, 0, {}};
    report.per_doc.reserve(bridged.size());
    for (const auto& b : bridged) {
        report.covered += b.covered;
        report.total += b.total;
        report.per_doc.push_back({b.original.doc_id, b.covered, b.total});
    }
    if (report.total > 0)
        report.pct_words_covered = static_cast<double>(report.covered) / static_cast<double>(report.total);
    return report;
}

void write_coverage_report(std::ostream& out, const CoverageReport& report) {
    out << "doc_id,covered,total\n";
    for (const auto& d : report.per_doc) out << io::csv_field(d.doc_id) << ',' << d.covered << ',' << d.total << '\n';
    out << "#summary,src=" << report.src.str() << ",tgt=" << report.tgt.str() << ",covered=" << report.covered
        << ",total=" << report.total << ",pct_words_covered=" << io::format_double(report.pct_words_covered)
        << ",n_expressions=" << report.n_expressions << '\n';
}

Expansion parse_expansion(const std::string& name) {
    if (name == "first-only") return Expansion::first_only;
    if (name == "all") return Expansion::all;
    throw Error(ErrorKind::usage, "unknown expansion mode '" + name + "' (expected first-only or all)");
}

}  // namespace dataless
