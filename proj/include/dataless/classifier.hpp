#pragma once

// Dataless classification: documents and label descriptions are embedded into one
// concept space and each document takes the label with the highest cosine.

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "dataless/bridge.hpp"
#include "dataless/clesa.hpp"
#include "dataless/corpus_store.hpp"
#include "dataless/esa_index.hpp"

namespace dataless {

struct Prediction {
    std::string doc_id;
    LabelId label_id = 0;
    /// One (label, score) per label, ascending label id.
    std::vector<std::pair<LabelId, double>> scores;

    bool operator==(const Prediction&) const = default;
};

enum class LabelText { name_and_description, description, name };

struct ClassifierOptions {
    LabelText label_text = LabelText::name_and_description;
    Expansion expansion = Expansion::first_only;
};

std::string label_text(const LabelDescription& label, LabelText mode);
LabelText parse_label_text(const std::string& name);

/// Scores every document vector against every label vector. Labels must be sorted by
/// id; ties go to the lowest label id. OpenMP-parallel over documents.
std::vector<Prediction> score_documents(const std::vector<std::string>& doc_ids,
                                        const std::vector<ConceptVector>& doc_vectors,
                                        const std::vector<LabelId>& label_ids,
                                        const std::vector<ConceptVector>& label_vectors);

/// Serial reference for score_documents.
std::vector<Prediction> score_documents_serial(const std::vector<std::string>& doc_ids,
                                               const std::vector<ConceptVector>& doc_vectors,
                                               const std::vector<LabelId>& label_ids,
                                               const std::vector<ConceptVector>& label_vectors);

/// Documents and labels both in the index language.
std::vector<Prediction> classify_monolingual(const std::vector<Document>& docs,
                                             const std::vector<LabelDescription>& labels, const EsaIndex& index,
                                             const ClassifierOptions& options = {});

/// Documents in space.lang_a(), labels embedded through space.lang_b().
std::vector<Prediction> classify_clesa(const std::vector<Document>& docs, const std::vector<LabelDescription>& labels,
                                       const ClesaSpace& space, const ClassifierOptions& options = {});

/// Documents translated with `dict` into space.lang_a() (the bridge), then scored
/// against labels embedded through space.lang_b().
std::vector<Prediction> classify_bridged(const std::vector<Document>& docs, const BilingualDictionary& dict,
                                         const std::vector<LabelDescription>& labels, const ClesaSpace& space,
                                         const ClassifierOptions& options = {});

/// Documents translated with `dict` into the index language, then classified
/// monolingually there.
std::vector<Prediction> classify_bridged(const std::vector<Document>& docs, const BilingualDictionary& dict,
                                         const std::vector<LabelDescription>& labels, const EsaIndex& index,
                                         const ClassifierOptions& options = {});

/// Per document, the label most voters chose (ties to the lowest id). Scores hold each
/// label's vote share. Output follows the first set's document order.
std::vector<Prediction> majority_vote(const std::vector<std::vector<Prediction>>& prediction_sets);

/// doc_id,predicted_label,score_<label>... with a header naming the label ids.
void write_predictions(std::ostream& out, const std::vector<Prediction>& predictions);
std::vector<Prediction> read_predictions(std::istream& in, const std::string& source = "<stream>");

}  // namespace dataless
