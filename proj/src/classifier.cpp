#include "dataless/classifier.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <unordered_map>

#include "dataless/error.hpp"
#include "dataless/io_util.hpp"

namespace dataless {

namespace {

Prediction score_one(const std::string& doc_id, const ConceptVector& doc, const std::vector<LabelId>& label_ids,
                     const std::vector<ConceptVector>& label_vectors) {
    Prediction p{doc_id, label_ids.front(), {}};
    p.scores.reserve(label_ids.size());
    double best = -1.0;
    for (std::size_t k = 0; k < label_ids.size(); ++k) {
        const double s = cosine(doc, label_vectors[k]);
        p.scores.emplace_back(label_ids[k], s);
        if (s > best) {
            best = s;
            p.label_id = label_ids[k];
        }
    }
    return p;
}

void check_scoring_inputs(const std::vector<std::string>& doc_ids, const std::vector<ConceptVector>& doc_vectors,
                          const std::vector<LabelId>& label_ids, const std::vector<ConceptVector>& label_vectors) {
    if (label_ids.empty()) throw_validation("no labels to classify into");
    if (doc_ids.size() != doc_vectors.size() || label_ids.size() != label_vectors.size())
        throw_validation("id and vector lists differ in length");
    if (!std::is_sorted(label_ids.begin(), label_ids.end()) ||
        std::adjacent_find(label_ids.begin(), label_ids.end()) != label_ids.end())
        throw_validation("label ids must be unique and ascending");
    const std::size_t dim = label_vectors.front().dimension();
    for (const auto& v : label_vectors)
        if (v.dimension() != dim) throw_validation("label vectors differ in dimension");
    for (const auto& v : doc_vectors)
        if (v.dimension() != dim) throw_validation("document and label vectors differ in dimension");
}

struct EmbeddedLabels {
    std::vector<LabelId> ids;
    std::vector<ConceptVector> vectors;
};

EmbeddedLabels embed_labels(const std::vector<LabelDescription>& labels, const EsaIndex& index, LabelText mode) {
    if (labels.empty()) throw_validation("no labels to classify into");
    std::vector<const LabelDescription*> sorted;
    for (const auto& l : labels) sorted.push_back(&l);
    std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->label_id < b->label_id; });
    EmbeddedLabels out;
    for (const auto* l : sorted) {
        out.ids.push_back(l->label_id);
        out.vectors.push_back(index.embed(tokenize(label_text(*l, mode))));
    }
    return out;
}

std::vector<ConceptVector> embed_token_lists(const std::vector<std::vector<std::string>>& token_lists,
                                             const EsaIndex& index) {
    std::vector<ConceptVector> out(token_lists.size());
    const auto n = static_cast<std::int64_t>(token_lists.size());
#pragma omp parallel for schedule(dynamic, 8)
    for (std::int64_t i = 0; i < n; ++i) out[i] = index.embed(token_lists[i]);
    return out;
}

std::vector<ConceptVector> embed_documents(const std::vector<Document>& docs, const EsaIndex& index) {
    std::vector<std::vector<std::string>> tokens(docs.size());
    const auto n = static_cast<std::int64_t>(docs.size());
#pragma omp parallel for schedule(dynamic, 8)
    for (std::int64_t i = 0; i < n; ++i) tokens[i] = tokenize(docs[i].text);
    return embed_token_lists(tokens, index);
}

std::vector<std::string> doc_ids_of(const std::vector<Document>& docs) {
    std::vector<std::string> ids;
    ids.reserve(docs.size());
    for (const auto& d : docs) ids.push_back(d.doc_id);
    return ids;
}

void check_doc_lang(const std::vector<Document>& docs, const LanguageCode& lang) {
    for (const auto& d : docs)
        if (d.lang != lang)
            throw_validation("document '" + d.doc_id + "' is in '" + d.lang.str() + "', expected '" + lang.str() + "'");
}

}  // namespace

std::string label_text(const LabelDescription& label, LabelText mode) {
    switch (mode) {
        case LabelText::name_and_description: return label.name + " " + label.description;
        case LabelText::description: return label.description;
        case LabelText::name: return label.name;
    }
    return label.description;
}

LabelText parse_label_text(const std::string& name) {
    if (name == "name+description") return LabelText::name_and_description;
    if (name == "description") return LabelText::description;
    if (name == "name") return LabelText::name;
    throw Error(ErrorKind::usage, "unknown label text mode '" + name + "' (expected name+description, description or name)");
}

std::vector<Prediction> score_documents(const std::vector<std::string>& doc_ids,
                                        const std::vector<ConceptVector>& doc_vectors,
                                        const std::vector<LabelId>& label_ids,
                                        const std::vector<ConceptVector>& label_vectors) {
    check_scoring_inputs(doc_ids, doc_vectors, label_ids, label_vectors);
    std::vector<Prediction> out(doc_ids.size());
    const auto n = static_cast<std::int64_t>(doc_ids.size());
#pragma omp parallel for schedule(dynamic, 8)
    for (std::int64_t i = 0; i < n; ++i) out[i] = score_one(doc_ids[i], doc_vectors[i], label_ids, label_vectors);
    return out;
}

std::vector<Prediction> score_documents_serial(const std::vector<std::string>& doc_ids,
                                               const std::vector<ConceptVector>& doc_vectors,
                                               const std::vector<LabelId>& label_ids,
                                               const std::vector<ConceptVector>& label_vectors) {
    check_scoring_inputs(doc_ids, doc_vectors, label_ids, label_vectors);
    std::vector<Prediction> out;
    out.reserve(doc_ids.size());
    for (std::size_t i = 0; i < doc_ids.size(); ++i)
        out.push_back(score_one(doc_ids[i], doc_vectors[i], label_ids, label_vectors));
    return out;
}

std::vector<Prediction> classify_monolingual(const std::vector<Document>& docs,
                                             const std::vector<LabelDescription>& labels, const EsaIndex& index,
                                             const ClassifierOptions& options) {
    check_doc_lang(docs, index.lang());
    const auto embedded = embed_labels(labels, index, options.label_text);
    return score_documents(doc_ids_of(docs), embed_documents(docs, index), embedded.ids, embedded.vectors);
}

std::vector<Prediction> classify_clesa(const std::vector<Document>& docs, const std::vector<LabelDescription>& labels,
                                       const ClesaSpace& space, const ClassifierOptions& options) {
    check_doc_lang(docs, space.lang_a());
    const auto embedded = embed_labels(labels, space.index(Side::b), options.label_text);
    return score_documents(doc_ids_of(docs), embed_documents(docs, space.index(Side::a)), embedded.ids,
                           embedded.vectors);
}

std::vector<Prediction> classify_bridged(const std::vector<Document>& docs, const BilingualDictionary& dict,
                                         const std::vector<LabelDescription>& labels, const ClesaSpace& space,
                                         const ClassifierOptions& options) {
    if (dict.tgt() != space.lang_a())
        throw_validation("dictionary translates into '" + dict.tgt().str() + "' but the concept space bridge side is '" +
                         space.lang_a().str() + "'");
    const auto embedded = embed_labels(labels, space.index(Side::b), options.label_text);
    const auto bridged = translate_documents(docs, dict, options.expansion);
    std::vector<std::vector<std::string>> tokens;
    tokens.reserve(bridged.size());
    for (const auto& b : bridged) tokens.push_back(b.tokens);
    return score_documents(doc_ids_of(docs), embed_token_lists(tokens, space.index(Side::a)), embedded.ids,
                           embedded.vectors);
}

std::vector<Prediction> classify_bridged(const std::vector<Document>& docs, const BilingualDictionary& dict,
                                         const std::vector<LabelDescription>& labels, const EsaIndex& index,
                                         const ClassifierOptions& options) {
    if (dict.tgt() != index.lang())
        throw_validation("dictionary translates into '" + dict.tgt().str() + "' but the index language is '" +
                         index.lang().str() + "'");
    const auto embedded = embed_labels(labels, index, options.label_text);
    const auto bridged = translate_documents(docs, dict, options.expansion);
    std::vector<std::vector<std::string>> tokens;
    tokens.reserve(bridged.size());
    for (const auto& b : bridged) tokens.push_back(b.tokens);
    return score_documents(doc_ids_of(docs), embed_token_lists(tokens, index), embedded.ids, embedded.vectors);
}

std::vector<Prediction> majority_vote(const std::vector<std::vector<Prediction>>& prediction_sets) {
    if (prediction_sets.empty()) throw_validation("majority vote needs at least one prediction set");
    const auto& first = prediction_sets.front();

    std::set<LabelId> all_labels;
    std::unordered_map<std::string, std::size_t> position;
    for (std::size_t i = 0; i < first.size(); ++i)
        if (!position.emplace(first[i].doc_id, i).second)
            throw_validation("duplicate document '" + first[i].doc_id + "' in prediction set");

    std::vector<std::map<LabelId, std::size_t>> votes(first.size());
    for (std::size_t v = 0; v < prediction_sets.size(); ++v) {
        const auto& set = prediction_sets[v];
        if (set.size() != first.size())
            throw_validation("prediction set " + std::to_string(v) + " covers a different number of documents");
        std::vector<bool> seen(first.size(), false);
        for (const auto& p : set) {
            const auto it = position.find(p.doc_id);
            if (it == position.end())
                throw_validation("document '" + p.doc_id + "' missing from the first prediction set");
            if (seen[it->second]) throw_validation("duplicate document '" + p.doc_id + "' in prediction set");
            seen[it->second] = true;
            ++votes[it->second][p.label_id];
            all_labels.insert(p.label_id);
            for (const auto& [label, score] : p.scores) all_labels.insert(label);
        }
    }

    const auto n_voters = static_cast<double>(prediction_sets.size());
    std::vector<Prediction> out;
    out.reserve(first.size());
    for (std::size_t i = 0; i < first.size(); ++i) {
        Prediction p{first[i].doc_id, 0, {}};
        std::size_t best = 0;
        for (const LabelId label : all_labels) {
            const auto it = votes[i].find(label);
            const std::size_t count = it == votes[i].end() ? 0 : it->second;
            p.scores.emplace_back(label, static_cast<double>(count) / n_voters);
            if (count > best) {
                best = count;
                p.label_id = label;
            }
        }
        out.push_back(std::move(p));
    }
    return out;
}

void write_predictions(std::ostream& out, const std::vector<Prediction>& predictions) {
    std::vector<LabelId> labels;
    if (!predictions.empty())
        for (const auto& [label, score] : predictions.front().scores) labels.push_back(label);
    out << "doc_id,predicted_label";
    for (const auto label : labels) out << ",score_" << label;
    out << '\n';
    for (const auto& p : predictions) {
        if (p.scores.size() != labels.size())
            throw_validation("prediction for '" + p.doc_id + "' scores a different label set");
        out << io::csv_field(p.doc_id) << ',' << p.label_id;
        for (std::size_t k = 0; k < labels.size(); ++k) {
            if (p.scores[k].first != labels[k])
                throw_validation("prediction for '" + p.doc_id + "' scores a different label set");
            out << ',' << io::format_double(p.scores[k].second);
        }
        out << '\n';
    }
}

std::vector<Prediction> read_predictions(std::istream& in, const std::string& source) {
    std::string line;
    std::vector<std::string> fields;
    std::size_t line_no = 1;
    if (!std::getline(in, line)) throw_parse(source, 1, "missing header row");
    io::chomp(line);
    if (!io::split_csv(line, fields) || fields.size() < 2 || fields[0] != "doc_id" || fields[1] != "predicted_label")
        throw_parse(source, 1, "expected header doc_id,predicted_label,score_<label>...");
    std::vector<LabelId> labels;
    for (std::size_t c = 2; c < fields.size(); ++c) {
        long long id = 0;
        if (fields[c].rfind("score_", 0) != 0 || !io::parse_int(std::string_view(fields[c]).substr(6), id))
            throw_parse(source, 1, "bad score column '" + fields[c] + "'");
        labels.push_back(id);
    }

    std::vector<Prediction> out;
    while (std::getline(in, line)) {
        ++line_no;
        io::chomp(line);
        if (line.empty()) continue;
        if (!io::split_csv(line, fields) || fields.size() != labels.size() + 2)
            throw_parse(source, line_no, "expected " + std::to_string(labels.size() + 2) + " columns");
        Prediction p{fields[0], 0, {}};
        long long label = 0;
        if (!io::parse_int(fields[1], label)) throw_parse(source, line_no, "bad predicted label '" + fields[1] + "'");
        p.label_id = label;
        for (std::size_t k = 0; k < labels.size(); ++k) {
            double s = 0.0;
            if (!io::parse_double(fields[k + 2], s)) throw_parse(source, line_no, "bad score '" + fields[k + 2] + "'");
            p.scores.emplace_back(labels[k], s);
        }
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace dataless
