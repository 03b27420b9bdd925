#include "dataless/corpus_store.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <set>
#include <unordered_set>

#include <json.hpp>

#include "dataless/error.hpp"
#include "dataless/io_util.hpp"

namespace dataless {

namespace {

using nlohmann::json;

bool is_blank(const std::string& line) {
    return std::all_of(line.begin(), line.end(), [](char c) { return c == ' ' || c == '\t'; });
}

json parse_record(const std::string& line, const std::string& source, std::size_t line_no) {
    json record;
    try {
        record = json::parse(line);
    } catch (const json::parse_error& e) {
        throw_parse(source, line_no, std::string("malformed record: ") + e.what());
    }
    if (!record.is_object()) throw_parse(source, line_no, "record is not an object");
    return record;
}

std::string required_string(const json& record, const char* field, const std::string& source,
                            std::size_t line_no) {
    const auto it = record.find(field);
    if (it == record.end()) throw_parse(source, line_no, std::string("missing field '") + field + "'");
    if (!it->is_string()) throw_parse(source, line_no, std::string("field '") + field + "' is not a string");
    return it->get<std::string>();
}

std::optional<std::int64_t> optional_int(const json& record, const char* field, const std::string& source,
                                         std::size_t line_no) {
    const auto it = record.find(field);
    if (it == record.end() || it->is_null()) return std::nullopt;
    if (!it->is_number_integer()) throw_parse(source, line_no, std::string("field '") + field + "' is not an integer");
    return it->get<std::int64_t>();
}

// Single-token normal form of a dictionary word, or nullopt for multiword expressions.
std::optional<std::string> normalize_word(const std::string& word) {
    auto tokens = tokenize(word);
    if (tokens.size() != 1) return std::nullopt;
    return std::move(tokens.front());
}

}  // namespace

// ---------------------------------------------------------------------------
// Concept corpus and documents

std::vector<ConceptDoc> read_concept_corpus(std::istream& in, const LanguageCode& lang, const std::string& source) {
    std::vector<ConceptDoc> corpus;
    std::unordered_set<std::string> titles;
    std::unordered_set<std::int64_t> ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        io::chomp(line);
        if (is_blank(line)) continue;
        const json record = parse_record(line, source, line_no);
        ConceptDoc doc;
        doc.title = required_string(record, "title", source, line_no);
        doc.text = required_string(record, "text", source, line_no);
        doc.lang = lang;
        doc.concept_id = optional_int(record, "id", source, line_no).value_or(static_cast<std::int64_t>(corpus.size()));
        if (!titles.insert(doc.title).second)
            throw_validation(source + ": duplicate concept title '" + doc.title + "'");
        if (!ids.insert(doc.concept_id).second)
            throw_validation(source + ": duplicate concept id " + std::to_string(doc.concept_id));
        corpus.push_back(std::move(doc));
    }
    return corpus;
}

std::vector<ConceptDoc> load_concept_corpus(const std::filesystem::path& path, const LanguageCode& lang) {
    auto in = io::open_input(path);
    return read_concept_corpus(in, lang, path.string());
}

void write_concept_corpus(std::ostream& out, const std::vector<ConceptDoc>& corpus) {
    for (const auto& doc : corpus) {
        json record = {{"id", doc.concept_id}, {"title", doc.title}, {"text", doc.text}};
        out << record.dump() << '\n';
    }
}

std::vector<Document> read_documents(std::istream& in, const LanguageCode& lang, const std::string& source) {
    std::vector<Document> docs;
    std::unordered_set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        io::chomp(line);
        if (is_blank(line)) continue;
        const json record = parse_record(line, source, line_no);
        Document doc;
        doc.lang = lang;
        doc.text = required_string(record, "text", source, line_no);
        doc.gold_label = optional_int(record, "label", source, line_no);
        if (const auto it = record.find("id"); it != record.end() && !it->is_null()) {
            if (it->is_string()) {
                doc.doc_id = it->get<std::string>();
            } else if (it->is_number_integer()) {
                doc.doc_id = std::to_string(it->get<std::int64_t>());
            } else {
                throw_parse(source, line_no, "field 'id' must be a string or an integer");
            }
        } else if (const auto t = record.find("title"); t != record.end() && t->is_string()) {
            doc.doc_id = t->get<std::string>();
        } else {
            doc.doc_id = std::to_string(docs.size());
        }
        if (doc.doc_id.empty()) throw_parse(source, line_no, "empty document id");
        if (!seen.insert(doc.doc_id).second) throw_validation(source + ": duplicate document id '" + doc.doc_id + "'");
        docs.push_back(std::move(doc));
    }
    return docs;
}

std::vector<Document> load_documents(const std::filesystem::path& path, const LanguageCode& lang) {
    auto in = io::open_input(path);
    return read_documents(in, lang, path.string());
}

void write_documents(std::ostream& out, const std::vector<Document>& docs) {
    for (const auto& doc : docs) {
        json record = {{"id", doc.doc_id}, {"text", doc.text}};
        if (doc.gold_label) record["label"] = *doc.gold_label;
        out << record.dump() << '\n';
    }
}

// ---------------------------------------------------------------------------
// Labels

std::vector<LabelDescription> read_labels(std::istream& in, const std::string& source) {
    std::vector<LabelDescription> labels;
    std::set<LabelId> ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        io::chomp(line);
        if (is_blank(line)) continue;
        const auto cols = io::split(line, '\t');
        if (cols.size() != 3) throw_parse(source, line_no, "expected label_id<TAB>name<TAB>description");
        long long id = 0;
        if (!io::parse_int(cols[0], id)) throw_parse(source, line_no, "label id '" + cols[0] + "' is not an integer");
        if (tokenize(cols[2]).empty())
            throw_validation(source + ": label " + cols[0] + " has an empty description");
        if (!ids.insert(id).second) throw_validation(source + ": duplicate label id " + cols[0]);
        labels.push_back({id, cols[1], cols[2]});
    }
    return labels;
}

std::vector<LabelDescription> load_labels(const std::filesystem::path& path) {
    auto in = io::open_input(path);
    return read_labels(in, path.string());
}

// ---------------------------------------------------------------------------
// Dictionary

const std::vector<std::string>* BilingualDictionary::lookup(const std::string& word) const {
    const auto it = entries_.find(word);
    return it == entries_.end() ? nullptr : &it->second;
}

bool BilingualDictionary::add(const std::string& src, const std::string& tgt) {
    const auto s = normalize_word(src);
    const auto t = normalize_word(tgt);
    if (!s || !t) return false;
    auto& list = entries_[*s];
    if (std::find(list.begin(), list.end(), *t) == list.end()) list.push_back(*t);
    return true;
}

BilingualDictionary BilingualDictionary::identity(const LanguageCode& lang, const std::vector<std::string>& vocabulary) {
    BilingualDictionary dict(lang, lang);
    for (const auto& w : vocabulary) dict.add(w, w);
    return dict;
}

BilingualDictionary read_dictionary(std::istream& in, const LanguageCode& src, const LanguageCode& tgt,
                                    const std::string& source) {
    struct Row {
        std::optional<long long> rank;
        std::size_t order;
        std::string tgt;
    };
    // std::map keeps keys in a deterministic order for serialization.
    std::map<std::string, std::vector<Row>> rows;
    std::size_t order = 0;
    std::size_t skipped = 0;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        io::chomp(line);
        if (line.empty()) continue;
        const auto cols = io::split(line, '\t');
        if (cols.size() < 2) throw_parse(source, line_no, "expected src_word<TAB>tgt_word[<TAB>rank]");
        if (cols.size() > 3) throw_parse(source, line_no, "too many columns");
        std::optional<long long> rank;
        if (cols.size() == 3 && !cols[2].empty()) {
            long long r = 0;
            if (!io::parse_int(cols[2], r)) throw_parse(source, line_no, "rank '" + cols[2] + "' is not an integer");
            rank = r;
        }
        const auto s = normalize_word(cols[0]);
        const auto t = normalize_word(cols[1]);
        if (!s || !t) {
            ++skipped;
            continue;
        }
        rows[*s].push_back({rank, order++, *t});
    }

    BilingualDictionary dict(src, tgt);
    dict.skipped_multiword_ = skipped;
    for (auto& [key, list] : rows) {
        std::stable_sort(list.begin(), list.end(), [](const Row& a, const Row& b) {
            if (a.rank.has_value() != b.rank.has_value()) return a.rank.has_value();
            if (a.rank && *a.rank != *b.rank) return *a.rank < *b.rank;
            return a.order < b.order;
        });
        for (const auto& row : list) dict.add(key, row.tgt);
    }
    return dict;
}

BilingualDictionary load_dictionary(const std::filesystem::path& path, const LanguageCode& src, const LanguageCode& tgt) {
    auto in = io::open_input(path);
    return read_dictionary(in, src, tgt, path.string());
}

void write_dictionary(std::ostream& out, const BilingualDictionary& dict) {
    for (const auto& [key, targets] : dict.entries())
        for (std::size_t i = 0; i < targets.size(); ++i) out << key << '\t' << targets[i] << '\t' << (i + 1) << '\n';
}

// ---------------------------------------------------------------------------
// Title links

TitleLinkTable read_title_links(std::istream& in, const LanguageCode& lang_a, const LanguageCode& lang_b,
                                const std::string& source) {
    TitleLinkTable table{lang_a, lang_b, {}, 0};
    std::unordered_set<std::string> seen_a;
    std::unordered_set<std::string> seen_b;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        io::chomp(line);
        if (line.empty()) continue;
        auto cols = io::split(line, '\t');
        if (cols.size() != 2 || cols[0].empty() || cols[1].empty())
            throw_parse(source, line_no, "expected title_in_lang_a<TAB>title_in_lang_b");
        if (seen_a.count(cols[0]) || seen_b.count(cols[1])) {
            ++table.duplicates_dropped;
            continue;
        }
        seen_a.insert(cols[0]);
        seen_b.insert(cols[1]);
        table.links.emplace_back(std::move(cols[0]), std::move(cols[1]));
    }
    return table;
}

TitleLinkTable load_title_links(const std::filesystem::path& path, const LanguageCode& lang_a,
                                const LanguageCode& lang_b) {
    auto in = io::open_input(path);
    return read_title_links(in, lang_a, lang_b, path.string());
}

// ---------------------------------------------------------------------------
// Typology

TypologyTable::TypologyTable(std::vector<std::string> feature_ids, KeyFeatures key_features)
    : feature_ids_(std::move(feature_ids)), key_features_(std::move(key_features)) {
    for (std::size_t k = 0; k < kKeyFeatureCount; ++k) {
        const auto it = std::find(feature_ids_.begin(), feature_ids_.end(), key_features_[k]);
        if (it == feature_ids_.end())
            throw_validation("key feature '" + key_features_[k] + "' is not a column of the typology table");
        key_indices_[k] = static_cast<std::size_t>(it - feature_ids_.begin());
    }
}

bool TypologyTable::is_key_feature(std::size_t column) const {
    return std::find(key_indices_.begin(), key_indices_.end(), column) != key_indices_.end();
}

void TypologyTable::add_row(const LanguageCode& lang, Row row) {
    if (row.size() != feature_ids_.size())
        throw_validation("typology row for '" + lang.str() + "' has " + std::to_string(row.size()) +
                         " values, expected " + std::to_string(feature_ids_.size()));
    if (!rows_.emplace(lang, std::move(row)).second)
        throw_validation("duplicate typology row for '" + lang.str() + "'");
}

const TypologyTable::Row& TypologyTable::row(const LanguageCode& lang) const {
    const auto it = rows_.find(lang);
    if (it == rows_.end()) throw_validation("language '" + lang.str() + "' is not in the typology table");
    return it->second;
}

std::vector<LanguageCode> TypologyTable::languages() const {
    std::vector<LanguageCode> out;
    out.reserve(rows_.size());
    for (const auto& [lang, row] : rows_) out.push_back(lang);
    std::sort(out.begin(), out.end());
    return out;
}

TypologyTable read_typology(std::istream& in, const TypologyOptions& options, const std::string& source) {
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> fields;
    if (!std::getline(in, line)) throw_parse(source, 1, "missing header row");
    ++line_no;
    io::chomp(line);
    if (!io::split_csv(line, fields) || fields.size() < 2) throw_parse(source, line_no, "malformed header row");

    std::vector<std::size_t> kept;  // source column of each retained feature
    std::vector<std::string> names;
    std::unordered_set<std::string> seen;
    for (std::size_t c = 1; c < fields.size(); ++c) {
        if (!seen.insert(fields[c]).second) throw_parse(source, line_no, "duplicate column '" + fields[c] + "'");
        const auto& dropped = options.dropped_columns;
        if (std::find(dropped.begin(), dropped.end(), fields[c]) != dropped.end()) continue;
        kept.push_back(c);
        names.push_back(fields[c]);
    }
    const std::size_t width = fields.size();
    TypologyTable table(std::move(names), options.key_features);

    while (std::getline(in, line)) {
        ++line_no;
        io::chomp(line);
        if (line.empty()) continue;
        if (!io::split_csv(line, fields)) throw_parse(source, line_no, "unterminated quote");
        if (fields.size() != width)
            throw_parse(source, line_no, "expected " + std::to_string(width) + " columns, got " + std::to_string(fields.size()));
        TypologyTable::Row row;
        row.reserve(kept.size());
        for (const auto c : kept) {
            if (fields[c].empty()) row.emplace_back(std::nullopt);
            else row.emplace_back(std::move(fields[c]));
        }
        table.add_row(LanguageCode(fields[0]), std::move(row));
    }
    return table;
}

TypologyTable load_typology(const std::filesystem::path& path, const TypologyOptions& options) {
    auto in = io::open_input(path);
    return read_typology(in, options, path.string());
}

}  // namespace dataless
