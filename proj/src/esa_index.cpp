#include "dataless/esa_index.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>

#include <omp.h>

#include <json.hpp>

#include "dataless/error.hpp"

namespace dataless {

namespace {

using nlohmann::json;

constexpr const char* kFormatName = "dataless-esa-index";

// Sorted (term, count) bag for one concept text.
std::vector<std::pair<std::string, std::uint32_t>> term_bag(const std::string& text) {
    auto tokens = tokenize(text);
    std::sort(tokens.begin(), tokens.end());
    std::vector<std::pair<std::string, std::uint32_t>> bag;
    for (auto& t : tokens) {
        if (!bag.empty() && bag.back().first == t) ++bag.back().second;
        else bag.emplace_back(std::move(t), 1);
    }
    return bag;
}

void check_corpus(const std::vector<ConceptDoc>& corpus) {
    if (corpus.empty()) throw_validation("cannot build an index from an empty corpus");
    for (const auto& doc : corpus)
        if (doc.lang != corpus.front().lang)
            throw_validation("corpus mixes languages '" + corpus.front().lang.str() + "' and '" + doc.lang.str() + "'");
}

}  // namespace

std::vector<ConceptEntry> weigh_postings(std::span<const TermCount> counts, std::size_t n_concepts,
                                         const std::optional<std::size_t>& prune_top_k) {
    std::vector<ConceptEntry> out;
    const std::size_t df = counts.size();
    if (df == 0 || df >= n_concepts) return out;
    const double idf = std::log(static_cast<double>(n_concepts) / static_cast<double>(df));
    out.reserve(df);
    for (const auto& tc : counts) out.push_back({tc.concept_index, static_cast<double>(tc.count) * idf});
    if (prune_top_k && out.size() > *prune_top_k) {
        std::stable_sort(out.begin(), out.end(), [](const ConceptEntry& a, const ConceptEntry& b) {
            if (a.weight != b.weight) return a.weight > b.weight;
            return a.concept_index < b.concept_index;
        });
        out.resize(*prune_top_k);
        std::sort(out.begin(), out.end(),
                  [](const ConceptEntry& a, const ConceptEntry& b) { return a.concept_index < b.concept_index; });
    }
    return out;
}

EsaIndex EsaIndex::from_counts(LanguageCode lang, std::vector<std::string> titles,
                               std::vector<std::int64_t> concept_ids, std::vector<std::string> terms,
                               std::vector<std::vector<TermCount>> counts, IndexOptions options) {
    if (titles.size() != concept_ids.size()) throw_validation("title and concept id lists differ in length");
    if (terms.size() != counts.size()) throw_validation("term and count lists differ in length");
    EsaIndex index;
    index.lang_ = std::move(lang);
    index.titles_ = std::move(titles);
    index.concept_ids_ = std::move(concept_ids);
    index.prune_top_k_ = options.prune_top_k;
    index.terms_ = std::move(terms);
    index.counts_ = std::move(counts);
    index.finalize();
    return index;
}

void EsaIndex::finalize() {
    title_lookup_.clear();
    title_lookup_.reserve(titles_.size());
    for (std::size_t i = 0; i < titles_.size(); ++i)
        if (!title_lookup_.emplace(titles_[i], static_cast<ConceptIndex>(i)).second)
            throw_validation("duplicate concept title '" + titles_[i] + "'");

    term_lookup_.clear();
    term_lookup_.reserve(terms_.size());
    for (std::size_t t = 0; t < terms_.size(); ++t) {
        if (t > 0 && !(terms_[t - 1] < terms_[t])) throw_validation("index vocabulary is not strictly sorted");
        term_lookup_.emplace(terms_[t], static_cast<std::uint32_t>(t));
    }

    const std::size_t n = titles_.size();
    for (const auto& list : counts_) {
        for (std::size_t i = 0; i < list.size(); ++i) {
            if (list[i].concept_index >= n || list[i].count == 0 ||
                (i > 0 && list[i - 1].concept_index >= list[i].concept_index))
                throw_validation("malformed term count list");
        }
    }

    postings_.assign(counts_.size(), {});
    const auto n_terms = static_cast<std::int64_t>(counts_.size());
#pragma omp parallel for schedule(dynamic, 256)
    for (std::int64_t t = 0; t < n_terms; ++t) postings_[t] = weigh_postings(counts_[t], n, prune_top_k_);
}

std::optional<ConceptIndex> EsaIndex::find_title(const std::string& title) const {
    const auto it = title_lookup_.find(title);
    if (it == title_lookup_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::uint32_t> EsaIndex::term_id(const std::string& term) const {
    const auto it = term_lookup_.find(term);
    if (it == term_lookup_.end()) return std::nullopt;
    return it->second;
}

std::size_t EsaIndex::doc_freq(const std::string& term) const {
    const auto id = term_id(term);
    return id ? counts_[*id].size() : 0;
}

std::span<const ConceptEntry> EsaIndex::postings(const std::string& term) const {
    const auto id = term_id(term);
    if (!id) return {};
    return postings_[*id];
}

ConceptVector EsaIndex::embed(const std::vector<std::string>& tokens) const {
    std::vector<std::uint32_t> ids;
    ids.reserve(tokens.size());
    for (const auto& tok : tokens)
        if (const auto id = term_id(tok)) ids.push_back(*id);
    std::sort(ids.begin(), ids.end());

    std::vector<ConceptEntry> gathered;
    for (std::size_t i = 0; i < ids.size();) {
        std::size_t j = i;
        while (j < ids.size() && ids[j] == ids[i]) ++j;
        const double multiplicity = static_cast<double>(j - i);
        for (const auto& p : postings_[ids[i]]) gathered.push_back({p.concept_index, multiplicity * p.weight});
        i = j;
    }
    return ConceptVector::from_entries(n_concepts(), std::move(gathered));
}

EsaIndex EsaIndex::restrict(const std::vector<ConceptIndex>& coords) const {
    constexpr auto kAbsent = static_cast<std::int64_t>(-1);
    std::vector<std::int64_t> remap(n_concepts(), kAbsent);
    std::vector<std::string> titles;
    std::vector<std::int64_t> ids;
    titles.reserve(coords.size());
    ids.reserve(coords.size());
    for (std::size_t i = 0; i < coords.size(); ++i) {
        const ConceptIndex c = coords[i];
        if (c >= n_concepts()) throw_validation("restriction coordinate outside the index");
        if (remap[c] != kAbsent) throw_validation("restriction coordinates must be distinct");
        remap[c] = static_cast<std::int64_t>(i);
        titles.push_back(titles_[c]);
        ids.push_back(concept_ids_[c]);
    }

    std::vector<std::vector<TermCount>> restricted(counts_.size());
    const auto n_terms = static_cast<std::int64_t>(counts_.size());
#pragma omp parallel for schedule(dynamic, 256)
    for (std::int64_t t = 0; t < n_terms; ++t) {
        auto& out = restricted[t];
        for (const auto& tc : counts_[t])
            if (remap[tc.concept_index] != kAbsent)
                out.push_back({static_cast<ConceptIndex>(remap[tc.concept_index]), tc.count});
        std::sort(out.begin(), out.end(),
                  [](const TermCount& a, const TermCount& b) { return a.concept_index < b.concept_index; });
    }

    std::vector<std::string> terms;
    std::vector<std::vector<TermCount>> counts;
    for (std::size_t t = 0; t < restricted.size(); ++t) {
        if (restricted[t].empty()) continue;
        terms.push_back(terms_[t]);
        counts.push_back(std::move(restricted[t]));
    }
    return from_counts(lang_, std::move(titles), std::move(ids), std::move(terms), std::move(counts),
                       IndexOptions{prune_top_k_});
}

void EsaIndex::write(std::ostream& out) const {
    json header = {{"format", kFormatName},
                   {"version", kFormatVersion},
                   {"lang", lang_.str()},
                   {"weighting", "tf*ln(N/df)"},
                   {"n_concepts", n_concepts()},
                   {"n_terms", n_terms()},
                   {"prune_top_k", prune_top_k_ ? json(*prune_top_k_) : json(nullptr)}};
    out << header.dump() << '\n';
    for (std::size_t i = 0; i < titles_.size(); ++i)
        out << json{{"id", concept_ids_[i]}, {"title", titles_[i]}}.dump() << '\n';
    for (std::size_t t = 0; t < terms_.size(); ++t) {
        json counts = json::array();
        for (const auto& tc : counts_[t]) counts.push_back({tc.concept_index, tc.count});
        out << json{{"term", terms_[t]}, {"counts", std::move(counts)}}.dump() << '\n';
    }
}

EsaIndex EsaIndex::read(std::istream& in, const std::string& source) {
    std::string line;
    std::size_t line_no = 0;
    auto next = [&]() -> json {
        if (!std::getline(in, line)) throw_parse(source, line_no + 1, "unexpected end of index");
        ++line_no;
        try {
            return json::parse(line);
        } catch (const json::parse_error& e) {
            throw_parse(source, line_no, std::string("malformed index record: ") + e.what());
        }
    };

    try {
        const json header = next();
        if (!header.is_object() || header.value("format", "") != kFormatName)
            throw_parse(source, line_no, "not a dataless ESA index");
        if (header.at("version").get<int>() != kFormatVersion)
            throw_parse(source, line_no, "unsupported index version " + header.at("version").dump());
        LanguageCode lang(header.at("lang").get<std::string>());
        const auto n_concepts = header.at("n_concepts").get<std::size_t>();
        const auto n_terms = header.at("n_terms").get<std::size_t>();
        IndexOptions options;
        if (!header.at("prune_top_k").is_null()) options.prune_top_k = header.at("prune_top_k").get<std::size_t>();

        std::vector<std::string> titles;
        std::vector<std::int64_t> ids;
        titles.reserve(n_concepts);
        ids.reserve(n_concepts);
        for (std::size_t i = 0; i < n_concepts; ++i) {
            const json rec = next();
            ids.push_back(rec.at("id").get<std::int64_t>());
            titles.push_back(rec.at("title").get<std::string>());
        }
        std::vector<std::string> terms;
        std::vector<std::vector<TermCount>> counts;
        terms.reserve(n_terms);
        counts.reserve(n_terms);
        for (std::size_t t = 0; t < n_terms; ++t) {
            const json rec = next();
            terms.push_back(rec.at("term").get<std::string>());
            auto& list = counts.emplace_back();
            for (const auto& pair : rec.at("counts"))
                list.push_back({pair.at(0).get<ConceptIndex>(), pair.at(1).get<std::uint32_t>()});
        }
        return from_counts(std::move(lang), std::move(titles), std::move(ids), std::move(terms), std::move(counts),
                           options);
    } catch (const json::exception& e) {
        throw_parse(source, line_no, std::string("malformed index record: ") + e.what());
    }
}

bool EsaIndex::operator==(const EsaIndex& other) const {
    return lang_ == other.lang_ && titles_ == other.titles_ && concept_ids_ == other.concept_ids_ &&
           prune_top_k_ == other.prune_top_k_ && terms_ == other.terms_ && counts_ == other.counts_ &&
           postings_ == other.postings_;
}

EsaIndex build_index(const std::vector<ConceptDoc>& corpus, IndexOptions options) {
    check_corpus(corpus);
    const auto n = static_cast<std::int64_t>(corpus.size());

    std::vector<std::vector<std::pair<std::string, std::uint32_t>>> bags(corpus.size());
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t c = 0; c < n; ++c) bags[c] = term_bag(corpus[c].text);

    std::vector<std::string> terms;
    for (const auto& bag : bags)
        for (const auto& [term, count] : bag) terms.push_back(term);
    std::sort(terms.begin(), terms.end());
    terms.erase(std::unique(terms.begin(), terms.end()), terms.end());

    // Term ids per concept are looked up concurrently; the append below runs in corpus
    // order so every count list comes out sorted by concept index.
    std::vector<std::vector<std::uint32_t>> bag_ids(corpus.size());
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t c = 0; c < n; ++c) {
        auto& ids = bag_ids[c];
        ids.reserve(bags[c].size());
        for (const auto& [term, count] : bags[c]) {
            const auto it = std::lower_bound(terms.begin(), terms.end(), term);
            ids.push_back(static_cast<std::uint32_t>(it - terms.begin()));
        }
    }

    std::vector<std::vector<TermCount>> counts(terms.size());
    for (std::size_t c = 0; c < corpus.size(); ++c)
        for (std::size_t k = 0; k < bags[c].size(); ++k)
            counts[bag_ids[c][k]].push_back({static_cast<ConceptIndex>(c), bags[c][k].second});

    std::vector<std::string> titles;
    std::vector<std::int64_t> ids;
    titles.reserve(corpus.size());
    ids.reserve(corpus.size());
    for (const auto& doc : corpus) {
        titles.push_back(doc.title);
        ids.push_back(doc.concept_id);
    }
    return EsaIndex::from_counts(corpus.front().lang, std::move(titles), std::move(ids), std::move(terms),
                                 std::move(counts), options);
}

EsaIndex build_index_serial(const std::vector<ConceptDoc>& corpus, IndexOptions options) {
    check_corpus(corpus);
    std::map<std::string, std::map<ConceptIndex, std::uint32_t>> table;
    for (std::size_t c = 0; c < corpus.size(); ++c)
        for (const auto& tok : tokenize(corpus[c].text)) ++table[tok][static_cast<ConceptIndex>(c)];

    std::vector<std::string> terms;
    std::vector<std::vector<TermCount>> counts;
    for (const auto& [term, per_concept] : table) {
        terms.push_back(term);
        auto& list = counts.emplace_back();
        for (const auto& [c, k] : per_concept) list.push_back({c, k});
    }
    std::vector<std::string> titles;
    std::vector<std::int64_t> ids;
    for (const auto& doc : corpus) {
        titles.push_back(doc.title);
        ids.push_back(doc.concept_id);
    }
    return EsaIndex::from_counts(corpus.front().lang, std::move(titles), std::move(ids), std::move(terms),
                                 std::move(counts), options);
}

ConceptVector embed_text(const EsaIndex& index, const std::vector<std::string>& tokens) { return index.embed(tokens); }

}  // namespace dataless
