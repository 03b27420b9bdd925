#include "dataless/ranking.hpp"

#include <algorithm>
#include <istream>
#include <ostream>

#include "dataless/error.hpp"
#include "dataless/io_util.hpp"
#include "dataless/ranksvm.hpp"

namespace dataless {

const char* to_string(RankMethod method) {
    switch (method) {
        case RankMethod::linguistic: return "linguistic";
        case RankMethod::wiki_size: return "wiki-size";
        case RankMethod::lang_links: return "lang-links";
        case RankMethod::harmonic: return "harmonic";
        case RankMethod::ranksvm: return "ranksvm";
    }
    return "unknown";
}

RankMethod parse_rank_method(const std::string& name) {
    for (const auto m : {RankMethod::linguistic, RankMethod::wiki_size, RankMethod::lang_links, RankMethod::harmonic,
                         RankMethod::ranksvm})
        if (name == to_string(m)) return m;
    throw Error(ErrorKind::usage, "unknown ranking method '" + name +
                                      "' (expected linguistic, wiki-size, lang-links, harmonic or ranksvm)");
}

namespace {

bool agree(const std::optional<std::string>& a, const std::optional<std::string>& b) { return a && b && *a == *b; }

}  // namespace

double linguistic_similarity(const TypologyTable& table, const LanguageCode& l1, const LanguageCode& l2,
                             double key_weight) {
    const auto& r1 = table.row(l1);
    const auto& r2 = table.row(l2);
    double s = 0.0;
    for (std::size_t f = 0; f < table.feature_count(); ++f)
        if (agree(r1[f], r2[f])) s += table.is_key_feature(f) ? key_weight : 1.0;
    return s;
}

PairFeatureVector pair_features(const TypologyTable& table, const LanguageCode& src, const LanguageCode& tgt) {
    const auto& r1 = table.row(src);
    const auto& r2 = table.row(tgt);
    PairFeatureVector v{src, tgt, std::vector<double>(table.feature_count(), 0.0)};
    for (std::size_t f = 0; f < table.feature_count(); ++f) v.x[f] = agree(r1[f], r2[f]) ? 1.0 : 0.0;
    return v;
}

void WikiSizes::set(const LanguageCode& lang, double count) {
    if (!(count >= 0.0)) throw_validation("concept count for '" + lang.str() + "' must be non-negative");
    counts_[lang] = count;
}

double WikiSizes::score(const LanguageCode& lang) const {
    const auto it = counts_.find(lang);
    if (it == counts_.end()) throw_validation("no concept count recorded for '" + lang.str() + "'");
    return it->second;
}

void LinkCounts::set(const LanguageCode& from, const LanguageCode& to, double count) {
    if (!(count >= 0.0)) throw_validation("link count must be non-negative");
    counts_[{from, to}] = count;
}

double LinkCounts::score(const LanguageCode& from, const LanguageCode& to) const {
    const auto it = counts_.find({from, to});
    if (it == counts_.end()) throw_validation("no link count recorded for " + from.str() + " -> " + to.str());
    return it->second;
}

WikiSizes read_wiki_sizes(std::istream& in, const std::string& source) {
    WikiSizes sizes;
    std::string line;
    std::vector<std::string> fields;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        io::chomp(line);
        if (line.empty()) continue;
        if (!io::split_csv(line, fields) || fields.size() != 2) throw_parse(source, line_no, "expected lang,count");
        double count = 0.0;
        if (!io::parse_double(fields[1], count)) {
            if (line_no == 1) continue;  // header
            throw_parse(source, line_no, "count '" + fields[1] + "' is not a number");
        }
        sizes.set(LanguageCode(fields[0]), count);
    }
    return sizes;
}

LinkCounts read_link_counts(std::istream& in, const std::string& source) {
    LinkCounts links;
    std::string line;
    std::vector<std::string> fields;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        io::chomp(line);
        if (line.empty()) continue;
        if (!io::split_csv(line, fields) || fields.size() != 3)
            throw_parse(source, line_no, "expected lang_a,lang_b,count");
        double count = 0.0;
        if (!io::parse_double(fields[2], count)) {
            if (line_no == 1) continue;
            throw_parse(source, line_no, "count '" + fields[2] + "' is not a number");
        }
        links.set(LanguageCode(fields[0]), LanguageCode(fields[1]), count);
    }
    return links;
}

RankWeight make_rank_weight(std::size_t rank, std::size_t n) {
    if (n == 0 || rank == 0 || rank > n) throw_validation("rank must lie in [1, n]");
    return {rank, n, static_cast<double>(n - rank + 1) / static_cast<double>(n)};
}

std::map<LanguageCode, RankWeight> to_rank_weights(const std::vector<std::pair<LanguageCode, double>>& scores) {
    if (scores.empty()) throw_validation("cannot rank an empty candidate list");
    std::vector<double> sorted;
    sorted.reserve(scores.size());
    for (const auto& [lang, s] : scores) sorted.push_back(s);
    std::sort(sorted.begin(), sorted.end(), std::greater<>());

    std::map<LanguageCode, RankWeight> out;
    for (const auto& [lang, s] : scores) {
        // Min-rank convention: 1 + number of strictly better candidates.
        const auto better = static_cast<std::size_t>(
            std::lower_bound(sorted.begin(), sorted.end(), s, std::greater<>()) - sorted.begin());
        if (!out.emplace(lang, make_rank_weight(better + 1, scores.size())).second)
            throw_validation("candidate '" + lang.str() + "' listed twice");
    }
    return out;
}

double harmonic_combine(double linguistic_weight, double size_weight) {
    if (linguistic_weight < 0.0 || size_weight < 0.0) throw_validation("rank weights must be non-negative");
    if (linguistic_weight == 0.0 || size_weight == 0.0) return 0.0;
    return 2.0 * linguistic_weight * size_weight / (linguistic_weight + size_weight);
}

namespace {

const auto& require(const auto* ptr, const char* what, RankMethod method) {
    if (!ptr) throw Error(ErrorKind::usage, std::string("ranking method '") + to_string(method) + "' needs " + what);
    return *ptr;
}

}  // namespace

std::vector<BridgeScore> rank_bridges(RankMethod method, const LanguageCode& src,
                                      const std::vector<LanguageCode>& candidates, const RankingInputs& inputs) {
    if (candidates.empty()) throw_validation("no candidate bridge languages for '" + src.str() + "'");
    std::vector<BridgeScore> out;
    out.reserve(candidates.size());
    switch (method) {
        case RankMethod::linguistic: {
            const auto& t = require(inputs.typology, "a typology table", method);
            for (const auto& c : candidates)
                out.push_back({src, c, method, linguistic_similarity(t, src, c, inputs.key_weight)});
            break;
        }
        case RankMethod::wiki_size: {
            const auto& sizes = require(inputs.wiki_sizes, "concept corpus sizes", method);
            for (const auto& c : candidates) out.push_back({src, c, method, sizes.score(c)});
            break;
        }
        case RankMethod::lang_links: {
            const auto& links = require(inputs.link_counts, "link counts", method);
            for (const auto& c : candidates) out.push_back({src, c, method, links.score(src, c)});
            break;
        }
        case RankMethod::harmonic: {
            const auto& t = require(inputs.typology, "a typology table", method);
            const auto& sizes = require(inputs.wiki_sizes, "concept corpus sizes", method);
            std::vector<std::pair<LanguageCode, double>> ling;
            std::vector<std::pair<LanguageCode, double>> size;
            for (const auto& c : candidates) {
                ling.emplace_back(c, linguistic_similarity(t, src, c, inputs.key_weight));
                size.emplace_back(c, sizes.score(c));
            }
            const auto wl = to_rank_weights(ling);
            const auto ww = to_rank_weights(size);
            for (const auto& c : candidates)
                out.push_back({src, c, method, harmonic_combine(wl.at(c).value, ww.at(c).value)});
            break;
        }
        case RankMethod::ranksvm: {
            const auto& t = require(inputs.typology, "a typology table", method);
            const auto& model = require(inputs.model, "a trained model", method);
            for (const auto& c : candidates) out.push_back({src, c, method, ranksvm_score(model, t, src, c)});
            break;
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const BridgeScore& a, const BridgeScore& b) {
        if (a.value != b.value) return a.value > b.value;
        return a.tgt < b.tgt;
    });
    return out;
}

void write_rankings(std::ostream& out, const std::vector<std::vector<BridgeScore>>& rankings) {
    out << "swl,rank,lwl,score\n";
    for (const auto& ranking : rankings)
        for (std::size_t i = 0; i < ranking.size(); ++i)
            out << ranking[i].src.str() << ',' << (i + 1) << ',' << ranking[i].tgt.str() << ','
                << io::format_double(ranking[i].value) << '\n';
}

}  // namespace dataless
