#include "dataless/clesa.hpp"

#include <istream>
#include <ostream>

#include <json.hpp>

#include "dataless/error.hpp"

namespace dataless {

namespace {
constexpr const char* kFormatName = "dataless-clesa-space";
}

Side ClesaSpace::side_of(const LanguageCode& lang) const {
    if (lang == lang_a()) return Side::a;
    if (lang == lang_b()) return Side::b;
    throw_validation("language '" + lang.str() + "' is not a side of the " + lang_a().str() + "-" + lang_b().str() +
                     " concept space");
}

ClesaSpace build_clesa(const EsaIndex& index_a, const EsaIndex& index_b, const TitleLinkTable& links) {
    if (links.lang_a != index_a.lang() || links.lang_b != index_b.lang())
        throw_validation("title links " + links.lang_a.str() + "-" + links.lang_b.str() + " do not match indexes " +
                         index_a.lang().str() + "-" + index_b.lang().str());

    ClesaSpace space;
    std::vector<bool> used_a(index_a.n_concepts(), false);
    std::vector<bool> used_b(index_b.n_concepts(), false);
    std::vector<ConceptIndex> coords_a;
    std::vector<ConceptIndex> coords_b;
    for (const auto& [title_a, title_b] : links.links) {
        const auto ca = index_a.find_title(title_a);
        const auto cb = index_b.find_title(title_b);
        if (!ca) ++space.stats_.missing_a;
        if (!cb) ++space.stats_.missing_b;
        if (!ca || !cb) continue;
        if (used_a[*ca] || used_b[*cb]) {
            ++space.stats_.reused;
            continue;
        }
        used_a[*ca] = used_b[*cb] = true;
        space.pairs_.emplace_back(*ca, *cb);
        coords_a.push_back(*ca);
        coords_b.push_back(*cb);
    }
    if (space.pairs_.empty()) throw_validation("empty shared space: no title link matches both corpora");

    space.index_a_ = index_a.restrict(coords_a);
    space.index_b_ = index_b.restrict(coords_b);
    return space;
}

ConceptVector embed_shared(const ClesaSpace& space, const std::vector<std::string>& tokens, Side side) {
    return space.index(side).embed(tokens);
}

void ClesaSpace::write(std::ostream& out) const {
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto& [a, b] : pairs_) pairs.push_back({a, b});
    nlohmann::json header = {{"format", kFormatName}, {"version", kFormatVersion}, {"lang_a", lang_a().str()},
                             {"lang_b", lang_b().str()}, {"n_shared", n_shared()}, {"pairs", std::move(pairs)}};
    out << header.dump() << '\n';
    index_a_.write(out);
    index_b_.write(out);
}

ClesaSpace ClesaSpace::read(std::istream& in, const std::string& source) {
    std::string line;
    if (!std::getline(in, line)) throw_parse(source, 1, "empty concept space file");
    ClesaSpace space;
    try {
        const auto header = nlohmann::json::parse(line);
        if (!header.is_object() || header.value("format", "") != kFormatName)
            throw_parse(source, 1, "not a dataless concept space");
        if (header.at("version").get<int>() != kFormatVersion)
            throw_parse(source, 1, "unsupported concept space version " + header.at("version").dump());
        for (const auto& p : header.at("pairs"))
            space.pairs_.emplace_back(p.at(0).get<ConceptIndex>(), p.at(1).get<ConceptIndex>());
        if (space.pairs_.size() != header.at("n_shared").get<std::size_t>())
            throw_parse(source, 1, "pair count does not match n_shared");
    } catch (const nlohmann::json::exception& e) {
        throw_parse(source, 1, std::string("malformed concept space header: ") + e.what());
    }
    space.index_a_ = EsaIndex::read(in, source + " (side a)");
    space.index_b_ = EsaIndex::read(in, source + " (side b)");
    if (space.index_a_.n_concepts() != space.n_shared() || space.index_b_.n_concepts() != space.n_shared())
        throw_validation(source + ": restricted indexes do not match the shared space size");
    return space;
}

}  // namespace dataless
