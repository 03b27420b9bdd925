// Command-line driver: build indexes and concept spaces, classify, rank bridge
// languages, vote and evaluate. Every output is written in full only after the
// computation succeeds, and is byte-identical for any --threads value.

#include <omp.h>

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dataless/bridge.hpp"
#include "dataless/classifier.hpp"
#include "dataless/clesa.hpp"
#include "dataless/corpus_store.hpp"
#include "dataless/error.hpp"
#include "dataless/esa_index.hpp"
#include "dataless/io_util.hpp"
#include "dataless/ranking.hpp"
#include "dataless/ranksvm.hpp"
#include "dataless/stats.hpp"

namespace {

using namespace dataless;

constexpr std::uint64_t kDefaultSeed = 20170419;

struct GlobalOptions {
    int threads = 1;
    std::uint64_t seed = kDefaultSeed;
};

void emit(const std::string& path, const std::string& content) {
    if (path == "-") {
        std::cout << content;
        std::cout.flush();
        return;
    }
    auto out = io::open_output(path);
    out << content;
    if (!out) throw_runtime("failed writing '" + path + "'");
}

template <typename T>
T read_file(const std::string& path, T (*reader)(std::istream&, const std::string&)) {
    auto in = io::open_input(path);
    return reader(in, path);
}

std::vector<LanguageCode> parse_lang_list(const std::string& csv) {
    std::vector<LanguageCode> out;
    for (const auto& s : io::split(csv, ','))
        if (!s.empty()) out.emplace_back(s);
    return out;
}

TypologyOptions typology_options(const std::string& key_features, const std::string& dropped) {
    TypologyOptions opts;
    const auto keys = io::split(key_features, ',');
    if (keys.size() != TypologyTable::kKeyFeatureCount)
        throw Error(ErrorKind::usage, "--key-features needs exactly four comma-separated names");
    for (std::size_t k = 0; k < keys.size(); ++k) opts.key_features[k] = keys[k];
    opts.dropped_columns = dropped.empty() ? std::vector<std::string>{} : io::split(dropped, ',');
    return opts;
}

// ---------------------------------------------------------------------------

struct BuildIndexArgs {
    std::string corpus, lang, out;
    long long prune_top_k = 0;
};

void cmd_build_index(const BuildIndexArgs& a) {
    const LanguageCode lang(a.lang);
    const auto corpus = load_concept_corpus(a.corpus, lang);
    IndexOptions opts;
    if (a.prune_top_k < 0) throw Error(ErrorKind::usage, "--prune-top-k must be positive");
    if (a.prune_top_k > 0) opts.prune_top_k = static_cast<std::size_t>(a.prune_top_k);
    const auto index = build_index(corpus, opts);
    std::ostringstream os;
    index.write(os);
    emit(a.out, os.str());
    std::cerr << "indexed " << index.n_concepts() << " concepts, " << index.n_terms() << " terms\n";
}

struct BuildClesaArgs {
    std::string index_a, index_b, links, out;
};

void cmd_build_clesa(const BuildClesaArgs& a) {
    const auto ia = read_file<EsaIndex>(a.index_a, [](std::istream& in, const std::string& src) { return EsaIndex::read(in, src); });
    const auto ib = read_file<EsaIndex>(a.index_b, [](std::istream& in, const std::string& src) { return EsaIndex::read(in, src); });
    const auto links = load_title_links(a.links, ia.lang(), ib.lang());
    if (links.duplicates_dropped)
        std::cerr << "warning: dropped " << links.duplicates_dropped << " link rows reusing an already linked title\n";
    const auto space = build_clesa(ia, ib, links);
    const auto& st = space.build_stats();
    if (st.missing_a || st.missing_b)
        std::cerr << "warning: " << st.missing_a << " links name titles missing from " << ia.lang().str() << ", "
                  << st.missing_b << " from " << ib.lang().str() << '\n';
    std::ostringstream os;
    space.write(os);
    emit(a.out, os.str());
    std::cerr << "shared concepts: " << space.n_shared() << '\n';
}

struct ClassifyArgs {
    std::string docs, doc_lang, labels, index, space, dict, bridge, out = "-";
    std::string expansion = "first-only";
    std::string label_text = "name+description";
};

void cmd_classify(const ClassifyArgs& a) {
    if (a.index.empty() == a.space.empty()) throw Error(ErrorKind::usage, "give exactly one of --index or --space");
    if (!a.bridge.empty() && a.dict.empty()) throw Error(ErrorKind::usage, "--bridge needs --dict");
    const LanguageCode doc_lang(a.doc_lang);
    const auto docs = load_documents(a.docs, doc_lang);
    const auto labels = load_labels(a.labels);
    const auto check_bridge = [&](const LanguageCode& lang) {
        if (!a.bridge.empty() && LanguageCode(a.bridge) != lang)
            throw_validation("--bridge " + a.bridge + " does not match the concept language " + lang.str());
    };
    ClassifierOptions opts;
    opts.expansion = parse_expansion(a.expansion);
    opts.label_text = parse_label_text(a.label_text);

    std::vector<Prediction> preds;
    if (!a.index.empty()) {
        auto in = io::open_input(a.index);
        const auto index = EsaIndex::read(in, a.index);
        if (a.dict.empty()) {
            preds = classify_monolingual(docs, labels, index, opts);
        } else {
            check_bridge(index.lang());
            const auto dict = load_dictionary(a.dict, doc_lang, index.lang());
            preds = classify_bridged(docs, dict, labels, index, opts);
        }
    } else {
        auto in = io::open_input(a.space);
        const auto space = ClesaSpace::read(in, a.space);
        if (a.dict.empty()) {
            preds = classify_clesa(docs, labels, space, opts);
        } else {
            check_bridge(space.lang_a());
            const auto dict = load_dictionary(a.dict, doc_lang, space.lang_a());
            preds = classify_bridged(docs, dict, labels, space, opts);
        }
    }
    std::ostringstream os;
    write_predictions(os, preds);
    emit(a.out, os.str());
}

struct RankArgs {
    std::string method, typology, wiki_sizes, lang_links, model, accuracy, swls, lwls, out = "-";
    std::string key_features = "genus,family,macroarea,countrycodes";
    std::string drop_columns = "latitude,longitude";
    double key_weight = kDefaultKeyFeatureWeight;
};

void cmd_rank_bridges(const RankArgs& a) {
    const RankMethod method = parse_rank_method(a.method);
    std::optional<TypologyTable> typology;
    std::optional<WikiSizes> sizes;
    std::optional<LinkCounts> links;
    std::optional<RankSvmModel> model;
    RankingInputs inputs;
    inputs.key_weight = a.key_weight;
    if (!a.typology.empty()) {
        typology = load_typology(a.typology, typology_options(a.key_features, a.drop_columns));
        inputs.typology = &*typology;
    }
    if (!a.wiki_sizes.empty()) {
        sizes = read_file<WikiSizes>(a.wiki_sizes, read_wiki_sizes);
        inputs.wiki_sizes = &*sizes;
    }
    if (!a.lang_links.empty()) {
        links = read_file<LinkCounts>(a.lang_links, read_link_counts);
        inputs.link_counts = &*links;
    }
    if (!a.model.empty()) {
        model = read_file<RankSvmModel>(a.model, read_model);
        inputs.model = &*model;
    }

    std::vector<std::pair<LanguageCode, std::vector<LanguageCode>>> jobs;
    if (!a.accuracy.empty()) {
        if (!a.swls.empty() || !a.lwls.empty()) throw Error(ErrorKind::usage, "--accuracy replaces --swls/--lwls");
        const auto matrix = read_file<AccuracyMatrix>(a.accuracy, read_accuracy_matrix);
        for (const auto& [swl, row] : matrix) {
            std::vector<LanguageCode> cands;
            for (const auto& [lwl, acc] : row) cands.push_back(lwl);
            jobs.emplace_back(swl, std::move(cands));
        }
    } else {
        if (a.swls.empty() || a.lwls.empty()) throw Error(ErrorKind::usage, "give --swls and --lwls, or --accuracy");
        const auto cands = parse_lang_list(a.lwls);
        for (const auto& swl : parse_lang_list(a.swls)) jobs.emplace_back(swl, cands);
    }

    std::vector<std::vector<BridgeScore>> rankings;
    for (const auto& [swl, cands] : jobs) rankings.push_back(rank_bridges(method, swl, cands, inputs));
    std::ostringstream os;
    write_rankings(os, rankings);
    emit(a.out, os.str());
}

struct TrainArgs {
    std::string accuracy, typology, out, report;
    std::string key_features = "genus,family,macroarea,countrycodes";
    std::string drop_columns = "latitude,longitude";
    std::size_t folds = 5;
    std::vector<double> c_grid = default_c_grid();
    std::size_t max_epochs = 10000;
    std::size_t top_weights = 5;
};

void cmd_train_ranker(const TrainArgs& a, const GlobalOptions& g) {
    const auto typology = load_typology(a.typology, typology_options(a.key_features, a.drop_columns));
    const auto matrix = read_file<AccuracyMatrix>(a.accuracy, read_accuracy_matrix);
    CrossValidationOptions cv;
    cv.folds = a.folds;
    cv.c_grid = a.c_grid;
    cv.svm.seed = g.seed;
    cv.svm.max_epochs = a.max_epochs;

    std::cout << "c_grid:";
    for (std::size_t i = 0; i < a.c_grid.size(); ++i) std::cout << (i ? "," : " ") << io::format_double(a.c_grid[i]);
    std::cout << '\n';

    const auto report = cross_validate(matrix, typology, cv);
    double chosen = 0.0;
    double best = 0.0;
    for (const auto& r : report.per_source) {
        chosen += r.chosen_accuracy;
        best += r.best_accuracy;
    }
    const auto n = static_cast<double>(report.per_source.size());
    std::cout << "cv mean accuracy of chosen bridge: " << io::format_double(chosen / n)
              << " (oracle best: " << io::format_double(best / n) << ")\n";

    ModelSelection sel;
    const auto model = fit_ranksvm(matrix, typology, a.c_grid, cv.svm, &sel);
    std::cout << "final model C: " << io::format_double(model.C) << '\n';
    for (const auto& [name, w] : top_weights(model, a.top_weights))
        std::cout << "top weight: " << name << " " << io::format_double(w) << '\n';

    std::ostringstream ms;
    write_model(ms, model);
    emit(a.out, ms.str());
    if (!a.report.empty()) {
        std::ostringstream rs;
        write_cv_report(rs, report);
        emit(a.report, rs.str());
    }
}

struct VoteArgs {
    std::vector<std::string> preds;
    std::string out = "-";
};

void cmd_vote(const VoteArgs& a) {
    std::vector<std::vector<Prediction>> sets;
    for (const auto& p : a.preds) sets.push_back(read_file<std::vector<Prediction>>(p, read_predictions));
    std::ostringstream os;
    write_predictions(os, majority_vote(sets));
    emit(a.out, os.str());
}

struct EvaluateArgs {
    std::string pred, gold, metric = "accuracy", out = "-";
    std::string gold_lang = "xx";
};

void cmd_evaluate(const EvaluateArgs& a) {
    const auto preds = read_file<std::vector<Prediction>>(a.pred, read_predictions);
    const auto gold = gold_labels(load_documents(a.gold, LanguageCode(a.gold_lang)));
    MetricResult m;
    if (a.metric == "accuracy") m = accuracy(preds, gold);
    else if (a.metric == "purity") m = purity(clusters_from_predictions(preds), gold);
    else throw Error(ErrorKind::usage, "unknown metric '" + a.metric + "' (expected accuracy or purity)");
    std::ostringstream os;
    write_metrics(os, {m});
    emit(a.out, os.str());
}

struct CoverageArgs {
    std::string docs, doc_lang, dict, dict_tgt, out = "-";
};

void cmd_dict_coverage(const CoverageArgs& a) {
    const LanguageCode src(a.doc_lang);
    const auto docs = load_documents(a.docs, src);
    const auto dict = load_dictionary(a.dict, src, LanguageCode(a.dict_tgt));
    std::ostringstream os;
    write_coverage_report(os, coverage_report(docs, dict));
    emit(a.out, os.str());
}

struct KMeansArgs {
    std::string docs, doc_lang = "xx", out = "-";
    std::size_t k = 2;
    std::size_t trials = 10;
};

void cmd_kmeans(const KMeansArgs& a, const GlobalOptions& g) {
    const auto docs = load_documents(a.docs, LanguageCode(a.doc_lang));
    KMeansOptions opts;
    opts.k = a.k;
    opts.trials = a.trials;
    opts.seed = g.seed;
    const auto trials = kmeans_tfidf(docs, opts);
    std::vector<MetricResult> rows;
    for (std::size_t t = 0; t < trials.size(); ++t) {
        if (!trials[t].purity) throw_validation("k-means purity needs a gold label on every document");
        rows.push_back({"purity_trial_" + std::to_string(t), *trials[t].purity, docs.size(), std::nullopt, {}});
    }
    double sum = 0.0;
    for (const auto& r : rows) sum += r.value;
    rows.push_back({"purity_mean", sum / static_cast<double>(rows.size()), docs.size(), std::nullopt, {}});
    std::ostringstream os;
    write_metrics(os, rows);
    emit(a.out, os.str());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dataless cross-lingual document classification through ESA concept spaces and bridge languages"};
    app.require_subcommand(1);
    GlobalOptions g;
    app.add_option("--threads", g.threads, "Worker threads (output does not depend on it)")->check(CLI::PositiveNumber);
    app.add_option("--seed", g.seed, "Seed for every randomized component")->capture_default_str();

    BuildIndexArgs bi;
    auto* sub_bi = app.add_subcommand("build-index", "Build an ESA inverted index from a concept corpus");
    sub_bi->add_option("--corpus", bi.corpus, "Concept corpus (JSON lines: title, text, optional id)")->required();
    sub_bi->add_option("--lang", bi.lang, "Corpus language code")->required();
    sub_bi->add_option("--out", bi.out, "Output index file ('-' for stdout)")->required();
    sub_bi->add_option("--prune-top-k", bi.prune_top_k, "Keep each term's k best concepts (0 = no pruning)");

    BuildClesaArgs bc;
    auto* sub_bc = app.add_subcommand("build-clesa", "Align two indexes through interlanguage title links");
    sub_bc->add_option("--index-a", bc.index_a, "Index for language a")->required();
    sub_bc->add_option("--index-b", bc.index_b, "Index for language b")->required();
    sub_bc->add_option("--links", bc.links, "Title links (title_a<TAB>title_b)")->required();
    sub_bc->add_option("--out", bc.out, "Output concept space file")->required();

    ClassifyArgs cl;
    auto* sub_cl = app.add_subcommand("classify", "Dataless classification of documents");
    sub_cl->add_option("--docs", cl.docs, "Documents (JSON lines: id, text, optional label)")->required();
    sub_cl->add_option("--doc-lang", cl.doc_lang, "Document language code")->required();
    sub_cl->add_option("--labels", cl.labels, "Labels (label_id<TAB>name<TAB>description)")->required();
    sub_cl->add_option("--index", cl.index, "Monolingual index (documents or dictionary target in its language)");
    sub_cl->add_option("--space", cl.space, "Cross-lingual concept space; labels use side b");
    sub_cl->add_option("--dict", cl.dict, "Dictionary from the document language into the index/bridge language");
    sub_cl->add_option("--bridge", cl.bridge, "Bridge language of --dict (checked against the index or space)");
    sub_cl->add_option("--expansion", cl.expansion, "Dictionary expansion: first-only or all")->capture_default_str();
    sub_cl->add_option("--label-text", cl.label_text, "Label text: name+description, description or name")
        ->capture_default_str();
    sub_cl->add_option("--out", cl.out, "Prediction file")->capture_default_str();

    RankArgs rk;
    auto* sub_rk = app.add_subcommand("rank-bridges", "Rank candidate bridge languages per source language");
    sub_rk->add_option("--method", rk.method, "linguistic, wiki-size, lang-links, harmonic or ranksvm")->required();
    sub_rk->add_option("--typology", rk.typology, "Typology table (lang,feat1,...)");
    sub_rk->add_option("--key-features", rk.key_features, "The four key feature columns")->capture_default_str();
    sub_rk->add_option("--drop-columns", rk.drop_columns, "Typology columns to ignore")->capture_default_str();
    sub_rk->add_option("--key-weight", rk.key_weight, "Weight of each shared key feature")->capture_default_str();
    sub_rk->add_option("--wiki-sizes", rk.wiki_sizes, "Concept corpus sizes (lang,count)");
    sub_rk->add_option("--lang-links", rk.lang_links, "Link counts (lang_a,lang_b,count)");
    sub_rk->add_option("--model", rk.model, "Trained RankSVM model");
    sub_rk->add_option("--accuracy", rk.accuracy, "Take sources and candidates from an accuracy matrix");
    sub_rk->add_option("--swls", rk.swls, "Comma-separated source languages");
    sub_rk->add_option("--lwls", rk.lwls, "Comma-separated candidate bridge languages");
    sub_rk->add_option("--out", rk.out, "Ranking file (swl,rank,lwl,score)")->capture_default_str();

    TrainArgs tr;
    auto* sub_tr = app.add_subcommand("train-ranker", "Cross-validate and train the RankSVM bridge ranker");
    sub_tr->add_option("--accuracy", tr.accuracy, "Accuracy matrix (swl,lwl,accuracy)")->required();
    sub_tr->add_option("--typology", tr.typology, "Typology table (lang,feat1,...)")->required();
    sub_tr->add_option("--key-features", tr.key_features, "The four key feature columns")->capture_default_str();
    sub_tr->add_option("--drop-columns", tr.drop_columns, "Typology columns to ignore")->capture_default_str();
    sub_tr->add_option("--folds", tr.folds, "Cross-validation folds")->capture_default_str()->check(CLI::Range(2, 1000));
    sub_tr->add_option("--c-grid", tr.c_grid, "Penalty values to search")->delimiter(',')->capture_default_str();
    sub_tr->add_option("--max-epochs", tr.max_epochs, "Optimizer epoch cap")->capture_default_str();
    sub_tr->add_option("--top-weights", tr.top_weights, "Largest-|w| features to print")->capture_default_str();
    sub_tr->add_option("--out", tr.out, "Model file")->required();
    sub_tr->add_option("--report", tr.report, "Cross-validation report file");

    VoteArgs vo;
    auto* sub_vo = app.add_subcommand("vote", "Majority vote over prediction files");
    sub_vo->add_option("--pred", vo.preds, "Prediction file (repeat per voter)")->required();
    sub_vo->add_option("--out", vo.out, "Voted prediction file")->capture_default_str();

    EvaluateArgs ev;
    auto* sub_ev = app.add_subcommand("evaluate", "Score predictions against gold labels");
    sub_ev->add_option("--pred", ev.pred, "Prediction file")->required();
    sub_ev->add_option("--gold", ev.gold, "Documents carrying gold labels (JSON lines)")->required();
    sub_ev->add_option("--metric", ev.metric, "accuracy or purity")->capture_default_str();
    sub_ev->add_option("--out", ev.out, "Metric report (metric,value,n,p_value)")->capture_default_str();

    CoverageArgs cv;
    auto* sub_cv = app.add_subcommand("dict-coverage", "Dictionary coverage of a document collection");
    sub_cv->add_option("--docs", cv.docs, "Documents (JSON lines)")->required();
    sub_cv->add_option("--doc-lang", cv.doc_lang, "Document (dictionary source) language")->required();
    sub_cv->add_option("--dict", cv.dict, "Dictionary (src<TAB>tgt[<TAB>rank])")->required();
    sub_cv->add_option("--dict-tgt", cv.dict_tgt, "Dictionary target language")->required();
    sub_cv->add_option("--out", cv.out, "Coverage report")->capture_default_str();

    KMeansArgs km;
    auto* sub_km = app.add_subcommand("kmeans", "K-means baseline over tf-idf document vectors, scored by purity");
    sub_km->add_option("--docs", km.docs, "Documents with gold labels (JSON lines)")->required();
    sub_km->add_option("--k", km.k, "Cluster count")->capture_default_str();
    sub_km->add_option("--trials", km.trials, "Independently seeded runs")->capture_default_str();
    sub_km->add_option("--out", km.out, "Metric report")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : static_cast<int>(ErrorKind::usage);
    }

    omp_set_num_threads(g.threads);
    try {
        if (*sub_bi) cmd_build_index(bi);
        else if (*sub_bc) cmd_build_clesa(bc);
        else if (*sub_cl) cmd_classify(cl);
        else if (*sub_rk) cmd_rank_bridges(rk);
        else if (*sub_tr) cmd_train_ranker(tr, g);
        else if (*sub_vo) cmd_vote(vo);
        else if (*sub_ev) cmd_evaluate(ev);
        else if (*sub_cv) cmd_dict_coverage(cv);
        else if (*sub_km) cmd_kmeans(km, g);
    } catch (const Error& e) {
        std::cerr << "error[" << to_string(e.kind()) << "]: " << e.what() << '\n';
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error[runtime]: " << e.what() << '\n';
        return static_cast<int>(ErrorKind::runtime);
    }
    return 0;
}
