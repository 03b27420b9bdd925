#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "dataless/classifier.hpp"
#include "dataless/io_util.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using namespace dataless;
using fixtures::slurp;
using fixtures::write_text;

namespace {

struct Workspace {
    fs::path dir;
    Workspace() {
        dir = fs::temp_directory_path() / ("dataless_cli_test_" + std::to_string(::getpid()));
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    ~Workspace() { fs::remove_all(dir); }
    std::string operator()(const std::string& name) const { return (dir / name).string(); }
};

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(const Workspace& ws, const std::string& args) {
    const std::string cmd = std::string(DATALESS_CLI) + " " + args + " > " + ws("stdout") + " 2> " + ws("stderr");
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(ws("stdout")), slurp(ws("stderr"))};
}

void write_world(const Workspace& ws) {
    const auto world = fixtures::random_world(42);
    std::ostringstream concepts, docs, labels;
    write_concept_corpus(concepts, world.concepts);
    write_documents(docs, world.docs);
    for (const auto& l : world.labels) labels << l.label_id << '\t' << l.name << '\t' << l.description << '\n';
    write_text(ws("concepts.jsonl"), concepts.str());
    write_text(ws("docs.jsonl"), docs.str());
    write_text(ws("labels.tsv"), labels.str());
    std::string dict;
    std::string links;
    for (const auto& w : world.vocabulary) dict += w + '\t' + w + '\n';
    for (const auto& c : world.concepts) links += c.title + '\t' + c.title + '\n';
    write_text(ws("identity.tsv"), dict);
    write_text(ws("self_links.tsv"), links);
}

}  // namespace

TEST_CASE("classify with identity fixtures reproduces classify_monolingual byte for byte") {
    Workspace ws;
    write_world(ws);
    const auto world = fixtures::random_world(42);
    std::ostringstream expected;
    write_predictions(expected, classify_monolingual(world.docs, world.labels, build_index(world.concepts)));

    REQUIRE(run(ws, "build-index --corpus " + ws("concepts.jsonl") + " --lang en --out " + ws("en.idx")).code == 0);
    REQUIRE(run(ws, "build-clesa --index-a " + ws("en.idx") + " --index-b " + ws("en.idx") + " --links " +
                        ws("self_links.tsv") + " --out " + ws("self.space"))
                .code == 0);
    const auto base = "classify --docs " + ws("docs.jsonl") + " --doc-lang en --labels " + ws("labels.tsv");
    const auto mono = run(ws, base + " --index " + ws("en.idx"));
    CHECK(mono.code == 0);
    CHECK(mono.out == expected.str());
    CHECK(run(ws, base + " --space " + ws("self.space")).out == expected.str());
    CHECK(run(ws, base + " --space " + ws("self.space") + " --dict " + ws("identity.tsv")).out == expected.str());
    CHECK(run(ws, base + " --index " + ws("en.idx") + " --dict " + ws("identity.tsv") + " --bridge en").out ==
          expected.str());
    CHECK(run(ws, base + " --space " + ws("self.space") + " --out " + ws("p.csv")).code == 0);
    CHECK(slurp(ws("p.csv")) == expected.str());

    CHECK(run(ws, base + " --index " + ws("en.idx") + " --dict " + ws("identity.tsv") + " --bridge fr").code == 4);
    CHECK(run(ws, base).code == 2);
    CHECK(run(ws, base + " --index " + ws("en.idx") + " --space " + ws("self.space")).code == 2);
}

TEST_CASE("evaluate on the 3-of-4 fixture prints 0.75") {
    Workspace ws;
    write_text(ws("pred.csv"), "doc_id,predicted_label,score_1,score_2\na,1,1,0\nb,2,0,1\nc,1,1,0\nd,1,1,0\n");
    write_text(ws("gold.jsonl"),
               "{\"id\":\"a\",\"text\":\"\",\"label\":1}\n{\"id\":\"b\",\"text\":\"\",\"label\":2}\n"
               "{\"id\":\"c\",\"text\":\"\",\"label\":1}\n{\"id\":\"d\",\"text\":\"\",\"label\":2}\n");
    const auto r = run(ws, "evaluate --pred " + ws("pred.csv") + " --gold " + ws("gold.jsonl"));
    CHECK(r.code == 0);
    CHECK(r.out == "metric,value,n,p_value\naccuracy,0.75,4,\n");
    CHECK(run(ws, "evaluate --pred " + ws("pred.csv") + " --gold " + ws("gold.jsonl") + " --metric f1").code == 2);
}

TEST_CASE("train-ranker echoes the default grid and writes the model and report") {
    Workspace ws;
    const auto bench = fixtures::planted_benchmark(1, 6, 4, 4);
    std::ostringstream acc, typ;
    for (const auto& [swl, row] : bench.accuracy)
        for (const auto& [lwl, a] : row) acc << swl.str() << ',' << lwl.str() << ',' << io::format_double(a) << '\n';
    typ << "lang";
    for (const auto& f : bench.typology.feature_ids()) typ << ',' << f;
    typ << '\n';
    for (const auto& l : bench.typology.languages()) {
        typ << l.str();
        for (const auto& v : bench.typology.row(l)) typ << ',' << *v;
        typ << '\n';
    }
    write_text(ws("acc.csv"), acc.str());
    write_text(ws("typ.csv"), typ.str());
    const auto r = run(ws, "train-ranker --accuracy " + ws("acc.csv") + " --typology " + ws("typ.csv") +
                               " --folds 3 --out " + ws("model.txt") + " --report " + ws("cv.csv"));
    CHECK(r.code == 0);
    CHECK(r.out.rfind("c_grid: 0.01,0.1,1,10,100,1000,10000\n", 0) == 0);
    const auto model = slurp(ws("model.txt"));
    CHECK(model.rfind("dataless-ranksvm 1\n", 0) == 0);
    CHECK(slurp(ws("cv.csv")).find("swl,fold,C,chosen_lwl") != std::string::npos);

    const auto ranked = run(ws, "rank-bridges --method ranksvm --typology " + ws("typ.csv") + " --model " +
                                    ws("model.txt") + " --accuracy " + ws("acc.csv"));
    CHECK(ranked.code == 0);
    CHECK(ranked.out.rfind("swl,rank,lwl,score\n", 0) == 0);

    CHECK(run(ws, "train-ranker --accuracy " + ws("acc.csv") + " --typology " + ws("typ.csv") +
                      " --folds 7 --out " + ws("m2.txt"))
              .code == 4);
    CHECK(run(ws, "train-ranker --accuracy " + ws("acc.csv") + " --typology " + ws("typ.csv") +
                      " --c-grid 1,x --out " + ws("m2.txt"))
              .code == 2);
}

TEST_CASE("vote and dict-coverage") {
    Workspace ws;
    write_text(ws("p1.csv"), "doc_id,predicted_label,score_1,score_2\na,1,1,0\nb,2,0,1\n");
    write_text(ws("p2.csv"), "doc_id,predicted_label,score_1,score_2\na,2,0,1\nb,2,0,1\n");
    write_text(ws("p3.csv"), "doc_id,predicted_label,score_1,score_2\na,2,0,1\nb,1,1,0\n");
    const auto r = run(ws, "vote --pred " + ws("p1.csv") + " --pred " + ws("p2.csv") + " --pred " + ws("p3.csv"));
    CHECK(r.code == 0);
    std::istringstream in(r.out);
    const auto voted = read_predictions(in);
    REQUIRE(voted.size() == 2);
    CHECK(voted[0].label_id == 2);
    CHECK(voted[1].label_id == 2);

    write_text(ws("docs.jsonl"), "{\"id\":\"x\",\"text\":\"gida ruwa xyz\"}\n");
    write_text(ws("dict.tsv"), "gida\thouse\nruwa\twater\n");
    const auto cov = run(ws, "dict-coverage --docs " + ws("docs.jsonl") + " --doc-lang ha --dict " + ws("dict.tsv") +
                                 " --dict-tgt en");
    CHECK(cov.code == 0);
    CHECK(cov.out == "doc_id,covered,total\nx,2,3\n#summary,src=ha,tgt=en,covered=2,total=3,"
                     "pct_words_covered=0.6666666666666666,n_expressions=2\n");
}

TEST_CASE("error categories map to exit codes") {
    Workspace ws;
    CHECK(run(ws, "").code == 2);
    CHECK(run(ws, "no-such-command").code == 2);
    CHECK(run(ws, "build-index --lang en --out x").code == 2);
    CHECK(run(ws, "--threads 0 vote --pred x").code == 2);

    const auto missing = run(ws, "build-index --corpus " + ws("nope.jsonl") + " --lang en --out " + ws("o"));
    CHECK(missing.code == 4);
    CHECK(missing.err.find("nope.jsonl") != std::string::npos);
    CHECK_FALSE(fs::exists(ws("o")));

    write_text(ws("bad.jsonl"), "{\"title\":\"A\",\"text\":\"a\"}\n{broken\n");
    const auto parse = run(ws, "build-index --corpus " + ws("bad.jsonl") + " --lang en --out " + ws("o"));
    CHECK(parse.code == 3);
    CHECK(parse.err.find(":2:") != std::string::npos);

    write_text(ws("c.jsonl"), "{\"title\":\"A\",\"text\":\"a\"}\n");
    CHECK(run(ws, "build-index --corpus " + ws("c.jsonl") + " --lang EN --out " + ws("o")).code == 4);
    CHECK(run(ws, "build-index --corpus " + ws("c.jsonl") + " --lang en --out /nonexistent/dir/x").code == 5);
}

TEST_CASE("help documents every flag") {
    Workspace ws;
    const std::vector<std::pair<std::string, std::vector<std::string>>> expected{
        {"build-index", {"--corpus", "--lang", "--out", "--prune-top-k"}},
        {"build-clesa", {"--index-a", "--index-b", "--links", "--out"}},
        {"classify",
         {"--docs", "--doc-lang", "--labels", "--index", "--space", "--dict", "--bridge", "--expansion", "--label-text",
          "--out"}},
        {"rank-bridges",
         {"--method", "--typology", "--key-features", "--drop-columns", "--key-weight", "--wiki-sizes", "--lang-links",
          "--model", "--accuracy", "--swls", "--lwls", "--out"}},
        {"train-ranker",
         {"--accuracy", "--typology", "--key-features", "--drop-columns", "--folds", "--c-grid", "--max-epochs",
          "--top-weights", "--out", "--report"}},
        {"vote", {"--pred", "--out"}},
        {"evaluate", {"--pred", "--gold", "--metric", "--out"}},
        {"dict-coverage", {"--docs", "--doc-lang", "--dict", "--dict-tgt", "--out"}},
        {"kmeans", {"--docs", "--k", "--trials", "--out"}},
    };
    const auto top = run(ws, "--help");
    CHECK(top.code == 0);
    CHECK(top.out.find("--threads") != std::string::npos);
    CHECK(top.out.find("--seed") != std::string::npos);
    for (const auto& [sub, flags] : expected) {
        const auto r = run(ws, sub + " --help");
        CHECK(r.code == 0);
        for (const auto& f : flags) {
            INFO(sub << " " << f);
            CHECK(r.out.find(f + " ") != std::string::npos);
        }
        // No flag is listed that the test does not know about.
        std::size_t listed = 0;
        std::istringstream lines(r.out);
        for (std::string line; std::getline(lines, line);)
            if (line.rfind("  --", 0) == 0) ++listed;
        CHECK(listed == flags.size());
    }
}

TEST_CASE("seed changes randomized output and is reproducible") {
    Workspace ws;
    std::string docs;
    for (int i = 0; i < 30; ++i)
        docs += "{\"id\":\"d" + std::to_string(i) + "\",\"text\":\"w" + std::to_string(i % 7) + " w" +
                std::to_string(i % 5) + " v" + std::to_string(i % 3) + "\",\"label\":" + std::to_string(i % 3) + "}\n";
    write_text(ws("docs.jsonl"), docs);
    const auto a = run(ws, "--seed 1 kmeans --docs " + ws("docs.jsonl") + " --k 3 --trials 5").out;
    const auto b = run(ws, "--seed 1 kmeans --docs " + ws("docs.jsonl") + " --k 3 --trials 5").out;
    const auto c = run(ws, "--seed 2 kmeans --docs " + ws("docs.jsonl") + " --k 3 --trials 5").out;
    CHECK(a == b);
    CHECK(a.find("purity_mean") != std::string::npos);
    CHECK(a != c);
}
