// Parallel kernels against their serial references.
#include <benchmark/benchmark.h>
#include <omp.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "dataless/classifier.hpp"
#include "dataless/esa_index.hpp"
#include "dataless/stats.hpp"

using namespace dataless;

namespace {

std::vector<ConceptDoc> synthetic_corpus(std::size_t n_concepts, std::size_t vocab, std::size_t len) {
    std::mt19937_64 rng(7);
    std::vector<ConceptDoc> out;
    for (std::size_t c = 0; c < n_concepts; ++c) {
        std::string text;
        for (std::size_t i = 0; i < len; ++i) text += "w" + std::to_string(rng() % vocab) + ' ';
        out.push_back({static_cast<std::int64_t>(c), "C" + std::to_string(c), LanguageCode("en"), text});
    }
    return out;
}

struct ScoringInput {
    std::vector<std::string> ids;
    std::vector<ConceptVector> docs;
    std::vector<LabelId> label_ids;
    std::vector<ConceptVector> labels;
};

ScoringInput synthetic_scoring(std::size_t n_docs, std::size_t n_labels, std::size_t dim, std::size_t nnz) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> w(0.0, 1.0);
    auto random_vec = [&] {
        std::vector<ConceptEntry> e;
        for (std::size_t i = 0; i < nnz; ++i) e.push_back({static_cast<ConceptIndex>(rng() % dim), w(rng)});
        return ConceptVector::from_entries(dim, std::move(e));
    };
    ScoringInput in;
    for (std::size_t d = 0; d < n_docs; ++d) {
        in.ids.push_back("d" + std::to_string(d));
        in.docs.push_back(random_vec());
    }
    for (std::size_t l = 0; l < n_labels; ++l) {
        in.label_ids.push_back(static_cast<LabelId>(l));
        in.labels.push_back(random_vec());
    }
    return in;
}

struct AssignInput {
    std::vector<SparseRow> rows;
    std::vector<std::vector<double>> centroids;
};

AssignInput synthetic_assign(std::size_t n_rows, std::size_t k, std::size_t dim, std::size_t nnz) {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> w(0.0, 1.0);
    AssignInput in;
    for (std::size_t r = 0; r < n_rows; ++r) {
        SparseRow row;
        std::uint32_t col = 0;
        for (std::size_t i = 0; i < nnz && col < dim; ++i) {
            col += 1 + static_cast<std::uint32_t>(rng() % (2 * dim / nnz));
            if (col >= dim) break;
            row.index.push_back(col);
            row.value.push_back(w(rng));
        }
        double norm = 0.0;
        for (const double v : row.value) norm += v * v;
        for (double& v : row.value) v /= std::sqrt(norm);
        in.rows.push_back(std::move(row));
    }
    for (std::size_t c = 0; c < k; ++c) {
        std::vector<double> centroid(dim);
        double norm = 0.0;
        for (double& v : centroid) norm += (v = w(rng)) * v;
        for (double& v : centroid) v /= std::sqrt(norm);
        in.centroids.push_back(std::move(centroid));
    }
    return in;
}

void BM_build_index(benchmark::State& state) {
    const auto corpus = synthetic_corpus(static_cast<std::size_t>(state.range(0)), 5000, 200);
    omp_set_num_threads(omp_get_num_procs());
    for (auto _ : state) benchmark::DoNotOptimize(build_index(corpus));
}

void BM_build_index_serial(benchmark::State& state) {
    const auto corpus = synthetic_corpus(static_cast<std::size_t>(state.range(0)), 5000, 200);
    for (auto _ : state) benchmark::DoNotOptimize(build_index_serial(corpus));
}

void BM_score_documents(benchmark::State& state) {
    const auto in = synthetic_scoring(static_cast<std::size_t>(state.range(0)), 20, 20000, 300);
    omp_set_num_threads(omp_get_num_procs());
    for (auto _ : state) benchmark::DoNotOptimize(score_documents(in.ids, in.docs, in.label_ids, in.labels));
}

void BM_score_documents_serial(benchmark::State& state) {
    const auto in = synthetic_scoring(static_cast<std::size_t>(state.range(0)), 20, 20000, 300);
    for (auto _ : state) benchmark::DoNotOptimize(score_documents_serial(in.ids, in.docs, in.label_ids, in.labels));
}

void BM_kmeans_assign(benchmark::State& state) {
    const auto in = synthetic_assign(static_cast<std::size_t>(state.range(0)), 20, 4000, 60);
    std::vector<std::size_t> assignment;
    omp_set_num_threads(omp_get_num_procs());
    for (auto _ : state) benchmark::DoNotOptimize(kmeans_assign(in.rows, in.centroids, assignment));
}

void BM_kmeans_assign_serial(benchmark::State& state) {
    const auto in = synthetic_assign(static_cast<std::size_t>(state.range(0)), 20, 4000, 60);
    std::vector<std::size_t> assignment;
    for (auto _ : state) benchmark::DoNotOptimize(kmeans_assign_serial(in.rows, in.centroids, assignment));
}

}  // namespace

BENCHMARK(BM_build_index)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_build_index_serial)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_score_documents)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_score_documents_serial)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_kmeans_assign)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_kmeans_assign_serial)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
