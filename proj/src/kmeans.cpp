#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "dataless/error.hpp"
#include "dataless/stats.hpp"

namespace dataless {

namespace {

std::vector<SparseRow> tfidf_rows(const std::vector<Document>& docs) {
    std::map<std::string, std::uint32_t> vocab;
    std::vector<std::map<std::uint32_t, double>> tf(docs.size());
    for (std::size_t i = 0; i < docs.size(); ++i) {
        for (const auto& tok : tokenize(docs[i].text)) {
            const auto id = vocab.emplace(tok, static_cast<std::uint32_t>(vocab.size())).first->second;
            tf[i][id] += 1.0;
        }
    }
    std::vector<double> df(vocab.size(), 0.0);
    for (const auto& row : tf)
        for (const auto& [id, count] : row) df[id] += 1.0;

    const auto n = static_cast<double>(docs.size());
    std::vector<SparseRow> rows(docs.size());
    for (std::size_t i = 0; i < docs.size(); ++i) {
        double norm2 = 0.0;
        for (const auto& [id, count] : tf[i]) {
            const double w = count * std::log(n / df[id]);
            if (w == 0.0) continue;
            rows[i].index.push_back(id);
            rows[i].value.push_back(w);
            norm2 += w * w;
        }
        if (norm2 > 0.0) {
            const double inv = 1.0 / std::sqrt(norm2);
            for (auto& v : rows[i].value) v *= inv;
        }
    }
    return rows;
}

std::size_t nearest(const SparseRow& row, const std::vector<std::vector<double>>& centroids, double& distance) {
    std::size_t best = 0;
    double best_sim = -1.0;
    for (std::size_t c = 0; c < centroids.size(); ++c) {
        double sim = 0.0;
        for (std::size_t j = 0; j < row.index.size(); ++j) sim += row.value[j] * centroids[c][row.index[j]];
        if (sim > best_sim) {
            best_sim = sim;
            best = c;
        }
    }
    distance = 1.0 - best_sim;
    return best;
}

// SplitMix64 step; derives independent per-trial seeds from one user seed.
std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

}  // namespace

double kmeans_assign(const std::vector<SparseRow>& rows, const std::vector<std::vector<double>>& centroids,
                     std::vector<std::size_t>& assignment) {
    assignment.resize(rows.size());
    std::vector<double> dist(rows.size());
    const auto n = static_cast<std::int64_t>(rows.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) assignment[i] = nearest(rows[i], centroids, dist[i]);
    // Summed in row order so the total does not depend on the thread count.
    return std::accumulate(dist.begin(), dist.end(), 0.0);
}

double kmeans_assign_serial(const std::vector<SparseRow>& rows, const std::vector<std::vector<double>>& centroids,
                            std::vector<std::size_t>& assignment) {
    assignment.resize(rows.size());
    double total = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        double d = 0.0;
        assignment[i] = nearest(rows[i], centroids, d);
        total += d;
    }
    return total;
}

std::vector<KMeansTrial> kmeans_tfidf(const std::vector<Document>& docs, const KMeansOptions& options) {
    if (options.k == 0) throw_validation("k-means needs k >= 1");
    if (options.k > docs.size())
        throw_validation("k-means: k = " + std::to_string(options.k) + " exceeds the " + std::to_string(docs.size()) +
                         " documents");
    const auto rows = tfidf_rows(docs);
    const std::size_t dim = [&] {
        std::uint32_t max_id = 0;
        for (const auto& r : rows)
            for (const auto id : r.index) max_id = std::max(max_id, id + 1);
        return static_cast<std::size_t>(max_id);
    }();
    const bool has_gold = std::all_of(docs.begin(), docs.end(), [](const Document& d) { return d.gold_label.has_value(); });
    const GoldLabels gold = gold_labels(docs);

    std::vector<KMeansTrial> trials;
    for (std::size_t t = 0; t < options.trials; ++t) {
        std::mt19937_64 rng(mix_seed(options.seed ^ mix_seed(t)));
        // Partial Fisher-Yates: the first k entries are k distinct documents.
        std::vector<std::size_t> perm(docs.size());
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        for (std::size_t i = 0; i < options.k; ++i) std::swap(perm[i], perm[i + rng() % (perm.size() - i)]);

        std::vector<std::vector<double>> centroids(options.k, std::vector<double>(dim, 0.0));
        for (std::size_t c = 0; c < options.k; ++c) {
            const auto& row = rows[perm[c]];
            for (std::size_t j = 0; j < row.index.size(); ++j) centroids[c][row.index[j]] = row.value[j];
        }

        KMeansTrial trial;
        std::vector<std::size_t> assignment;
        std::vector<std::size_t> previous;
        for (std::size_t iter = 0; iter < options.max_iterations; ++iter) {
            trial.objective.push_back(kmeans_assign(rows, centroids, assignment));
            trial.iterations = iter + 1;
            if (assignment == previous) break;
            previous = assignment;

            std::vector<std::vector<double>> sums(options.k, std::vector<double>(dim, 0.0));
            for (std::size_t i = 0; i < rows.size(); ++i)
                for (std::size_t j = 0; j < rows[i].index.size(); ++j)
                    sums[assignment[i]][rows[i].index[j]] += rows[i].value[j];
            for (std::size_t c = 0; c < options.k; ++c) {
                double norm2 = 0.0;
                for (const double v : sums[c]) norm2 += v * v;
                if (norm2 == 0.0) continue;  // empty (or all-zero) cluster keeps its centroid
                const double inv = 1.0 / std::sqrt(norm2);
                for (auto& v : sums[c]) v *= inv;
                centroids[c] = std::move(sums[c]);
            }
        }

        trial.clusters.k = options.k;
        for (std::size_t i = 0; i < docs.size(); ++i) trial.clusters.cluster_of[docs[i].doc_id] = assignment[i];
        if (has_gold) trial.purity = purity(trial.clusters, gold).value;
        trials.push_back(std::move(trial));
    }
    return trials;
}

}  // namespace dataless
