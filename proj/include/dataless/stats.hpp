#pragma once

// Evaluation metrics, a k-means baseline and the significance tests used to compare
// bridge-selection methods.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dataless/classifier.hpp"
#include "dataless/corpus_store.hpp"

namespace dataless {

struct MetricResult {
    std::string name;
    double value = 0.0;
    std::size_t n = 0;
    std::optional<double> p_value;
    std::map<std::string, double> extra;  // test statistic, degrees of freedom, ...
};

using GoldLabels = std::map<std::string, LabelId>;

/// doc_id -> gold label for every document that has one.
GoldLabels gold_labels(const std::vector<Document>& docs);

struct ClusterAssignment {
    std::map<std::string, std::size_t> cluster_of;
    std::size_t k = 0;
};

/// Throws a validation error when a prediction has no gold label or `preds` is empty.
MetricResult accuracy(const std::vector<Prediction>& preds, const GoldLabels& gold);

/// Each cluster is credited with its most frequent gold label.
MetricResult purity(const ClusterAssignment& clusters, const GoldLabels& gold);

/// Predicted labels read as cluster ids.
ClusterAssignment clusters_from_predictions(const std::vector<Prediction>& preds);

/// Product-moment correlation with a two-sided p from t with n - 2 dof.
MetricResult pearson(std::span<const double> x, std::span<const double> y);

/// Two-sided paired t-test on a - b.
MetricResult paired_ttest(std::span<const double> a, std::span<const double> b);

/// Two-sided two-sample t-test with pooled variance.
MetricResult independent_ttest(std::span<const double> a, std::span<const double> b);

enum class DependentCorrMethod {
    /// Williams' t as recommended by Steiger (1980), t with n - 3 dof.
    steiger_t,
    /// Steiger's (1980) Z1* on Fisher-transformed correlations, standard normal.
    steiger_z,
};

/// Compares r12 with r13, two correlations sharing variable 1, given r23 over the same
/// n cases. The statistic's sign follows r12 - r13.
MetricResult dependent_corr_test(double r12, double r13, double r23, std::size_t n,
                                 DependentCorrMethod method = DependentCorrMethod::steiger_t);

struct KMeansTrial {
    ClusterAssignment clusters;
    std::optional<double> purity;      // when every document has a gold label
    std::vector<double> objective;     // sum of cosine distances after each assignment step
    std::size_t iterations = 0;
};

struct KMeansOptions {
    std::size_t k = 2;
    std::size_t trials = 10;
    std::size_t max_iterations = 100;
    std::uint64_t seed = 20170419;
};

/// Spherical k-means over L2-normalized tf-idf vectors (idf from `docs` alone), with k
/// distinct seeded documents as initial centroids. Throws a validation error when
/// k is 0 or exceeds the number of documents.
std::vector<KMeansTrial> kmeans_tfidf(const std::vector<Document>& docs, const KMeansOptions& options);

/// Sparse row of a tf-idf matrix.
struct SparseRow {
    std::vector<std::uint32_t> index;
    std::vector<double> value;
};

/// Nearest centroid by cosine for every row (centroids dense and unit length; ties to
/// the lowest cluster). Returns the summed distance. OpenMP-parallel over rows.
double kmeans_assign(const std::vector<SparseRow>& rows, const std::vector<std::vector<double>>& centroids,
                     std::vector<std::size_t>& assignment);

/// Serial reference for kmeans_assign.
double kmeans_assign_serial(const std::vector<SparseRow>& rows, const std::vector<std::vector<double>>& centroids,
                            std::vector<std::size_t>& assignment);

/// metric,value,n,p_value
void write_metrics(std::ostream& out, const std::vector<MetricResult>& metrics);

}  // namespace dataless
