#pragma once

// Linear pairwise ranker for bridge languages:
//
//   minimize  1/2 |w|^2 + C * sum_p max(0, 1 - w . (x_ij - x_ik))
//
// over oriented pairs p = (i, j, k) where bridge j gave source language i a higher
// measured accuracy than bridge k. Solved by dual coordinate descent, which reaches
// the exact optimum of this convex problem; training stops once the relative
// duality gap drops below the tolerance.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dataless/corpus_store.hpp"
#include "dataless/ranking.hpp"

namespace dataless {

struct RankSvmModel {
    std::vector<double> w;
    double C = 1.0;
    std::vector<std::string> feature_ids;

    bool operator==(const RankSvmModel&) const = default;
};

/// Measured classification accuracy per (source, bridge) language pair.
using AccuracyMatrix = std::map<LanguageCode, std::vector<std::pair<LanguageCode, double>>>;

/// swl,lwl,accuracy (optional header). Bridges are sorted by code per source.
AccuracyMatrix read_accuracy_matrix(std::istream& in, const std::string& source = "<stream>");

/// One oriented training pair: diff = x(preferred) - x(other).
struct PreferencePair {
    std::size_t group = 0;  // index of the source language the pair came from
    std::vector<double> diff;
};

/// All pairs of distinct-accuracy bridges for one source, preferred first.
std::vector<PreferencePair> preference_pairs(const LanguageCode& swl,
                                             const std::vector<std::pair<LanguageCode, double>>& accuracies,
                                             const TypologyTable& typology, std::size_t group = 0);

inline double hinge_loss(double t) { return t < 1.0 ? 1.0 - t : 0.0; }

double ranksvm_objective(const std::vector<double>& w, const std::vector<PreferencePair>& pairs, double C);

/// Fraction of pairs with w . diff > 0.
double pairwise_accuracy(const std::vector<double>& w, const std::vector<PreferencePair>& pairs);

struct RankSvmOptions {
    std::size_t max_epochs = 10000;
    double tolerance = 1e-6;  // relative duality gap
    std::uint64_t seed = 20170419;
};

struct TrainTrace {
    std::vector<double> primal;     // primal objective after each epoch
    std::vector<double> dual;       // dual objective (minimization form) after each epoch
    std::vector<bool> accepted;     // epoch improved on the best primal so far
    std::size_t epochs = 0;
    bool converged = false;
};

/// Trains on explicit pairs; w has `n_features` entries. Throws a validation error
/// when C <= 0 or `pairs` is empty.
RankSvmModel train_ranksvm_pairs(const std::vector<PreferencePair>& pairs, std::size_t n_features, double C,
                                 const RankSvmOptions& options = {}, TrainTrace* trace = nullptr);

/// Trains on every source language in `training`. Throws a validation error when no
/// usable (distinct-accuracy) pair exists.
RankSvmModel train_ranksvm(const AccuracyMatrix& training, const TypologyTable& typology, double C,
                           const RankSvmOptions& options = {}, TrainTrace* trace = nullptr);

double ranksvm_score(const RankSvmModel& model, const TypologyTable& typology, const LanguageCode& src,
                     const LanguageCode& tgt);

/// Largest-|w| features, descending.
std::vector<std::pair<std::string, double>> top_weights(const RankSvmModel& model, std::size_t k);

void write_model(std::ostream& out, const RankSvmModel& model);
RankSvmModel read_model(std::istream& in, const std::string& source = "<stream>");

/// {1e-2, 1e-1, ..., 1e4}
std::vector<double> default_c_grid();

struct ModelSelection {
    double C = 1.0;
    std::vector<double> validation_accuracy;  // per grid entry
};

/// Holds out every fifth pair, trains on the rest for each C and keeps the C with the
/// best held-out pairwise accuracy (earliest grid entry on ties).
ModelSelection select_c(const std::vector<PreferencePair>& pairs, std::size_t n_features,
                        const std::vector<double>& c_grid, const RankSvmOptions& options = {});

struct CrossValidationOptions {
    std::size_t folds = 5;
    std::vector<double> c_grid = default_c_grid();
    RankSvmOptions svm;
};

struct FoldReport {
    std::size_t fold = 0;
    std::vector<LanguageCode> held_out;
    ModelSelection selection;
    RankSvmModel model;
};

struct SourceReport {
    LanguageCode swl;
    std::size_t fold = 0;
    double C = 0.0;
    LanguageCode chosen;
    double chosen_score = 0.0;
    double chosen_accuracy = 0.0;
    LanguageCode best;  // highest measured accuracy
    double best_accuracy = 0.0;
};

struct CrossValidationReport {
    std::vector<double> c_grid;
    std::size_t folds = 0;
    std::vector<FoldReport> per_fold;
    std::vector<SourceReport> per_source;  // sorted by source code
};

/// Fold of a source language = its position in code order modulo `folds`. Each fold's
/// model is selected and trained on the other folds and ranks the held-out sources'
/// bridges. Folds train in parallel; results do not depend on the thread count.
CrossValidationReport cross_validate(const AccuracyMatrix& matrix, const TypologyTable& typology,
                                     const CrossValidationOptions& options = {});

void write_cv_report(std::ostream& out, const CrossValidationReport& report);

/// Model selection and training on every source language.
RankSvmModel fit_ranksvm(const AccuracyMatrix& matrix, const TypologyTable& typology,
                         const std::vector<double>& c_grid, const RankSvmOptions& options = {},
                         ModelSelection* selection = nullptr);

}  // namespace dataless
