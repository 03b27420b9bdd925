#include "dataless/ranksvm.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <set>

#include "dataless/error.hpp"
#include "dataless/io_util.hpp"

namespace dataless {

namespace {

constexpr const char* kModelHeader = "dataless-ranksvm";
constexpr int kModelVersion = 1;

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// Fisher-Yates with an explicit draw so the order does not depend on the standard
// library's shuffle implementation.
void shuffle(std::vector<std::size_t>& v, std::mt19937_64& rng) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng() % i]);
}

}  // namespace

AccuracyMatrix read_accuracy_matrix(std::istream& in, const std::string& source) {
    AccuracyMatrix matrix;
    std::set<std::pair<LanguageCode, LanguageCode>> seen;
    std::string line;
    std::vector<std::string> fields;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        io::chomp(line);
        if (line.empty()) continue;
        if (!io::split_csv(line, fields) || fields.size() != 3) throw_parse(source, line_no, "expected swl,lwl,accuracy");
        double acc = 0.0;
        if (!io::parse_double(fields[2], acc)) {
            if (line_no == 1) continue;  // header
            throw_parse(source, line_no, "accuracy '" + fields[2] + "' is not a number");
        }
        LanguageCode swl(fields[0]);
        LanguageCode lwl(fields[1]);
        if (!seen.emplace(swl, lwl).second)
            throw_validation(source + ": duplicate accuracy for " + swl.str() + "," + lwl.str());
        matrix[swl].emplace_back(lwl, acc);
    }
    for (auto& [swl, row] : matrix) std::sort(row.begin(), row.end());
    return matrix;
}

std::vector<PreferencePair> preference_pairs(const LanguageCode& swl,
                                             const std::vector<std::pair<LanguageCode, double>>& accuracies,
                                             const TypologyTable& typology, std::size_t group) {
    std::vector<std::vector<double>> features;
    features.reserve(accuracies.size());
    for (const auto& [lwl, acc] : accuracies) features.push_back(pair_features(typology, swl, lwl).x);

    std::vector<PreferencePair> pairs;
    for (std::size_t j = 0; j < accuracies.size(); ++j) {
        for (std::size_t k = j + 1; k < accuracies.size(); ++k) {
            const double aj = accuracies[j].second;
            const double ak = accuracies[k].second;
            if (aj == ak) continue;
            const auto& hi = aj > ak ? features[j] : features[k];
            const auto& lo = aj > ak ? features[k] : features[j];
            PreferencePair p{group, std::vector<double>(hi.size())};
            for (std::size_t f = 0; f < hi.size(); ++f) p.diff[f] = hi[f] - lo[f];
            pairs.push_back(std::move(p));
        }
    }
    return pairs;
}

double ranksvm_objective(const std::vector<double>& w, const std::vector<PreferencePair>& pairs, double C) {
    double loss = 0.0;
    for (const auto& p : pairs) loss += hinge_loss(dot(w, p.diff));
    return 0.5 * dot(w, w) + C * loss;
}

double pairwise_accuracy(const std::vector<double>& w, const std::vector<PreferencePair>& pairs) {
    if (pairs.empty()) return 0.0;
    std::size_t right = 0;
    for (const auto& p : pairs)
        if (dot(w, p.diff) > 0.0) ++right;
    return static_cast<double>(right) / static_cast<double>(pairs.size());
}

RankSvmModel train_ranksvm_pairs(const std::vector<PreferencePair>& pairs, std::size_t n_features, double C,
                                 const RankSvmOptions& options, TrainTrace* trace) {
    if (!(C > 0.0) || !std::isfinite(C)) throw_validation("RankSVM penalty C must be positive");
    if (pairs.empty()) throw_validation("no usable preference pairs to train on");
    for (const auto& p : pairs)
        if (p.diff.size() != n_features) throw_validation("preference pair has the wrong feature count");

    const std::size_t n = pairs.size();
    std::vector<double> q_diag(n);
    for (std::size_t i = 0; i < n; ++i) q_diag[i] = dot(pairs[i].diff, pairs[i].diff);

    // Dual of the hinge-loss problem: min 1/2 a'Qa - sum(a), 0 <= a <= C, w = sum a_i d_i.
    // A pair with d = 0 has constant loss 1; its optimal multiplier is C.
    std::vector<double> alpha(n, 0.0);
    std::vector<double> w(n_features, 0.0);
    double alpha_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (q_diag[i] == 0.0) {
            alpha[i] = C;
            alpha_sum += C;
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(options.seed);

    std::vector<double> best_w = w;
    double best_primal = ranksvm_objective(w, pairs, C);
    TrainTrace local;
    for (std::size_t epoch = 0; epoch < options.max_epochs; ++epoch) {
        shuffle(order, rng);
        for (const std::size_t i : order) {
            if (q_diag[i] == 0.0) continue;
            const auto& d = pairs[i].diff;
            const double grad = dot(w, d) - 1.0;
            const double updated = std::clamp(alpha[i] - grad / q_diag[i], 0.0, C);
            const double delta = updated - alpha[i];
            if (delta == 0.0) continue;
            alpha[i] = updated;
            alpha_sum += delta;
            for (std::size_t f = 0; f < n_features; ++f) w[f] += delta * d[f];
        }

        const double primal = ranksvm_objective(w, pairs, C);
        const double dual = 0.5 * dot(w, w) - alpha_sum;
        const bool accepted = primal <= best_primal;
        if (accepted) {
            best_primal = primal;
            best_w = w;
        }
        local.primal.push_back(primal);
        local.dual.push_back(dual);
        local.accepted.push_back(accepted);
        local.epochs = epoch + 1;

        // Weak duality: best_primal >= optimum >= -dual.
        const double gap = best_primal + dual;
        if (gap <= options.tolerance * std::max(std::abs(best_primal), 1e-12)) {
            local.converged = true;
            break;
        }
    }
    if (trace) *trace = std::move(local);
    return RankSvmModel{std::move(best_w), C, {}};
}

namespace {

std::vector<PreferencePair> matrix_pairs(const AccuracyMatrix& matrix, const TypologyTable& typology) {
    std::vector<PreferencePair> pairs;
    std::size_t group = 0;
    for (const auto& [swl, row] : matrix) {
        auto p = preference_pairs(swl, row, typology, group++);
        pairs.insert(pairs.end(), std::make_move_iterator(p.begin()), std::make_move_iterator(p.end()));
    }
    return pairs;
}

}  // namespace

RankSvmModel train_ranksvm(const AccuracyMatrix& training, const TypologyTable& typology, double C,
                           const RankSvmOptions& options, TrainTrace* trace) {
    const auto pairs = matrix_pairs(training, typology);
    if (pairs.empty()) throw_validation("no usable preference pairs: every source has equal bridge accuracies");
    auto model = train_ranksvm_pairs(pairs, typology.feature_count(), C, options, trace);
    model.feature_ids = typology.feature_ids();
    return model;
}

double ranksvm_score(const RankSvmModel& model, const TypologyTable& typology, const LanguageCode& src,
                     const LanguageCode& tgt) {
    if (model.w.size() != typology.feature_count())
        throw_validation("model has " + std::to_string(model.w.size()) + " weights but the typology table has " +
                         std::to_string(typology.feature_count()) + " features");
    return dot(model.w, pair_features(typology, src, tgt).x);
}

std::vector<std::pair<std::string, double>> top_weights(const RankSvmModel& model, std::size_t k) {
    std::vector<std::size_t> idx(model.w.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return std::abs(model.w[a]) > std::abs(model.w[b]); });
    std::vector<std::pair<std::string, double>> out;
    for (std::size_t i = 0; i < std::min(k, idx.size()); ++i) {
        const auto f = idx[i];
        out.emplace_back(f < model.feature_ids.size() ? model.feature_ids[f] : "f" + std::to_string(f), model.w[f]);
    }
    return out;
}

void write_model(std::ostream& out, const RankSvmModel& model) {
    out << kModelHeader << ' ' << kModelVersion << '\n';
    out << "C\t" << io::format_double(model.C) << '\n';
    out << "F\t" << model.w.size() << '\n';
    for (std::size_t f = 0; f < model.w.size(); ++f) {
        const std::string name = f < model.feature_ids.size() ? model.feature_ids[f] : "f" + std::to_string(f);
        out << name << '\t' << io::format_double(model.w[f]) << '\n';
    }
}

RankSvmModel read_model(std::istream& in, const std::string& source) {
    std::string line;
    std::size_t line_no = 0;
    auto next = [&]() -> std::string& {
        if (!std::getline(in, line)) throw_parse(source, line_no + 1, "unexpected end of model file");
        ++line_no;
        io::chomp(line);
        return line;
    };
    if (next() != std::string(kModelHeader) + " " + std::to_string(kModelVersion))
        throw_parse(source, line_no, "not a version " + std::to_string(kModelVersion) + " RankSVM model");

    RankSvmModel model;
    auto cols = io::split(next(), '\t');
    if (cols.size() != 2 || cols[0] != "C" || !io::parse_double(cols[1], model.C) || !(model.C > 0.0))
        throw_parse(source, line_no, "expected C<TAB>value");
    cols = io::split(next(), '\t');
    long long f_count = 0;
    if (cols.size() != 2 || cols[0] != "F" || !io::parse_int(cols[1], f_count) || f_count < 0)
        throw_parse(source, line_no, "expected F<TAB>count");
    for (long long f = 0; f < f_count; ++f) {
        const auto& row = next();
        const auto tab = row.rfind('\t');
        double w = 0.0;
        if (tab == std::string::npos || !io::parse_double(std::string_view(row).substr(tab + 1), w))
            throw_parse(source, line_no, "expected feature<TAB>weight");
        model.feature_ids.push_back(row.substr(0, tab));
        model.w.push_back(w);
    }
    return model;
}

std::vector<double> default_c_grid() { return {1e-2, 1e-1, 1e0, 1e1, 1e2, 1e3, 1e4}; }

ModelSelection select_c(const std::vector<PreferencePair>& pairs, std::size_t n_features,
                        const std::vector<double>& c_grid, const RankSvmOptions& options) {
    if (c_grid.empty()) throw_validation("empty C grid");
    if (pairs.empty()) throw_validation("no usable preference pairs for model selection");
    std::vector<PreferencePair> fit;
    std::vector<PreferencePair> held;
    for (std::size_t i = 0; i < pairs.size(); ++i) (i % 5 == 4 ? held : fit).push_back(pairs[i]);
    if (held.empty() || fit.empty()) {
        // Too few pairs to split: validate on the training pairs themselves.
        fit = pairs;
        held = pairs;
    }
    ModelSelection sel;
    double best = -1.0;
    for (const double C : c_grid) {
        const auto model = train_ranksvm_pairs(fit, n_features, C, options);
        const double acc = pairwise_accuracy(model.w, held);
        sel.validation_accuracy.push_back(acc);
        if (acc > best) {
            best = acc;
            sel.C = C;
        }
    }
    return sel;
}

RankSvmModel fit_ranksvm(const AccuracyMatrix& matrix, const TypologyTable& typology,
                         const std::vector<double>& c_grid, const RankSvmOptions& options, ModelSelection* selection) {
    const auto pairs = matrix_pairs(matrix, typology);
    if (pairs.empty()) throw_validation("no usable preference pairs: every source has equal bridge accuracies");
    const auto sel = select_c(pairs, typology.feature_count(), c_grid, options);
    auto model = train_ranksvm_pairs(pairs, typology.feature_count(), sel.C, options);
    model.feature_ids = typology.feature_ids();
    if (selection) *selection = sel;
    return model;
}

CrossValidationReport cross_validate(const AccuracyMatrix& matrix, const TypologyTable& typology,
                                     const CrossValidationOptions& options) {
    if (options.folds < 2) throw_validation("cross validation needs at least 2 folds");
    if (matrix.size() < options.folds)
        throw_validation("cross validation needs at least " + std::to_string(options.folds) + " source languages, got " +
                         std::to_string(matrix.size()));

    std::vector<LanguageCode> swls;  // AccuracyMatrix is ordered by code
    for (const auto& [swl, row] : matrix) swls.push_back(swl);

    CrossValidationReport report;
    report.c_grid = options.c_grid;
    report.folds = options.folds;
    report.per_fold.resize(options.folds);
    std::vector<std::exception_ptr> errors(options.folds);

    const auto n_folds = static_cast<std::int64_t>(options.folds);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t f = 0; f < n_folds; ++f) {
        try {
            AccuracyMatrix training;
            FoldReport& fold = report.per_fold[f];
            fold.fold = static_cast<std::size_t>(f);
            for (std::size_t s = 0; s < swls.size(); ++s) {
                if (s % options.folds == static_cast<std::size_t>(f)) fold.held_out.push_back(swls[s]);
                else training.emplace(swls[s], matrix.at(swls[s]));
            }
            fold.model = fit_ranksvm(training, typology, options.c_grid, options.svm, &fold.selection);
        } catch (...) {
            errors[f] = std::current_exception();
        }
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    for (const auto& fold : report.per_fold) {
        for (const auto& swl : fold.held_out) {
            const auto& row = matrix.at(swl);
            SourceReport r;
            r.swl = swl;
            r.fold = fold.fold;
            r.C = fold.model.C;
            bool first = true;
            for (const auto& [lwl, acc] : row) {
                const double score = ranksvm_score(fold.model, typology, swl, lwl);
                // Rows are sorted by code, so strict comparisons keep the lowest code on ties.
                if (first || score > r.chosen_score) {
                    r.chosen = lwl;
                    r.chosen_score = score;
                    r.chosen_accuracy = acc;
                }
                if (first || acc > r.best_accuracy) {
                    r.best = lwl;
                    r.best_accuracy = acc;
                }
                first = false;
            }
            report.per_source.push_back(std::move(r));
        }
    }
    std::sort(report.per_source.begin(), report.per_source.end(),
              [](const SourceReport& a, const SourceReport& b) { return a.swl < b.swl; });
    return report;
}

void write_cv_report(std::ostream& out, const CrossValidationReport& report) {
    out << "#c_grid";
    for (const double c : report.c_grid) out << ',' << io::format_double(c);
    out << '\n';
    for (const auto& fold : report.per_fold) {
        out << "#fold=" << fold.fold << ",C=" << io::format_double(fold.selection.C) << ",validation_accuracy";
        for (const double a : fold.selection.validation_accuracy) out << ',' << io::format_double(a);
        out << '\n';
    }
    out << "swl,fold,C,chosen_lwl,chosen_score,chosen_accuracy,best_lwl,best_accuracy\n";
    for (const auto& r : report.per_source)
        out << r.swl.str() << ',' << r.fold << ',' << io::format_double(r.C) << ',' << r.chosen.str() << ','
            << io::format_double(r.chosen_score) << ',' << io::format_double(r.chosen_accuracy) << ',' << r.best.str()
            << ',' << io::format_double(r.best_accuracy) << '\n';
}

}  // namespace dataless
