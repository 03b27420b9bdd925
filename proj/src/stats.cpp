#include "dataless/stats.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "dataless/error.hpp"
#include "dataless/io_util.hpp"
#include "dataless/special_functions.hpp"

namespace dataless {

namespace {

double mean(std::span<const double> x) {
    double s = 0.0;
    for (const double v : x) s += v;
    return s / static_cast<double>(x.size());
}

void check_finite(std::span<const double> x, const char* what) {
    for (const double v : x)
        if (!std::isfinite(v)) throw_validation(std::string(what) + ": inputs must be finite");
}

}  // namespace

GoldLabels gold_labels(const std::vector<Document>& docs) {
    GoldLabels gold;
    for (const auto& d : docs)
        if (d.gold_label) gold.emplace(d.doc_id, *d.gold_label);
    return gold;
}

MetricResult accuracy(const std::vector<Prediction>& preds, const GoldLabels& gold) {
    if (preds.empty()) throw_validation("accuracy of an empty prediction list");
    std::size_t right = 0;
    for (const auto& p : preds) {
        const auto it = gold.find(p.doc_id);
        if (it == gold.end()) throw_validation("no gold label for document '" + p.doc_id + "'");
        if (it->second == p.label_id) ++right;
    }
    return {"accuracy", static_cast<double>(right) / static_cast<double>(preds.size()), preds.size(), std::nullopt, {}};
}

MetricResult purity(const ClusterAssignment& clusters, const GoldLabels& gold) {
    if (clusters.cluster_of.empty()) throw_validation("purity of an empty clustering");
    std::map<std::size_t, std::map<LabelId, std::size_t>> table;
    for (const auto& [doc, cluster] : clusters.cluster_of) {
        const auto it = gold.find(doc);
        if (it == gold.end()) throw_validation("no gold label for document '" + doc + "'");
        if (clusters.k != 0 && cluster >= clusters.k) throw_validation("cluster id outside [0, k)");
        ++table[cluster][it->second];
    }
    std::size_t credited = 0;
    for (const auto& [cluster, counts] : table) {
        std::size_t best = 0;
        for (const auto& [label, count] : counts) best = std::max(best, count);
        credited += best;
    }
    const std::size_t n = clusters.cluster_of.size();
    return {"purity", static_cast<double>(credited) / static_cast<double>(n), n, std::nullopt, {}};
}

ClusterAssignment clusters_from_predictions(const std::vector<Prediction>& preds) {
    // Label ids are remapped densely so arbitrary ids satisfy the [0, k) invariant.
    std::map<LabelId, std::size_t> dense;
    for (const auto& p : preds) dense.emplace(p.label_id, 0);
    std::size_t next = 0;
    for (auto& [label, id] : dense) id = next++;
    ClusterAssignment out;
    out.k = dense.size();
    for (const auto& p : preds) out.cluster_of[p.doc_id] = dense.at(p.label_id);
    return out;
}

MetricResult pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw_validation("pearson: inputs differ in length");
    if (x.size() < 3) throw_validation("pearson: need at least 3 points");
    check_finite(x, "pearson");
    check_finite(y, "pearson");
    const double mx = mean(x);
    const double my = mean(y);
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw_validation("pearson: correlation undefined for a constant input");
    const double r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
    const double df = static_cast<double>(x.size()) - 2.0;
    MetricResult out{"pearson", r, x.size(), std::nullopt, {{"df", df}}};
    if (std::abs(r) == 1.0) {
        out.p_value = 0.0;
    } else {
        const double t = r * std::sqrt(df / (1.0 - r * r));
        out.extra["t"] = t;
        out.p_value = special::student_t_two_sided_p(t, df);
    }
    return out;
}

MetricResult paired_ttest(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw_validation("paired t-test: inputs differ in length");
    if (a.size() < 2) throw_validation("paired t-test: need at least 2 pairs");
    check_finite(a, "paired t-test");
    check_finite(b, "paired t-test");
    std::vector<double> d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
    const double md = mean(d);
    double ss = 0.0;
    for (const double v : d) ss += (v - md) * (v - md);
    if (ss == 0.0) throw_validation("paired t-test: differences have zero variance");
    const double n = static_cast<double>(d.size());
    const double sd = std::sqrt(ss / (n - 1.0));
    const double t = md / (sd / std::sqrt(n));
    const double df = n - 1.0;
    return {"paired_ttest", t, d.size(), special::student_t_two_sided_p(t, df), {{"df", df}, {"mean_difference", md}}};
}

MetricResult independent_ttest(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2) throw_validation("t-test: each sample needs at least 2 values");
    check_finite(a, "t-test");
    check_finite(b, "t-test");
    const double ma = mean(a);
    const double mb = mean(b);
    double ssa = 0.0;
    double ssb = 0.0;
    for (const double v : a) ssa += (v - ma) * (v - ma);
    for (const double v : b) ssb += (v - mb) * (v - mb);
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    const double df = na + nb - 2.0;
    const double pooled = (ssa + ssb) / df;
    if (pooled == 0.0) throw_validation("t-test: both samples have zero variance");
    const double t = (ma - mb) / std::sqrt(pooled * (1.0 / na + 1.0 / nb));
    return {"independent_ttest", t, a.size() + b.size(), special::student_t_two_sided_p(t, df), {{"df", df}}};
}

MetricResult dependent_corr_test(double r12, double r13, double r23, std::size_t n, DependentCorrMethod method) {
    for (const double r : {r12, r13, r23}) {
        if (!std::isfinite(r) || std::abs(r) > 1.0) throw_validation("dependent correlation test: |r| must be <= 1");
        if (std::abs(r) == 1.0) throw_validation("dependent correlation test: degenerate correlation |r| == 1");
    }
    if (n < 4) throw_validation("dependent correlation test: need n >= 4");
    const double nn = static_cast<double>(n);
    const double det = 1.0 - r12 * r12 - r13 * r13 - r23 * r23 + 2.0 * r12 * r13 * r23;
    if (!(det > 0.0)) throw_validation("dependent correlation test: correlations do not form a valid matrix");

    if (method == DependentCorrMethod::steiger_t) {
        const double mean_r = 0.5 * (r12 + r13);
        const double cube = std::pow(1.0 - r23, 3.0);
        const double t = (r12 - r13) * std::sqrt((nn - 1.0) * (1.0 + r23) /
                                                 (2.0 * (nn - 1.0) / (nn - 3.0) * det + mean_r * mean_r * cube));
        const double df = nn - 3.0;
        return {"dependent_corr_t", t, n, special::student_t_two_sided_p(t, df), {{"df", df}}};
    }

    const double mean_r = 0.5 * (r12 + r13);
    const double m2 = mean_r * mean_r;
    const double psi = r23 * (1.0 - 2.0 * m2) - 0.5 * m2 * (1.0 - 2.0 * m2 - r23 * r23);
    const double c = psi / ((1.0 - m2) * (1.0 - m2));
    const double z = (std::atanh(r12) - std::atanh(r13)) * std::sqrt(nn - 3.0) / std::sqrt(2.0 - 2.0 * c);
    return {"dependent_corr_z", z, n, special::normal_two_sided_p(z), {}};
}

void write_metrics(std::ostream& out, const std::vector<MetricResult>& metrics) {
    out << "metric,value,n,p_value\n";
    for (const auto& m : metrics)
        out << m.name << ',' << io::format_double(m.value) << ',' << m.n << ','
            << (m.p_value ? io::format_double(*m.p_value) : std::string()) << '\n';
}

}  // namespace dataless
