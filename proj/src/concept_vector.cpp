#include "dataless/concept_vector.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dataless/error.hpp"

namespace dataless {

namespace {

void check_same_dimension(const ConceptVector& a, const ConceptVector& b) {
    if (a.dimension() != b.dimension())
        throw_validation("concept vector dimension mismatch: " + std::to_string(a.dimension()) + " vs " +
                         std::to_string(b.dimension()));
}

// Merge of two sorted entry lists: out = a + factor * b.
std::vector<ConceptEntry> merge_add(std::span<const ConceptEntry> a, std::span<const ConceptEntry> b, double factor) {
    std::vector<ConceptEntry> out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].concept_index < b[j].concept_index)) {
            out.push_back(a[i++]);
        } else if (i == a.size() || b[j].concept_index < a[i].concept_index) {
            out.push_back({b[j].concept_index, factor * b[j].weight});
            ++j;
        } else {
            out.push_back({a[i].concept_index, a[i].weight + factor * b[j].weight});
            ++i;
            ++j;
        }
        if (out.back().weight == 0.0) out.pop_back();
    }
    return out;
}

}  // namespace

ConceptVector ConceptVector::from_entries(std::size_t dimension, std::vector<ConceptEntry> entries) {
    for (const auto& e : entries) {
        if (e.concept_index >= dimension)
            throw_validation("concept index " + std::to_string(e.concept_index) + " outside dimension " +
                             std::to_string(dimension));
        if (!(e.weight >= 0.0)) throw_validation("concept weights must be non-negative");
    }
    std::stable_sort(entries.begin(), entries.end(),
                     [](const ConceptEntry& a, const ConceptEntry& b) { return a.concept_index < b.concept_index; });
    ConceptVector v(dimension);
    for (const auto& e : entries) {
        if (!v.entries_.empty() && v.entries_.back().concept_index == e.concept_index)
            v.entries_.back().weight += e.weight;
        else
            v.entries_.push_back(e);
    }
    std::erase_if(v.entries_, [](const ConceptEntry& e) { return e.weight == 0.0; });
    return v;
}

double ConceptVector::weight(ConceptIndex c) const {
    const auto it = std::lower_bound(entries_.begin(), entries_.end(), c,
                                     [](const ConceptEntry& e, ConceptIndex k) { return e.concept_index < k; });
    return it != entries_.end() && it->concept_index == c ? it->weight : 0.0;
}

double ConceptVector::squared_norm() const {
    double s = 0.0;
    for (const auto& e : entries_) s += e.weight * e.weight;
    return s;
}

double ConceptVector::norm() const { return std::sqrt(squared_norm()); }

void ConceptVector::accumulate(std::span<const ConceptEntry> postings, double weight) {
    if (postings.empty() || weight == 0.0) return;
    if (postings.back().concept_index >= dimension_)
        throw_validation("posting concept index outside vector dimension");
    entries_ = merge_add(entries_, postings, weight);
}

ConceptVector ConceptVector::scaled(double factor) const {
    ConceptVector out(dimension_);
    if (factor == 0.0) return out;
    out.entries_ = entries_;
    for (auto& e : out.entries_) e.weight *= factor;
    return out;
}

ConceptVector operator+(const ConceptVector& a, const ConceptVector& b) {
    check_same_dimension(a, b);
    ConceptVector out = a;
    out.accumulate(b.entries());
    return out;
}

double dot(const ConceptVector& a, const ConceptVector& b) {
    check_same_dimension(a, b);
    const auto ea = a.entries();
    const auto eb = b.entries();
    double s = 0.0;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < ea.size() && j < eb.size()) {
        if (ea[i].concept_index < eb[j].concept_index) {
            ++i;
        } else if (eb[j].concept_index < ea[i].concept_index) {
            ++j;
        } else {
            s += ea[i++].weight * eb[j++].weight;
        }
    }
    return s;
}

double cosine(const ConceptVector& a, const ConceptVector& b) {
    const double d = dot(a, b);
    const double na = a.squared_norm();
    const double nb = b.squared_norm();
    if (na == 0.0 || nb == 0.0) return 0.0;
    // sqrt(na * nb) keeps cosine(x, x) exactly 1: sqrt(n*n) == n in IEEE arithmetic.
    const double c = d / std::sqrt(na * nb);
    return std::clamp(c, 0.0, 1.0);
}

}  // namespace dataless
