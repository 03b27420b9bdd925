#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace dataless {

using ConceptIndex = std::uint32_t;

struct ConceptEntry {
    ConceptIndex concept_index;
    double weight;

    bool operator==(const ConceptEntry&) const = default;
};

/// Sparse non-negative vector over a concept space of fixed dimension.
///
/// Entries are kept sorted by concept index with zeros elided, so equality is
/// structural and dot products are a linear merge.
class ConceptVector {
public:
    ConceptVector() = default;
    explicit ConceptVector(std::size_t dimension) : dimension_(dimension) {}

    /// Builds from arbitrary (index, weight) pairs: sorts, sums duplicates, drops zeros.
    /// Throws a validation error for negative weights or indices outside the dimension.
    static ConceptVector from_entries(std::size_t dimension, std::vector<ConceptEntry> entries);

    std::size_t dimension() const noexcept { return dimension_; }
    std::span<const ConceptEntry> entries() const noexcept { return entries_; }
    std::size_t nnz() const noexcept { return entries_.size(); }
    bool is_zero() const noexcept { return entries_.empty(); }

    double weight(ConceptIndex c) const;
    double squared_norm() const;
    double norm() const;

    /// Adds `weight` times each posting to this vector.
    void accumulate(std::span<const ConceptEntry> postings, double weight = 1.0);
    ConceptVector scaled(double factor) const;

    bool operator==(const ConceptVector&) const = default;

private:
    std::size_t dimension_ = 0;
    std::vector<ConceptEntry> entries_;
};

ConceptVector operator+(const ConceptVector& a, const ConceptVector& b);

/// Throws a validation error on dimension mismatch.
double dot(const ConceptVector& a, const ConceptVector& b);

/// dot / (|a| |b|), clamped to [0, 1]; 0 when either vector is zero.
double cosine(const ConceptVector& a, const ConceptVector& b);

}  // namespace dataless
