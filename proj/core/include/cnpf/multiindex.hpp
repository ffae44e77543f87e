#pragma once

#include <array>
#include <cstddef>

#include "cnpf/common.hpp"

namespace cnpf {

/// Exponent tuple for up to three complex variables; unused slots are zero.
struct MultiIndex {
    std::array<int, 3> e{0, 0, 0};
    int total() const { return e[0] + e[1] + e[2]; }
    bool operator==(const MultiIndex&) const = default;
};

/// Dense graded-lexicographic indexing of multi-indices of total degree <= N
/// in d <= 3 variables.  Rank 0 is the constant; within a degree block the
/// order is ascending lexicographic in (e1, e2).  Ranks and tuples convert
/// both ways in O(log N) / O(1) without hashing.
class MultiIndexSet {
public:
    MultiIndexSet(int dim, int max_degree);

    int dim() const { return d_; }
    int max_degree() const { return N_; }
    std::size_t size() const { return size_; }

    /// Number of multi-indices of total degree <= N in d variables.
    static std::size_t count(int dim, int max_degree);

    std::size_t index_of(const MultiIndex& g) const;
    MultiIndex tuple_of(std::size_t rank) const;

    /// Rank of the first multi-index of the given total degree.
    std::size_t degree_offset(int m) const;

private:
    int d_;
    int N_;
    std::size_t size_;
};

}  // namespace cnpf
