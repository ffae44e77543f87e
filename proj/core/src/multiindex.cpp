#include "cnpf/multiindex.hpp"

namespace cnpf {

MultiIndexSet::MultiIndexSet(int dim, int max_degree) : d_(dim), N_(max_degree) {
    if (dim < 1 || dim > 3) throw DimensionMismatch("multi-index dimension must be 1, 2, or 3");
    if (max_degree < 0) throw DimensionMismatch("max_degree must be nonnegative");
    size_ = count(dim, max_degree);
}

std::size_t MultiIndexSet::count(int dim, int max_degree) {
    const std::size_t n = static_cast<std::size_t>(max_degree);
    switch (dim) {
        case 1: return n + 1;
        case 2: return (n + 1) * (n + 2) / 2;
        case 3: return (n + 1) * (n + 2) * (n + 3) / 6;
        default: throw DimensionMismatch("multi-index dimension must be 1, 2, or 3");
    }
}

std::size_t MultiIndexSet::degree_offset(int m) const {
    const std::size_t n = static_cast<std::size_t>(m);
    switch (d_) {
        case 1: return n;
        case 2: return n * (n + 1) / 2;
        default: return n * (n + 1) * (n + 2) / 6;
    }
}

std::size_t MultiIndexSet::index_of(const MultiIndex& g) const {
    const int m = g.total();
    if (g.e[0] < 0 || g.e[1] < 0 || g.e[2] < 0 || m > N_)
        throw DimensionMismatch("multi-index outside enumerated range");
    switch (d_) {
        case 1: return static_cast<std::size_t>(g.e[0]);
        case 2: return degree_offset(m) + static_cast<std::size_t>(g.e[0]);
        default: {
            const std::size_t a = static_cast<std::size_t>(g.e[0]);
            const std::size_t within = a * (2 * static_cast<std::size_t>(m) - a + 3) / 2 +
                                       static_cast<std::size_t>(g.e[1]);
            return degree_offset(m) + within;
        }
    }
}

MultiIndex MultiIndexSet::tuple_of(std::size_t rank) const {
    MultiIndex g;
    if (d_ == 1) {
        g.e[0] = static_cast<int>(rank);
        return g;
    }
    // Locate the degree block; blocks are tiny relative to N for d >= 2.
    int m = 0;
    while (degree_offset(m + 1) <= rank) ++m;
    std::size_t r = rank - degree_offset(m);
    switch (d_) {
        case 1:
            g.e[0] = m;
            break;
        case 2:
            g.e[0] = static_cast<int>(r);
            g.e[1] = m - g.e[0];
            break;
        default: {
            int a = 0;
            while (static_cast<std::size_t>(m - a + 1) <= r) {
                r -= static_cast<std::size_t>(m - a + 1);
                ++a;
            }
            g.e[0] = a;
            g.e[1] = static_cast<int>(r);
            g.e[2] = m - a - g.e[1];
            break;
        }
    }
    return g;
}

}  // namespace cnpf
