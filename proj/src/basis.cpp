#include "qrc/basis.hpp"

#include <cstdlib>
#include <limits>
#include <string>

namespace qrc {

std::uint64_t memory_budget_bytes() {
    std::uint64_t mb = 1024;
    if (const char* env = std::getenv("QRC_MEMORY_BUDGET_MB")) {
        char* end = nullptr;
        const unsigned long long parsed = std::strtoull(env, &end, 10);
        if (end != env && parsed > 0) mb = parsed;
    }
    return mb * 1024ull * 1024ull;
}

void require_dense_budget(Index dim, const std::string& what) {
    const long double bytes = static_cast<long double>(dim) * static_cast<long double>(dim) *
                              static_cast<long double>(sizeof(cplx));
    if (bytes > static_cast<long double>(memory_budget_bytes())) {
        throw BudgetError(what + ": dense " + std::to_string(dim) + "x" + std::to_string(dim) +
                          " complex matrix exceeds the memory budget (set QRC_MEMORY_BUDGET_MB)");
    }
}

FockBasis::FockBasis(int n_sites, int local_dim) : n_sites_(n_sites), local_dim_(local_dim) {
    if (n_sites < 1) throw std::invalid_argument("FockBasis: need at least one site");
    if (local_dim < 2) throw std::invalid_argument("FockBasis: local dimension must be >= 2");
    strides_.assign(static_cast<std::size_t>(n_sites), 1);
    Index d = 1;
    for (int s = n_sites - 1; s >= 0; --s) {
        strides_[static_cast<std::size_t>(s)] = d;
        if (d > std::numeric_limits<Index>::max() / local_dim) {
            throw BudgetError("FockBasis: Hilbert space dimension overflows");
        }
        d *= local_dim;
    }
    dim_ = d;
}

int FockBasis::excitations(Index state) const {
    int total = 0;
    for (int s = 0; s < n_sites_; ++s) total += occupation(state, s);
    return total;
}

SectorLayout SectorLayout::by_excitations(const FockBasis& basis) {
    SectorLayout layout;
    const int n_sectors = basis.max_excitations() + 1;
    const Index dim = basis.dim();
    layout.sector_of.resize(static_cast<std::size_t>(dim));
    layout.size.assign(static_cast<std::size_t>(n_sectors), 0);
    for (Index i = 0; i < dim; ++i) {
        const int s = basis.excitations(i);
        layout.sector_of[static_cast<std::size_t>(i)] = s;
        ++layout.size[static_cast<std::size_t>(s)];
    }
    layout.offset.assign(static_cast<std::size_t>(n_sectors), 0);
    for (int s = 1; s < n_sectors; ++s) {
        layout.offset[static_cast<std::size_t>(s)] =
            layout.offset[static_cast<std::size_t>(s - 1)] + layout.size[static_cast<std::size_t>(s - 1)];
    }
    layout.order.resize(static_cast<std::size_t>(dim));
    layout.position.resize(static_cast<std::size_t>(dim));
    std::vector<Index> fill = layout.offset;
    for (Index i = 0; i < dim; ++i) {
        const auto s = static_cast<std::size_t>(layout.sector_of[static_cast<std::size_t>(i)]);
        const Index pos = fill[s]++;
        layout.order[static_cast<std::size_t>(pos)] = i;
        layout.position[static_cast<std::size_t>(i)] = pos;
    }
    return layout;
}

}  // namespace qrc
