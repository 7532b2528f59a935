// basis.hpp: occupation-number basis of N sites with local dimension d

#pragma once

#include "qrc/types.hpp"

#include <vector>

namespace qrc {

// Computational basis |n_1 n_2 ... n_N> with site 1 as the most significant
// digit, so a state on site 1 tensored with a state on the rest is a plain
// Kronecker product.
class FockBasis {
public:
    FockBasis() = default;
    FockBasis(int n_sites, int local_dim);

    int n_sites() const { return n_sites_; }
    int local_dim() const { return local_dim_; }
    Index dim() const { return dim_; }

    // Dimension of the factor made of sites 2..N.
    Index rest_dim() const { return dim_ / local_dim_; }

    // Stride of the digit belonging to `site` (0-based).
    Index stride(int site) const { return strides_[static_cast<std::size_t>(site)]; }

    int occupation(Index state, int site) const {
        return static_cast<int>((state / stride(site)) % local_dim_);
    }

    // Total excitation number of a basis state.
    int excitations(Index state) const;

    int max_excitations() const { return n_sites_ * (local_dim_ - 1); }

private:
    int n_sites_ = 0;
    int local_dim_ = 0;
    Index dim_ = 0;
    std::vector<Index> strides_;
};

// Basis states grouped by total excitation number. `order` lists the states
// sector by sector (ascending state index inside a sector); `offset[s]` and
// `size[s]` locate sector s inside `order`; `position[state]` inverts `order`.
struct SectorLayout {
    std::vector<Index> order;
    std::vector<Index> position;
    std::vector<Index> offset;
    std::vector<Index> size;
    std::vector<int> sector_of;

    int n_sectors() const { return static_cast<int>(offset.size()); }

    static SectorLayout by_excitations(const FockBasis& basis);
};

}  // namespace qrc
