#pragma once

#include <utpc/matrix.hpp>

#include <cstdint>
#include <memory>
#include <vector>

namespace utpc {

/// A complete indexed enumeration of a finite UT(n, F_q) with exact
/// multiplication, inverse and commutator tables.
///
/// Elements are ordered lexicographically on their row-major entry vector,
/// so index 0 is the identity and the index is the base-q value of the
/// entry digits. Immutable after construction.
class GroupTable {
public:
    static constexpr std::size_t default_bound = 4096;

    static std::shared_ptr<const GroupTable> build(int n, const Field & f,
        std::size_t bound = default_bound);

    int order() const { return order_; }
    int dim() const { return n_; }
    const Field & field() const { return *field_; }

    const UTElement & element(int idx) const { return elements_[idx]; }
    int index_of(const UTElement & a) const;

    int identity_index() const { return 0; }
    int mul(int a, int b) const { return mul_[size_t(a) * order_ + b]; }
    int inv(int a) const { return inv_[a]; }
    int comm(int a, int b) const { return comm_[size_t(a) * order_ + b]; }

    /// Indices of all t_{ij}(alpha), alpha != 0, ordered by (i, j, alpha).
    const std::vector<int> & transvection_indices() const { return transvections_; }
    /// The superdiagonal transvections t_{i,i+1}(alpha) among them.
    const std::vector<int> & generator_indices() const { return generators_; }

    // Center-coset structure. Each coset {a t_{1n}(gamma)} is identified by
    // its base element, the representative with zero (1, n) entry.
    int center_offset(int idx) const { return (idx / center_weight_) % q_; }
    int coset_base(int idx) const { return idx - center_offset(idx) * center_weight_; }
    int member(int base, int gamma) const { return base + gamma * center_weight_; }
    int center_element(int gamma) const { return gamma * center_weight_; }

    bool in_derived_idx(int idx) const { return derived_mask_[idx]; }

private:
    GroupTable(int n, const Field & f, std::size_t bound);

    int n_, q_, order_;
    const Field * field_;
    std::shared_ptr<const Field> field_owner_;
    int center_weight_;
    std::vector<UTElement> elements_;
    std::vector<uint16_t> mul_, inv_, comm_;
    std::vector<int> transvections_, generators_;
    std::vector<uint8_t> derived_mask_;
};

/// Cached table lookup; builds on first use for the given (n, p, k).
std::shared_ptr<const GroupTable> build_group_table(int n, const Field & f,
    std::size_t bound = GroupTable::default_bound);

}
