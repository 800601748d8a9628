#pragma once

#include <utpc/pcmap.hpp>

#include <boost/multiprecision/cpp_int.hpp>

#include <functional>

namespace utpc {

using BigCount = boost::multiprecision::cpp_int;

/// One leaf of a factored set of bijections: every element either has a
/// fixed image or a set of allowed images that all lie in one center coset.
/// The solution set of a leaf is the set of all bijections that respect the
/// per-element allowed sets; its size is a product of per-coset permanents.
struct MapSetLeaf {
    std::vector<int32_t> fixed;        // image index, or -1 when free
    std::vector<int32_t> image_coset;  // coset base of the image, per element
    std::vector<uint16_t> mask;        // allowed center offsets within the image coset

    bool allows(const GroupTable & t, int x, int image) const;
    BigCount count(const GroupTable & t) const;
    bool contains(const GroupTable & t, const std::vector<uint16_t> & images) const;
    /// Pointwise containment of allowed sets; implies solution-set inclusion.
    bool subset_of(const GroupTable & t, const MapSetLeaf & other) const;
    /// Some element has disjoint allowed sets; implies disjoint solution sets.
    bool disjoint_from(const GroupTable & t, const MapSetLeaf & other) const;
    uint64_t signature(const GroupTable & t) const;
};

/// An exact, compressed representation of a set of bijections as a disjoint
/// union of leaves. The complete PC-map sets of even tiny groups are far too
/// large to list (their central freedom multiplies over center cosets), so
/// equality and membership checks are performed on this structure, and
/// explicit tables are expanded only when the total count is small.
class FactoredMapSet {
public:
    std::shared_ptr<const GroupTable> table;
    std::vector<MapSetLeaf> leaves;

    BigCount total_count() const;
    bool contains(const std::vector<uint16_t> & images) const;
    bool leaves_pairwise_disjoint() const;
    /// Every leaf of *this lies pointwise inside some leaf of other.
    bool subset_of(const FactoredMapSet & other) const;
    /// Exact set equality: both sides have pairwise disjoint leaves, *this is
    /// a leafwise subset of other, and the total counts agree.
    bool set_equal(const FactoredMapSet & other) const;

    /// Enumerate explicit permutation tables; throws if the count exceeds
    /// the limit. Deterministic order.
    void for_each_table(std::size_t limit,
        const std::function<void(const std::vector<uint16_t> &)> & fn) const;
    std::vector<std::vector<uint16_t>> expand(std::size_t limit) const;
};

enum class EnumConstraint { none, almost_identity };

struct EnumOptions {
    EnumConstraint constraint = EnumConstraint::none;
    unsigned long long node_budget = 100'000'000ULL;
    /// Pairs with both sides undetermined are filtered only while the
    /// product of their domain sizes stays within this bound.
    std::size_t pair_combo_bound = 4096;
    bool progress = false;
};

/// Exhaustively enumerates the bijections of the enumerated group that
/// preserve all commutators (optionally constrained to fix every
/// transvection), as a factored set. Backtracking assigns generator images
/// first and propagates forced values through the commutator tables; a
/// branch is closed into a leaf once every remaining freedom is confined to
/// center cosets and provably unconstrained. Throws BudgetExceeded rather
/// than returning a truncated result.
FactoredMapSet enumerate_pc_maps(std::shared_ptr<const GroupTable> table, EnumOptions opts = {});

/// Filters all order! bijections of a very small group (order <= 8) by the
/// commutator equation. The completeness oracle for the search.
std::vector<std::vector<uint16_t>> naive_pc_filter(const GroupTable & table);

/// The set of all compositions of standard family maps, as a factored set:
/// permutable - field - central for n = 3, and graph - standard subcentral -
/// quasi-inner - field - central for n >= 4. Quasi-inner conjugators are
/// enumerated modulo the centralizer (diagonal modulo scalars, unipotent
/// modulo the center); leaves are deduplicated. Throws if the swept
/// parameter space exceeds the budget.
FactoredMapSet generate_standard_set(std::shared_ptr<const GroupTable> table,
    std::size_t parameter_budget = 1u << 22);

/// The factored set of central maps whose function vanishes on the derived
/// subgroup (and on all transvections when fix_transvections is set).
/// Built directly from the element predicates, independent of the search.
FactoredMapSet central_map_structure(std::shared_ptr<const GroupTable> table, bool fix_transvections);

/// Independent count of the same set by enumerating all q^q per-coset shift
/// functions and multiplying the per-coset tallies.
BigCount count_central_maps_by_tables(const GroupTable & table, bool fix_transvections);

/// The leaf representing {psi . phi . psi^{-1} : phi in leaf} for a fixed
/// bijection psi; pointwise transform of the allowed sets, exact because the
/// correspondence phi -> psi phi psi^{-1} is a bijection of solution sets.
MapSetLeaf conjugate_leaf(const GroupTable & t, const MapSetLeaf & leaf,
    const std::vector<uint16_t> & psi, const std::vector<uint16_t> & psi_inv);

}
