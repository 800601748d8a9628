#pragma once

#include <utpc/group_table.hpp>
#include <utpc/matrix.hpp>

#include <json.hpp>

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

namespace utpc {

/// A total map UT(n, F) -> F whose induced central map a -> a t_{1n}(f(a))
/// is a PC-map: f vanishes on the derived subgroup and shifts each center
/// coset bijectively. Both properties are checked when the map is built
/// (exhaustively on enumerable domains, on seeded samples above the bound).
class CentralFunction {
public:
    static CentralFunction from_fn(int n, const Field & f,
        std::function<FieldElem(const UTElement &)> fn);
    /// Values indexed by GroupTable element order.
    static CentralFunction from_table(std::shared_ptr<const GroupTable> table,
        std::vector<uint8_t> values);

    int dim() const { return n_; }
    const Field & field() const { return *field_; }
    FieldElem operator()(const UTElement & a) const { return fn_(a); }

    const std::vector<uint8_t> * table_values() const
    {
        return values_.empty() ? nullptr : &values_;
    }

private:
    int n_ = 0;
    const Field * field_ = nullptr;
    std::shared_ptr<const Field> field_owner_;
    std::function<FieldElem(const UTElement &)> fn_;
    std::vector<uint8_t> values_;
};

/// A commutator-preserving bijection of UT(n, F_q), backed either by a
/// composition of closed-form family steps or by an explicit permutation of
/// an enumerated group. The family steps are kept as provenance; the map is
/// applied by running them innermost first.
class PCMap {
public:
    struct QuasiInnerStep { TriangularInvertible t; };
    struct FieldAutStep { int power; };
    struct GraphAutStep {};
    struct CentralStep { CentralFunction f; };
    struct SubcentralStep { FieldElem alpha, beta; };
    struct PermutableStep { std::array<FieldElem, 4> m; };  // row major 2x2
    struct TableStep {
        std::shared_ptr<const GroupTable> table;
        std::shared_ptr<const std::vector<uint16_t>> images;
    };
    using Step = std::variant<QuasiInnerStep, FieldAutStep, GraphAutStep, CentralStep,
        SubcentralStep, PermutableStep, TableStep>;

    static PCMap identity(int n, const Field & f);
    /// Conjugation a -> t a t^{-1} by an invertible upper triangular t.
    static PCMap quasi_inner(const TriangularInvertible & t);
    /// Entrywise Frobenius power.
    static PCMap field_aut(int n, const Field & f, int power);
    /// a -> w (a^{-1})^T w with w the side-diagonal permutation; an involution.
    static PCMap graph_aut(int n, const Field & f);
    /// a -> a t_{1n}(f(a)).
    static PCMap central(const CentralFunction & f);
    /// a -> t_{2n}(alpha a_{12}) a t_{1,n-1}(beta a_{n-1,n}); needs n >= 4.
    static PCMap standard_subcentral(int n, const Field & f, const FieldElem & alpha, const FieldElem & beta);
    /// The n = 3 family acting by an invertible 2x2 matrix on (a_{12}, a_{23})
    /// and by its determinant on a_{13}.
    static PCMap permutable(const FieldElem & a, const FieldElem & b, const FieldElem & c, const FieldElem & d);
    static PCMap from_table(std::shared_ptr<const GroupTable> table, std::vector<uint16_t> images);

    int dim() const { return n_; }
    const Field & field() const { return *field_; }

    UTElement operator()(const UTElement & a) const;
    int apply_index(const GroupTable & table, int idx) const;

    /// (*this) after inner: a -> (*this)(inner(a)).
    PCMap compose(const PCMap & inner) const;
    PCMap inverted() const;

    /// Outermost first; composition history of family forms.
    const std::vector<Step> & steps() const { return steps_; }

    /// Materialize as a permutation of the given enumerated group.
    std::vector<uint16_t> to_table(const GroupTable & table) const;

    nlohmann::json to_json() const;

private:
    int n_;
    const Field * field_;
    std::shared_ptr<const Field> field_owner_;
    std::vector<Step> steps_;

    PCMap(int n, const Field & f);
};

enum class CheckMode { exhaustive, sampled };

struct PcWitness {
    UTElement x, y;
};

struct PcCheckResult {
    bool ok;
    std::optional<PcWitness> witness;
    explicit operator bool() const { return ok; }
};

/// Checks bijectivity and phi([x,y]) = [phi(x), phi(y)]. Exhaustive mode
/// requires the group order within `bound` and covers every ordered pair;
/// sampled mode draws `samples` seeded random pairs and additionally checks
/// the sampled images for collisions. On failure the offending pair is
/// returned.
PcCheckResult is_pc_map(const PCMap & phi, CheckMode mode = CheckMode::exhaustive,
    std::size_t bound = GroupTable::default_bound, int samples = 1000, uint64_t seed = 0);

/// phi fixes every elementary transvection of its domain.
bool is_almost_identity(const PCMap & phi);

/// phi(a) is congruent to a mod the center (resp. the second center) for all
/// a. Exhaustive within bound, seeded samples above it.
bool is_central_map(const PCMap & phi, std::size_t bound = GroupTable::default_bound,
    int samples = 1000, uint64_t seed = 0);
bool is_subcentral_map(const PCMap & phi, std::size_t bound = GroupTable::default_bound,
    int samples = 1000, uint64_t seed = 0);

/// Same predicates at table level.
bool table_is_central(const GroupTable & table, const std::vector<uint16_t> & images);
bool table_is_subcentral(const GroupTable & table, const std::vector<uint16_t> & images);
bool table_is_pc(const GroupTable & table, const std::vector<uint16_t> & images);
bool table_is_almost_identity(const GroupTable & table, const std::vector<uint16_t> & images);

}
