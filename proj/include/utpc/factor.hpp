#pragma once

#include <utpc/group_table.hpp>
#include <utpc/matrix.hpp>

#include <optional>
#include <tuple>
#include <utility>

namespace utpc {

/// Writes a matrix with vanishing superdiagonal as a single commutator
/// a = [b, c]. The witness b has every superdiagonal entry equal to 1 and c
/// is obtained by solving the linear relation b c = a c b along successive
/// diagonals. The result is verified by recomputing the commutator before it
/// is returned.
std::pair<UTElement, UTElement> factor_commutator(const UTElement & a);

/// Writes a matrix whose first two superdiagonals vanish as a double
/// commutator a = [x, [y, z]]. Row-1-supported inputs use the explicit
/// transvection pattern x = t_12(1), y = t_23(1), z = prod t_{3i}; the
/// general case solves [x, c] = a with the superdiagonal witness and then
/// factors c, falling back to a bounded brute-force search if the
/// constructive route fails verification.
std::tuple<UTElement, UTElement, UTElement> factor_double_commutator(const UTElement & a);

/// Brute-force oracles over an enumerated group; used to validate the
/// constructive solvers and the shape characterizations. Workers > 1 splits
/// the scan over threads; the merged result is order-independent.
std::vector<bool> single_commutator_set(const GroupTable & table, int workers = 1);
std::vector<bool> double_commutator_set(const GroupTable & table, int workers = 1);

/// First (b, c) in index order with [b, c] equal to the target, if any.
std::optional<std::pair<int, int>> search_commutator_pair(const GroupTable & table, int target);

}
