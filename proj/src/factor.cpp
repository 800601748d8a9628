#include <utpc/factor.hpp>

#include <functional>
#include <thread>

namespace utpc {

namespace {

UTElement superdiagonal_ones(int n, const Field & f)
{
    UTElement b(n, f);
    for (int i = 1; i < n; ++i)
        b.set_entry_idx(i, i + 1, 1);
    return b;
}

// Solve b c = a c b for c, where b has all superdiagonal entries 1 and a has
// a vanishing superdiagonal. Comparing entries (i, j) of both sides gives
//
//   c_{i+1,j} = a_{ij} + sum_{i<l<j} a_{il} c_{lj} + (a c)_{i,j-1},
//
// which determines each diagonal of c from the previous row of the same
// diagonal and from strictly shorter diagonals (the terms multiplied by the
// vanishing a_{i,i+1} never contribute). Row 1 of c is free and set to 0.
UTElement solve_conjugacy(const UTElement & a, int n, const Field & f)
{
    UTElement c(n, f);
    for (int d = 1; d < n; ++d)
        for (int r = 2; r <= n - d; ++r) {
            int i = r - 1, j = r + d;
            int val = a.entry_idx(i, j);
            for (int l = i + 1; l < j; ++l)
                val = f.add(val, f.mul(a.entry_idx(i, l), c.entry_idx(l, j)));
            // (a c)_{i, j-1}
            int ac = f.add(c.entry_idx(i, j - 1), a.entry_idx(i, j - 1));
            for (int l = i + 1; l < j - 1; ++l)
                ac = f.add(ac, f.mul(a.entry_idx(i, l), c.entry_idx(l, j - 1)));
            c.set_entry_idx(r, j, f.add(val, ac));
        }
    return c;
}

bool row1_supported(const UTElement & a)
{
    for (int i = 2; i < a.dim(); ++i)
        for (int j = i + 1; j <= a.dim(); ++j)
            if (a.entry_idx(i, j) != 0)
                return false;
    return true;
}

}

std::pair<UTElement, UTElement> factor_commutator(const UTElement & a)
{
    require(in_derived(a), "only matrices with vanishing superdiagonal are single commutators");
    int n = a.dim();
    const Field & f = a.field();
    if (a.is_identity())
        return {UTElement::identity(n, f), UTElement::identity(n, f)};

    UTElement b = superdiagonal_ones(n, f);
    UTElement c = solve_conjugacy(a, n, f);
    require(commutator(b, c) == a, "commutator factorization verification failed");
    return {b, c};
}

std::tuple<UTElement, UTElement, UTElement> factor_double_commutator(const UTElement & a)
{
    require(in_second_derived_shape(a),
        "only matrices with vanishing first and second superdiagonals are double commutators");
    int n = a.dim();
    const Field & f = a.field();
    UTElement e = UTElement::identity(n, f);
    if (a.is_identity())
        return {e, e, e};

    if (n >= 4 && row1_supported(a)) {
        UTElement x = UTElement::transvection(n, 1, 2, f.one());
        UTElement y = UTElement::transvection(n, 2, 3, f.one());
        UTElement z(n, f);
        for (int i = 4; i <= n; ++i)
            z.set_entry_idx(3, i, a.entry_idx(1, i));
        if (commutator(x, commutator(y, z)) == a)
            return {x, y, z};
    }

    // General route: [b, c] = a with the superdiagonal witness. The shape of
    // a forces the solved c onto a vanishing superdiagonal, so c factors in
    // turn.
    UTElement x = superdiagonal_ones(n, f);
    UTElement c = solve_conjugacy(a, n, f);
    if (in_derived(c) && commutator(x, c) == a) {
        auto [y, z] = factor_commutator(c);
        if (commutator(x, commutator(y, z)) == a)
            return {x, y, z};
    }

    // Bounded brute force as a last resort.
    long long order = 1;
    for (int i = 0; i < n * (n - 1) / 2 && order <= 1024; ++i)
        order *= f.order();
    require(order <= 1024, "constructive double-commutator factorization failed on a large group");
    auto table = build_group_table(n, f);
    int target = table->index_of(a);
    for (int w = 0; w < table->order(); ++w) {
        if (!table->in_derived_idx(w))
            continue;
        for (int xi = 0; xi < table->order(); ++xi)
            if (table->comm(xi, w) == target) {
                auto [y, z] = factor_commutator(table->element(w));
                UTElement xe = table->element(xi);
                require(commutator(xe, commutator(y, z)) == a,
                    "double-commutator factorization verification failed");
                return {xe, y, z};
            }
    }
    throw Error("no double-commutator factorization found");
}

namespace {

std::vector<bool> scan_rows(const GroupTable & table, int workers,
    const std::function<void(int, std::vector<uint8_t> &)> & row_body)
{
    int order = table.order();
    workers = std::max(1, std::min(workers, order));
    std::vector<std::vector<uint8_t>> partial(workers, std::vector<uint8_t>(order, 0));
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (int i = w; i < order; i += workers)
                row_body(i, partial[w]);
        });
    for (auto & th : pool)
        th.join();
    std::vector<bool> mask(order, false);
    for (const auto & part : partial)
        for (int i = 0; i < order; ++i)
            if (part[i])
                mask[i] = true;
    return mask;
}

}

std::vector<bool> single_commutator_set(const GroupTable & table, int workers)
{
    return scan_rows(table, workers, [&](int i, std::vector<uint8_t> & hit) {
        for (int j = 0; j < table.order(); ++j)
            hit[table.comm(i, j)] = 1;
    });
}

std::vector<bool> double_commutator_set(const GroupTable & table, int workers)
{
    std::vector<bool> singles = single_commutator_set(table, workers);
    return scan_rows(table, workers, [&](int x, std::vector<uint8_t> & hit) {
        for (int w = 0; w < table.order(); ++w)
            if (singles[w])
                hit[table.comm(x, w)] = 1;
    });
}

std::optional<std::pair<int, int>> search_commutator_pair(const GroupTable & table, int target)
{
    for (int b = 0; b < table.order(); ++b)
        for (int c = 0; c < table.order(); ++c)
            if (table.comm(b, c) == target)
                return std::make_pair(b, c);
    return std::nullopt;
}

}
