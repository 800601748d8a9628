#include <utpc/enumerate.hpp>

#include <algorithm>
#include <iostream>
#include <map>
#include <numeric>

namespace utpc {

// ---------------------------------------------------------------------------
// MapSetLeaf

bool MapSetLeaf::allows(const GroupTable & t, int x, int image) const
{
    if (fixed[x] >= 0)
        return image == fixed[x];
    if (t.coset_base(image) != image_coset[x])
        return false;
    return (mask[x] >> t.center_offset(image)) & 1;
}

namespace {

uint64_t permanent(const std::vector<uint16_t> & rows, int q)
{
    // dp[S] = ways to match the first popcount(S) rows onto the column set S
    std::vector<uint64_t> dp(size_t(1) << q, 0);
    dp[0] = 1;
    for (uint32_t s = 1; s < (1u << q); ++s) {
        int r = __builtin_popcount(s) - 1;
        uint64_t acc = 0;
        uint32_t cols = s & rows[r];
        while (cols) {
            uint32_t c = cols & -cols;
            acc += dp[s ^ c];
            cols ^= c;
        }
        dp[s] = acc;
    }
    return dp[(size_t(1) << q) - 1];
}

}

BigCount MapSetLeaf::count(const GroupTable & t) const
{
    int q = t.field().order();
    std::map<int, std::vector<uint16_t>> rows_by_image_coset;
    for (int x = 0; x < t.order(); ++x) {
        uint16_t row;
        int img_base;
        if (fixed[x] >= 0) {
            img_base = t.coset_base(fixed[x]);
            row = uint16_t(1u << t.center_offset(fixed[x]));
        }
        else {
            img_base = image_coset[x];
            row = mask[x];
        }
        if (row == 0)
            return 0;
        rows_by_image_coset[img_base].push_back(row);
    }
    BigCount total = 1;
    for (auto & [base, rows] : rows_by_image_coset) {
        if (int(rows.size()) != q)
            return 0;  // a bijection must hit every value of every coset
        total *= permanent(rows, q);
        if (total == 0)
            return 0;
    }
    return total;
}

bool MapSetLeaf::contains(const GroupTable & t, const std::vector<uint16_t> & images) const
{
    for (int x = 0; x < t.order(); ++x)
        if (!allows(t, x, images[x]))
            return false;
    return true;
}

bool MapSetLeaf::subset_of(const GroupTable & t, const MapSetLeaf & other) const
{
    int q = t.field().order();
    for (int x = 0; x < t.order(); ++x) {
        if (fixed[x] >= 0) {
            if (!other.allows(t, x, fixed[x]))
                return false;
            continue;
        }
        for (int g = 0; g < q; ++g)
            if ((mask[x] >> g) & 1)
                if (!other.allows(t, x, t.member(image_coset[x], g)))
                    return false;
    }
    return true;
}

bool MapSetLeaf::disjoint_from(const GroupTable & t, const MapSetLeaf & other) const
{
    for (int x = 0; x < t.order(); ++x) {
        if (fixed[x] >= 0) {
            if (!other.allows(t, x, fixed[x]))
                return true;
            continue;
        }
        if (other.fixed[x] >= 0) {
            if (!allows(t, x, other.fixed[x]))
                return true;
            continue;
        }
        if (image_coset[x] != other.image_coset[x] || (mask[x] & other.mask[x]) == 0)
            return true;
    }
    return false;
}

uint64_t MapSetLeaf::signature(const GroupTable & t) const
{
    uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](uint64_t v) {
        h ^= v;
        h *= 1099511628211ULL;
    };
    for (int x = 0; x < t.order(); ++x) {
        mix(uint64_t(int64_t(fixed[x])) + 0x9e37);
        mix(uint64_t(image_coset[x]));
        mix(mask[x]);
    }
    return h;
}

// ---------------------------------------------------------------------------
// FactoredMapSet

BigCount FactoredMapSet::total_count() const
{
    BigCount total = 0;
    for (const MapSetLeaf & leaf : leaves)
        total += leaf.count(*table);
    return total;
}

bool FactoredMapSet::contains(const std::vector<uint16_t> & images) const
{
    for (const MapSetLeaf & leaf : leaves)
        if (leaf.contains(*table, images))
            return true;
    return false;
}

bool FactoredMapSet::leaves_pairwise_disjoint() const
{
    for (size_t i = 0; i < leaves.size(); ++i)
        for (size_t j = i + 1; j < leaves.size(); ++j)
            if (!leaves[i].disjoint_from(*table, leaves[j]))
                return false;
    return true;
}

bool FactoredMapSet::subset_of(const FactoredMapSet & other) const
{
    for (const MapSetLeaf & leaf : leaves) {
        bool found = false;
        for (const MapSetLeaf & cand : other.leaves) {
            if (leaf.image_coset != cand.image_coset)
                continue;
            if (leaf.subset_of(*table, cand)) {
                found = true;
                break;
            }
        }
        if (!found)
            return false;
    }
    return true;
}

bool FactoredMapSet::set_equal(const FactoredMapSet & other) const
{
    return leaves_pairwise_disjoint() && other.leaves_pairwise_disjoint()
        && subset_of(other) && total_count() == other.total_count();
}

namespace {

void expand_rec(const GroupTable & t, const MapSetLeaf & leaf, int x,
    std::vector<uint16_t> & images, std::vector<bool> & used,
    const std::function<void(const std::vector<uint16_t> &)> & fn)
{
    if (x == t.order()) {
        fn(images);
        return;
    }
    if (leaf.fixed[x] >= 0) {
        if (used[leaf.fixed[x]])
            return;
        images[x] = uint16_t(leaf.fixed[x]);
        used[leaf.fixed[x]] = true;
        expand_rec(t, leaf, x + 1, images, used, fn);
        used[leaf.fixed[x]] = false;
        return;
    }
    for (int g = 0; g < t.field().order(); ++g) {
        if (!((leaf.mask[x] >> g) & 1))
            continue;
        int v = t.member(leaf.image_coset[x], g);
        if (used[v])
            continue;
        images[x] = uint16_t(v);
        used[v] = true;
        expand_rec(t, leaf, x + 1, images, used, fn);
        used[v] = false;
    }
}

}

void FactoredMapSet::for_each_table(std::size_t limit,
    const std::function<void(const std::vector<uint16_t> &)> & fn) const
{
    require(total_count() <= BigCount(limit),
        "factored set holds " + total_count().str() + " maps, more than the expansion limit");
    std::vector<uint16_t> images(table->order());
    std::vector<bool> used(table->order(), false);
    for (const MapSetLeaf & leaf : leaves)
        expand_rec(*table, leaf, 0, images, used, fn);
}

std::vector<std::vector<uint16_t>> FactoredMapSet::expand(std::size_t limit) const
{
    std::vector<std::vector<uint16_t>> out;
    for_each_table(limit, [&](const std::vector<uint16_t> & t) { out.push_back(t); });
    return out;
}

// ---------------------------------------------------------------------------
// the propagation search

namespace {

struct SearchState {
    std::vector<uint64_t> dom;     // order rows of `words` words each
    std::vector<int32_t> single;   // value, or -1
    std::vector<uint64_t> used;    // values already taken by singletons
};

class PcSearch {
public:
    PcSearch(std::shared_ptr<const GroupTable> table, EnumOptions opts) :
        T(*table), table_ptr(std::move(table)), opts(opts),
        order(T.order()), words((order + 63) / 64), q(T.field().order())
    {
        verify_center_cancellation();
    }

    FactoredMapSet run()
    {
        SearchState s;
        s.dom.assign(size_t(order) * words, ~uint64_t(0));
        // mask off bits past the order in every row
        if (order % 64)
            for (int x = 0; x < order; ++x)
                s.dom[size_t(x) * words + words - 1] = (uint64_t(1) << (order % 64)) - 1;
        s.single.assign(order, -1);
        s.used.assign(words, 0);

        restrict_single(s, T.identity_index(), T.identity_index());
        if (opts.constraint == EnumConstraint::almost_identity)
            for (int t : T.transvection_indices())
                restrict_single(s, t, t);

        FactoredMapSet result;
        result.table = table_ptr;
        dfs(s, result.leaves, 0);
        if (opts.progress)
            std::cerr << "search finished after " << nodes << " nodes, "
                      << result.leaves.size() << " leaves\n";
        return result;
    }

private:
    const GroupTable & T;
    std::shared_ptr<const GroupTable> table_ptr;
    EnumOptions opts;
    int order, words, q;
    unsigned long long nodes = 0;

    uint64_t * row(SearchState & s, int x) { return s.dom.data() + size_t(x) * words; }
    const uint64_t * row(const SearchState & s, int x) const { return s.dom.data() + size_t(x) * words; }

    static bool test_bit(const uint64_t * r, int v) { return (r[v >> 6] >> (v & 63)) & 1; }

    int popcount(const uint64_t * r) const
    {
        int c = 0;
        for (int w = 0; w < words; ++w)
            c += __builtin_popcountll(r[w]);
        return c;
    }

    int first_bit(const uint64_t * r) const
    {
        for (int w = 0; w < words; ++w)
            if (r[w])
                return w * 64 + __builtin_ctzll(r[w]);
        return -1;
    }

    void restrict_single(SearchState & s, int x, int v)
    {
        uint64_t * r = row(s, x);
        std::fill(r, r + words, 0);
        r[v >> 6] = uint64_t(1) << (v & 63);
    }

    // The factored-leaf argument needs commutators to ignore central
    // factors on this table; verified here once, exhaustively.
    void verify_center_cancellation()
    {
        const Field & f = T.field();
        for (int x = 0; x < order; ++x)
            for (int y = 0; y < order; ++y) {
                int c = T.comm(x, y);
                for (int g = 1; g < q; ++g) {
                    int xs = T.member(T.coset_base(x), f.add(T.center_offset(x), g));
                    int ys = T.member(T.coset_base(y), f.add(T.center_offset(y), g));
                    require(T.comm(xs, y) == c && T.comm(x, ys) == c,
                        "central factors fail to cancel in commutators");
                }
            }
    }

    // Re-establish injectivity and register fresh singletons. False on wipeout.
    bool normalize(SearchState & s)
    {
        bool progress = true;
        while (progress) {
            progress = false;
            for (int x = 0; x < order; ++x) {
                if (s.single[x] >= 0)
                    continue;
                uint64_t * r = row(s, x);
                bool changed = false;
                for (int w = 0; w < words; ++w) {
                    uint64_t nv = r[w] & ~s.used[w];
                    if (nv != r[w]) {
                        r[w] = nv;
                        changed = true;
                    }
                }
                int pc = popcount(r);
                if (pc == 0)
                    return false;
                if (pc == 1) {
                    int v = first_bit(r);
                    s.single[x] = v;
                    s.used[v >> 6] |= uint64_t(1) << (v & 63);
                    progress = true;
                }
                else if (changed) {
                    progress = true;
                }
            }
        }
        return true;
    }

    // intersect row(x) with the given set; report change, fail on empty
    enum class Cut { unchanged, shrunk, wiped };

    Cut intersect(SearchState & s, int x, const uint64_t * with)
    {
        if (s.single[x] >= 0)
            return test_bit(with, s.single[x]) ? Cut::unchanged : Cut::wiped;
        uint64_t * r = row(s, x);
        bool changed = false;
        bool any = false;
        for (int w = 0; w < words; ++w) {
            uint64_t nv = r[w] & with[w];
            if (nv != r[w])
                changed = true;
            r[w] = nv;
            any = any || nv;
        }
        if (!any)
            return Cut::wiped;
        return changed ? Cut::shrunk : Cut::unchanged;
    }

    // One pass of filtering through all pairs with a singleton side.
    // Returns false on contradiction; sets changed when any domain shrank.
    bool singleton_pass(SearchState & s, bool & changed)
    {
        std::vector<uint64_t> fwd(words), bwd(words);
        for (int g = 0; g < order; ++g) {
            if (s.single[g] < 0)
                continue;
            int a = s.single[g];
            for (int h = 0; h < order; ++h) {
                // constraint phi([g,h]) = [phi(g), phi(h)]
                int z = T.comm(g, h);
                if (s.single[h] >= 0) {
                    int w = T.comm(a, s.single[h]);
                    if (s.single[z] >= 0) {
                        if (s.single[z] != w)
                            return false;
                    }
                    else {
                        if (!test_bit(row(s, z), w))
                            return false;
                        restrict_single(s, z, w);
                        changed = true;
                    }
                }
                else {
                    // forward image {[a, v] : v in D(h)} and its preimage
                    std::fill(fwd.begin(), fwd.end(), 0);
                    std::fill(bwd.begin(), bwd.end(), 0);
                    const uint64_t * dh = row(s, h);
                    const uint64_t * dz = row(s, z);
                    bool zsingle = s.single[z] >= 0;
                    for (int w = 0; w < words; ++w) {
                        uint64_t bitsw = dh[w];
                        while (bitsw) {
                            int v = w * 64 + __builtin_ctzll(bitsw);
                            bitsw &= bitsw - 1;
                            int img = T.comm(a, v);
                            fwd[img >> 6] |= uint64_t(1) << (img & 63);
                            if (zsingle ? img == s.single[z] : test_bit(dz, img))
                                bwd[v >> 6] |= uint64_t(1) << (v & 63);
                        }
                    }
                    Cut c1 = intersect(s, z, fwd.data());
                    if (c1 == Cut::wiped)
                        return false;
                    Cut c2 = intersect(s, h, bwd.data());
                    if (c2 == Cut::wiped)
                        return false;
                    if (c1 == Cut::shrunk || c2 == Cut::shrunk)
                        changed = true;
                }

                // constraint phi([h,g]) = [phi(h), phi(g)], h side open
                if (s.single[h] < 0) {
                    int z2 = T.comm(h, g);
                    std::fill(fwd.begin(), fwd.end(), 0);
                    std::fill(bwd.begin(), bwd.end(), 0);
                    const uint64_t * dh = row(s, h);
                    const uint64_t * dz = row(s, z2);
                    bool zsingle = s.single[z2] >= 0;
                    for (int w = 0; w < words; ++w) {
                        uint64_t bitsw = dh[w];
                        while (bitsw) {
                            int v = w * 64 + __builtin_ctzll(bitsw);
                            bitsw &= bitsw - 1;
                            int img = T.comm(v, a);
                            fwd[img >> 6] |= uint64_t(1) << (img & 63);
                            if (zsingle ? img == s.single[z2] : test_bit(dz, img))
                                bwd[v >> 6] |= uint64_t(1) << (v & 63);
                        }
                    }
                    Cut c1 = intersect(s, z2, fwd.data());
                    if (c1 == Cut::wiped)
                        return false;
                    Cut c2 = intersect(s, h, bwd.data());
                    if (c2 == Cut::wiped)
                        return false;
                    if (c1 == Cut::shrunk || c2 == Cut::shrunk)
                        changed = true;
                }
            }
        }
        return true;
    }

    // Bounded filtering through pairs with both sides open.
    bool open_pair_pass(SearchState & s, bool & changed)
    {
        std::vector<uint64_t> img(words), keepg(words), keeph(words);
        std::vector<int> dg, dh;
        for (int g = 0; g < order; ++g) {
            if (s.single[g] >= 0)
                continue;
            dg.clear();
            const uint64_t * rg = row(s, g);
            for (int w = 0; w < words; ++w) {
                uint64_t bitsw = rg[w];
                while (bitsw) {
                    dg.push_back(w * 64 + __builtin_ctzll(bitsw));
                    bitsw &= bitsw - 1;
                }
            }
            for (int h = 0; h < order; ++h) {
                if (s.single[h] >= 0 || h == g)
                    continue;
                const uint64_t * rh = row(s, h);
                size_t hsize = popcount(rh);
                if (dg.size() * hsize > opts.pair_combo_bound)
                    continue;
                dh.clear();
                for (int w = 0; w < words; ++w) {
                    uint64_t bitsw = rh[w];
                    while (bitsw) {
                        dh.push_back(w * 64 + __builtin_ctzll(bitsw));
                        bitsw &= bitsw - 1;
                    }
                }
                int z = T.comm(g, h);
                const uint64_t * dz = row(s, z);
                bool zsingle = s.single[z] >= 0;
                std::fill(img.begin(), img.end(), 0);
                std::fill(keepg.begin(), keepg.end(), 0);
                std::fill(keeph.begin(), keeph.end(), 0);
                for (int u : dg)
                    for (int v : dh) {
                        int c = T.comm(u, v);
                        img[c >> 6] |= uint64_t(1) << (c & 63);
                        if (zsingle ? c == s.single[z] : test_bit(dz, c)) {
                            keepg[u >> 6] |= uint64_t(1) << (u & 63);
                            keeph[v >> 6] |= uint64_t(1) << (v & 63);
                        }
                    }
                Cut c1 = intersect(s, z, img.data());
                Cut c2 = intersect(s, g, keepg.data());
                Cut c3 = intersect(s, h, keeph.data());
                if (c1 == Cut::wiped || c2 == Cut::wiped || c3 == Cut::wiped)
                    return false;
                if (c1 == Cut::shrunk || c2 == Cut::shrunk || c3 == Cut::shrunk)
                    changed = true;
                if (s.single[g] >= 0)
                    break;  // g got pinned; the cheap pass takes over
            }
        }
        return true;
    }

    // The open-pair filtering is only needed before any branching has
    // happened and when a branch is about to close into a leaf; in between,
    // the singleton-driven passes carry all the information and are far
    // cheaper per node.
    bool fixpoint(SearchState & s, bool use_open_pairs)
    {
        while (true) {
            if (!normalize(s))
                return false;
            bool changed = false;
            if (!singleton_pass(s, changed))
                return false;
            if (changed)
                continue;
            if (!use_open_pairs)
                return true;
            if (!open_pair_pass(s, changed))
                return false;
            if (!changed)
                return true;
        }
    }

    int pick_branch_var(const SearchState & s) const
    {
        for (int x : T.generator_indices())
            if (s.single[x] < 0)
                return x;
        for (int x : T.transvection_indices())
            if (s.single[x] < 0)
                return x;
        return -1;
    }

    int pick_min_domain_var(const SearchState & s) const
    {
        int best = -1, best_size = order + 1;
        for (int x = 0; x < order; ++x) {
            if (s.single[x] >= 0)
                continue;
            int pc = popcount(row(s, x));
            if (pc < best_size) {
                best_size = pc;
                best = x;
            }
        }
        return best;
    }

    // Close the branch into a leaf if every open domain is confined to one
    // center coset, the derived subgroup is pinned, the induced coset action
    // is a permutation, and every commutator constraint is satisfied by all
    // remaining choices. Returns false when the state is not leaf-shaped.
    bool try_emit_leaf(const SearchState & s, std::vector<MapSetLeaf> & out)
    {
        MapSetLeaf leaf;
        leaf.fixed.assign(order, -1);
        leaf.image_coset.assign(order, -1);
        leaf.mask.assign(order, 0);

        for (int x = 0; x < order; ++x) {
            if (s.single[x] >= 0) {
                leaf.fixed[x] = s.single[x];
                leaf.image_coset[x] = T.coset_base(s.single[x]);
                leaf.mask[x] = uint16_t(1u << T.center_offset(s.single[x]));
                continue;
            }
            if (T.in_derived_idx(x))
                return false;  // derived images must be pinned exactly
            const uint64_t * r = row(s, x);
            int base = -1;
            uint16_t m = 0;
            for (int w = 0; w < words; ++w) {
                uint64_t bitsw = r[w];
                while (bitsw) {
                    int v = w * 64 + __builtin_ctzll(bitsw);
                    bitsw &= bitsw - 1;
                    int b = T.coset_base(v);
                    if (base == -1)
                        base = b;
                    else if (base != b)
                        return false;  // not confined to one coset
                    m |= uint16_t(1u << T.center_offset(v));
                }
            }
            leaf.image_coset[x] = base;
            leaf.mask[x] = m;
        }

        // coset action: well defined on source cosets and injective
        std::map<int, int> action, seen;
        for (int x = 0; x < order; ++x) {
            int src = T.coset_base(x);
            auto [it, fresh] = action.emplace(src, leaf.image_coset[x]);
            if (!fresh && it->second != leaf.image_coset[x])
                return false;
        }
        for (auto & [src, img] : action) {
            auto [it, fresh] = seen.emplace(img, src);
            if (!fresh)
                return false;
        }

        // every pair constraint must already be decided: representatives
        // commute to the pinned image of the commutator (center factors
        // cancel, verified at construction)
        std::vector<int> rep(order);
        for (int x = 0; x < order; ++x)
            rep[x] = s.single[x] >= 0 ? s.single[x] : first_bit(row(s, x));
        for (int g = 0; g < order; ++g)
            for (int h = 0; h < order; ++h) {
                int z = T.comm(g, h);
                if (s.single[z] < 0)
                    return false;
                if (T.comm(rep[g], rep[h]) != s.single[z])
                    return false;
            }

        if (leaf.count(T) != 0)
            out.push_back(std::move(leaf));
        return true;
    }

    void dfs(SearchState & s, std::vector<MapSetLeaf> & out, int depth)
    {
        if (!fixpoint(s, depth == 0))
            return;
        int var = pick_branch_var(s);
        if (var < 0) {
            if (!fixpoint(s, true))
                return;
            if (try_emit_leaf(s, out))
                return;
            var = pick_min_domain_var(s);
            if (var < 0)
                return;  // fully assigned but not a solution
        }
        const uint64_t * r = row(s, var);
        std::vector<int> values;
        for (int w = 0; w < words; ++w) {
            uint64_t bitsw = r[w];
            while (bitsw) {
                values.push_back(w * 64 + __builtin_ctzll(bitsw));
                bitsw &= bitsw - 1;
            }
        }
        for (int v : values) {
            if (++nodes > opts.node_budget)
                throw BudgetExceeded(nodes);
            if (opts.progress && nodes % 1000000 == 0)
                std::cerr << "... " << nodes << " nodes, " << out.size() << " leaves\n";
            SearchState child = s;
            restrict_single(child, var, v);
            dfs(child, out, depth + 1);
        }
    }
};

}

FactoredMapSet enumerate_pc_maps(std::shared_ptr<const GroupTable> table, EnumOptions opts)
{
    require(table != nullptr, "enumeration needs a group table");
    require(table->field().order() <= 16, "factored leaves track coset offsets in 16-bit masks");
    return PcSearch(std::move(table), opts).run();
}

std::vector<std::vector<uint16_t>> naive_pc_filter(const GroupTable & table)
{
    require(table.order() <= 8, "naive filter only feasible for order <= 8");
    std::vector<uint16_t> perm(table.order());
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::vector<uint16_t>> out;
    do {
        if (table_is_pc(table, perm))
            out.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

// ---------------------------------------------------------------------------
// standard families as a factored set

namespace {

MapSetLeaf leaf_from_prefix(const GroupTable & t, const PCMap & prefix)
{
    MapSetLeaf leaf;
    int order = t.order();
    leaf.fixed.assign(order, -1);
    leaf.image_coset.assign(order, -1);
    leaf.mask.assign(order, 0);
    uint16_t full = uint16_t((1u << t.field().order()) - 1);
    for (int x = 0; x < order; ++x) {
        int img = t.index_of(prefix(t.element(x)));
        if (t.in_derived_idx(x)) {
            leaf.fixed[x] = img;
            leaf.image_coset[x] = t.coset_base(img);
            leaf.mask[x] = uint16_t(1u << t.center_offset(img));
        }
        else {
            leaf.image_coset[x] = t.coset_base(img);
            leaf.mask[x] = full;
        }
    }
    return leaf;
}

void push_dedup(const GroupTable & t, std::vector<MapSetLeaf> & leaves,
    std::map<uint64_t, std::vector<size_t>> & index, MapSetLeaf leaf)
{
    uint64_t sig = leaf.signature(t);
    for (size_t i : index[sig]) {
        const MapSetLeaf & other = leaves[i];
        if (other.fixed == leaf.fixed && other.image_coset == leaf.image_coset
            && other.mask == leaf.mask)
            return;
    }
    index[sig].push_back(leaves.size());
    leaves.push_back(std::move(leaf));
}

}

FactoredMapSet generate_standard_set(std::shared_ptr<const GroupTable> table,
    std::size_t parameter_budget)
{
    const GroupTable & t = *table;
    const Field & f = t.field();
    int n = t.dim(), q = f.order(), k = f.degree();
    require(n >= 3, "the standard families act on dimensions >= 3");
    require(q <= 16, "factored leaves track coset offsets in 16-bit masks");

    FactoredMapSet result;
    result.table = table;
    std::map<uint64_t, std::vector<size_t>> index;

    if (n == 3) {
        std::size_t space = std::size_t(q) * q * q * q * k;
        require(space <= parameter_budget, "standard-family parameter space exceeds the budget");
        for (int power = 0; power < k; ++power)
            for (int a = 0; a < q; ++a)
                for (int b = 0; b < q; ++b)
                    for (int c = 0; c < q; ++c)
                        for (int d = 0; d < q; ++d) {
                            if (f.sub(f.mul(a, d), f.mul(b, c)) == 0)
                                continue;
                            PCMap prefix = PCMap::permutable(FieldElem(f, a), FieldElem(f, b),
                                FieldElem(f, c), FieldElem(f, d))
                                               .compose(PCMap::field_aut(3, f, power));
                            push_dedup(t, result.leaves, index, leaf_from_prefix(t, prefix));
                        }
        return result;
    }

    require(n >= 4, "standard set defined for n >= 3");
    int m = n * (n - 1) / 2;
    // graph x subcentral x (diagonal mod scalars) x (unipotent mod center) x field
    std::size_t diag_classes = 1;
    for (int i = 1; i < n; ++i)
        diag_classes *= q - 1;
    std::size_t unip_classes = 1;
    for (int i = 0; i < m - 1; ++i)
        unip_classes *= q;
    std::size_t space = 2 * std::size_t(q) * q * diag_classes * unip_classes * k;
    require(space <= parameter_budget, "standard-family parameter space exceeds the budget");

    std::vector<std::vector<FieldElem>> diags;
    {
        std::vector<int> digits(n - 1, 0);
        while (true) {
            std::vector<FieldElem> d = {f.one()};  // d_1 normalized to 1
            for (int v : digits)
                d.push_back(FieldElem(f, 1 + v));  // nonzero entries
            diags.push_back(d);
            int pos = 0;
            while (pos < n - 1 && ++digits[pos] == q - 1)
                digits[pos++] = 0;
            if (pos == n - 1)
                break;
        }
    }

    for (int g = 0; g < 2; ++g)
        for (int ai = 0; ai < q; ++ai)
            for (int bi = 0; bi < q; ++bi)
                for (const auto & d : diags)
                    for (std::size_t uc = 0; uc < unip_classes; ++uc)
                        for (int power = 0; power < k; ++power) {
                            // unipotent part with zero (1, n) entry
                            UTElement u(n, f);
                            std::size_t rest = uc;
                            for (int i = 1; i <= n; ++i)
                                for (int j = i + 1; j <= n; ++j) {
                                    if (i == 1 && j == n)
                                        continue;
                                    u.set_entry_idx(i, j, int(rest % q));
                                    rest /= q;
                                }
                            TriangularInvertible conj(d, u);
                            PCMap prefix = PCMap::quasi_inner(conj)
                                               .compose(PCMap::field_aut(n, f, power));
                            prefix = PCMap::standard_subcentral(n, f, FieldElem(f, ai), FieldElem(f, bi))
                                         .compose(prefix);
                            if (g)
                                prefix = PCMap::graph_aut(n, f).compose(prefix);
                            push_dedup(t, result.leaves, index, leaf_from_prefix(t, prefix));
                        }
    return result;
}

FactoredMapSet central_map_structure(std::shared_ptr<const GroupTable> table, bool fix_transvections)
{
    const GroupTable & t = *table;
    int order = t.order(), q = t.field().order();
    require(q <= 16, "factored leaves track coset offsets in 16-bit masks");
    std::vector<bool> forced(order, false);
    for (int x = 0; x < order; ++x)
        if (t.in_derived_idx(x))
            forced[x] = true;
    if (fix_transvections)
        for (int x : t.transvection_indices())
            forced[x] = true;

    MapSetLeaf leaf;
    leaf.fixed.assign(order, -1);
    leaf.image_coset.assign(order, -1);
    leaf.mask.assign(order, 0);
    uint16_t full = uint16_t((1u << q) - 1);
    for (int x = 0; x < order; ++x) {
        leaf.image_coset[x] = t.coset_base(x);
        if (forced[x]) {
            leaf.fixed[x] = x;
            leaf.mask[x] = uint16_t(1u << t.center_offset(x));
        }
        else {
            leaf.mask[x] = full;
        }
    }
    FactoredMapSet result;
    result.table = table;
    result.leaves.push_back(std::move(leaf));
    return result;
}

MapSetLeaf conjugate_leaf(const GroupTable & t, const MapSetLeaf & leaf,
    const std::vector<uint16_t> & psi, const std::vector<uint16_t> & psi_inv)
{
    int order = t.order(), q = t.field().order();
    MapSetLeaf out;
    out.fixed.assign(order, -1);
    out.image_coset.assign(order, -1);
    out.mask.assign(order, 0);
    for (int y = 0; y < order; ++y) {
        int x = psi_inv[y];
        if (leaf.fixed[x] >= 0) {
            int img = psi[leaf.fixed[x]];
            out.fixed[y] = img;
            out.image_coset[y] = t.coset_base(img);
            out.mask[y] = uint16_t(1u << t.center_offset(img));
            continue;
        }
        int base = -1;
        uint16_t m = 0;
        for (int g = 0; g < q; ++g) {
            if (!((leaf.mask[x] >> g) & 1))
                continue;
            int img = psi[t.member(leaf.image_coset[x], g)];
            int b = t.coset_base(img);
            require(base == -1 || base == b,
                "conjugation scattered a coset-confined domain across cosets");
            base = b;
            m |= uint16_t(1u << t.center_offset(img));
        }
        out.image_coset[y] = base;
        out.mask[y] = m;
    }
    return out;
}

BigCount count_central_maps_by_tables(const GroupTable & t, bool fix_transvections)
{
    const Field & f = t.field();
    int order = t.order(), q = f.order();
    require(q <= 7, "per-coset function enumeration is q^q; only feasible for small q");

    std::vector<bool> forced(order, false);
    for (int x = 0; x < order; ++x)
        if (t.in_derived_idx(x))
            forced[x] = true;
    if (fix_transvections)
        for (int x : t.transvection_indices())
            forced[x] = true;

    long long qq = 1;
    for (int i = 0; i < q; ++i)
        qq *= q;

    BigCount total = 1;
    for (int base = 0; base < order; ++base) {
        if (t.center_offset(base) != 0)
            continue;
        long long valid = 0;
        std::vector<int> h(q);
        for (long long code = 0; code < qq; ++code) {
            long long rest = code;
            for (int g = 0; g < q; ++g) {
                h[g] = int(rest % q);
                rest /= q;
            }
            bool ok = true;
            unsigned shifted = 0;
            for (int g = 0; g < q && ok; ++g) {
                if (forced[t.member(base, g)] && h[g] != 0)
                    ok = false;
                int img = f.add(g, h[g]);
                if (shifted & (1u << img))
                    ok = false;  // shift must be a permutation
                shifted |= 1u << img;
            }
            if (ok)
                ++valid;
        }
        total *= valid;
    }
    return total;
}

}
