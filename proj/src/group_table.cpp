#include <utpc/group_table.hpp>

#include <map>
#include <mutex>
#include <random>

namespace utpc {

GroupTable::GroupTable(int n, const Field & f, std::size_t bound) :
    n_(n), q_(f.order()), field_(&f)
{
    int m = n * (n - 1) / 2;
    long long order = 1;
    for (int i = 0; i < m; ++i) {
        order *= q_;
        require(std::size_t(order) <= bound,
            "group order " + std::to_string(q_) + "^" + std::to_string(m) + " exceeds the bound " + std::to_string(bound));
    }
    order_ = int(order);

    // weight of the (1, n) digit in the lexicographic index
    center_weight_ = 1;
    for (int t = n - 1; t < m; ++t)
        center_weight_ *= q_;

    elements_.reserve(order_);
    for (int idx = 0; idx < order_; ++idx) {
        UTElement a(n, f);
        int rest = idx;
        for (int t = m - 1; t >= 0; --t) {
            int digit = rest % q_;
            rest /= q_;
            int i = 1, slot = t;
            while (slot >= n - i) {
                slot -= n - i;
                ++i;
            }
            if (digit != 0)
                a.set_entry_idx(i, i + 1 + slot, digit);
        }
        elements_.push_back(std::move(a));
    }

    mul_.resize(size_t(order_) * order_);
    inv_.resize(order_);
    for (int a = 0; a < order_; ++a) {
        for (int b = 0; b < order_; ++b)
            mul_[size_t(a) * order_ + b] = uint16_t(index_of(elements_[a] * elements_[b]));
        inv_[a] = uint16_t(index_of(elements_[a].inverse()));
    }

    comm_.resize(size_t(order_) * order_);
    for (int a = 0; a < order_; ++a)
        for (int b = 0; b < order_; ++b)
            comm_[size_t(a) * order_ + b] = mul_[size_t(mul_[size_t(mul_[size_t(a) * order_ + b]) * order_ + inv_[a]]) * order_ + inv_[b]];

    derived_mask_.resize(order_);
    for (int a = 0; a < order_; ++a)
        derived_mask_[a] = in_derived(elements_[a]) ? 1 : 0;

    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j)
            for (int alpha = 1; alpha < q_; ++alpha) {
                int idx = index_of(UTElement::transvection(n, i, j, FieldElem(f, alpha)));
                transvections_.push_back(idx);
                if (j == i + 1)
                    generators_.push_back(idx);
            }

    // Identity and inverses are exact by construction; spot-check
    // associativity on seeded triples.
    std::mt19937_64 rng(12345);
    for (int trial = 0; trial < 200; ++trial) {
        int a = int(rng() % order_), b = int(rng() % order_), c = int(rng() % order_);
        require(mul(mul(a, b), c) == mul(a, mul(b, c)), "associativity spot check failed");
    }
    for (int a = 0; a < order_; ++a)
        require(mul(a, inv(a)) == 0 && mul(a, 0) == a, "group table inverse check failed");
}

int GroupTable::index_of(const UTElement & a) const
{
    require(a.dim() == n_ && a.field() == *field_, "element from another group");
    int idx = 0;
    for (uint8_t e : a.entries())
        idx = idx * q_ + e;
    return idx;
}

std::shared_ptr<const GroupTable> GroupTable::build(int n, const Field & f, std::size_t bound)
{
    // Construct against the shared cached field so that the elements held by
    // the table never outlive the field they point into.
    auto field = get_field(f.characteristic(), f.degree());
    auto t = std::shared_ptr<GroupTable>(new GroupTable(n, *field, bound));
    t->field_owner_ = field;
    return t;
}

std::shared_ptr<const GroupTable> build_group_table(int n, const Field & f, std::size_t bound)
{
    static std::mutex mtx;
    static std::map<std::tuple<int, int, int>, std::weak_ptr<const GroupTable>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto key = std::make_tuple(n, f.characteristic(), f.degree());
    if (auto it = cache.find(key); it != cache.end())
        if (auto hit = it->second.lock())
            return hit;
    auto t = GroupTable::build(n, f, bound);
    cache[key] = t;
    return t;
}

}
