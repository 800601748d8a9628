#include <utpc/pcmap.hpp>
#include <utpc/serial.hpp>

#include <algorithm>
#include <map>
#include <random>

namespace utpc {

namespace {

long long ut_order_capped(int n, int q, long long cap)
{
    long long order = 1;
    for (int i = 0; i < n * (n - 1) / 2; ++i) {
        order *= q;
        if (order > cap)
            return -1;
    }
    return order;
}

UTElement random_element(int n, const Field & f, std::mt19937_64 & rng)
{
    UTElement a(n, f);
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j)
            a.set_entry_idx(i, j, int(rng() % f.order()));
    return a;
}

// gamma -> gamma + f(a t_{1n}(gamma)) must permute F for the coset of a.
bool coset_shift_bijective(const UTElement & base, const CentralFunction & f)
{
    const Field & fld = base.field();
    int n = base.dim(), q = fld.order();
    std::vector<bool> seen(q, false);
    for (int gamma = 0; gamma < q; ++gamma) {
        UTElement x = base;
        x.set_entry_idx(1, n, fld.add(base.entry_idx(1, n), gamma));
        int image = fld.add(gamma, f(x).index());
        if (seen[image])
            return false;
        seen[image] = true;
    }
    return true;
}

void validate_central_function(int n, const Field & fld,
    const std::function<FieldElem(const UTElement &)> & fn,
    const CentralFunction & self)
{
    long long order = ut_order_capped(n, fld.order(), static_cast<long long>(GroupTable::default_bound));
    if (order > 0) {
        auto table = build_group_table(n, fld);
        for (int idx = 0; idx < table->order(); ++idx) {
            const UTElement & a = table->element(idx);
            FieldElem v = fn(a);
            require(v.field() == fld, "central function values must lie in the base field");
            require(!table->in_derived_idx(idx) || v.is_zero(),
                "central function must vanish on the derived subgroup");
            if (table->center_offset(idx) == 0)
                require(coset_shift_bijective(a, self),
                    "central function does not shift some center coset bijectively");
        }
    }
    else {
        std::mt19937_64 rng(0);
        for (int trial = 0; trial < 1000; ++trial) {
            UTElement a = random_element(n, fld, rng);
            FieldElem v = fn(a);
            require(v.field() == fld, "central function values must lie in the base field");
            if (in_derived(a))
                require(v.is_zero(), "central function must vanish on the derived subgroup");
            require(coset_shift_bijective(a, self),
                "central function does not shift some center coset bijectively");
        }
    }
}

}

CentralFunction CentralFunction::from_fn(int n, const Field & f,
    std::function<FieldElem(const UTElement &)> fn)
{
    CentralFunction c;
    c.n_ = n;
    c.field_owner_ = get_field(f.characteristic(), f.degree());
    c.field_ = c.field_owner_.get();
    c.fn_ = std::move(fn);
    validate_central_function(n, *c.field_, c.fn_, c);
    return c;
}

CentralFunction CentralFunction::from_table(std::shared_ptr<const GroupTable> table,
    std::vector<uint8_t> values)
{
    require(table != nullptr, "central function needs a group table");
    require(int(values.size()) == table->order(), "one value per group element required");
    CentralFunction c;
    c.n_ = table->dim();
    c.field_owner_ = get_field(table->field().characteristic(), table->field().degree());
    c.field_ = c.field_owner_.get();
    c.values_ = std::move(values);
    c.fn_ = [t = std::move(table), vals = c.values_](const UTElement & a) {
        return FieldElem(t->field(), vals[t->index_of(a)]);
    };
    validate_central_function(c.n_, *c.field_, c.fn_, c);
    return c;
}

PCMap::PCMap(int n, const Field & f) : n_(n)
{
    require(n >= 2, "dimension must be >= 2");
    field_owner_ = get_field(f.characteristic(), f.degree());
    field_ = field_owner_.get();
}

PCMap PCMap::identity(int n, const Field & f)
{
    return PCMap(n, f);
}

PCMap PCMap::quasi_inner(const TriangularInvertible & t)
{
    PCMap m(t.dim(), t.field());
    m.steps_.push_back(QuasiInnerStep{t});
    return m;
}

PCMap PCMap::field_aut(int n, const Field & f, int power)
{
    PCMap m(n, f);
    m.steps_.push_back(FieldAutStep{((power % f.degree()) + f.degree()) % f.degree()});
    return m;
}

PCMap PCMap::graph_aut(int n, const Field & f)
{
    PCMap m(n, f);
    m.steps_.push_back(GraphAutStep{});
    return m;
}

PCMap PCMap::central(const CentralFunction & f)
{
    PCMap m(f.dim(), f.field());
    m.steps_.push_back(CentralStep{f});
    return m;
}

PCMap PCMap::standard_subcentral(int n, const Field & f, const FieldElem & alpha, const FieldElem & beta)
{
    require(n >= 4, "standard subcentral maps need n >= 4 (use permutable for n = 3)");
    require(alpha.field() == f && beta.field() == f, "parameters from a different field");
    PCMap m(n, f);
    m.steps_.push_back(SubcentralStep{alpha, beta});
    return m;
}

PCMap PCMap::permutable(const FieldElem & a, const FieldElem & b, const FieldElem & c, const FieldElem & d)
{
    const Field & f = a.field();
    require(b.field() == f && c.field() == f && d.field() == f, "parameters from different fields");
    require(a * d - b * c != f.zero(), "permutable parameter matrix is singular");
    PCMap m(3, f);
    m.steps_.push_back(PermutableStep{{a, b, c, d}});
    return m;
}

PCMap PCMap::from_table(std::shared_ptr<const GroupTable> table, std::vector<uint16_t> images)
{
    require(table != nullptr, "table-backed map needs a group table");
    require(int(images.size()) == table->order(), "one image per group element required");
    std::vector<bool> seen(table->order(), false);
    for (uint16_t v : images) {
        require(v < table->order() && !seen[v], "images do not form a permutation");
        seen[v] = true;
    }
    PCMap m(table->dim(), table->field());
    m.steps_.push_back(TableStep{std::move(table),
        std::make_shared<const std::vector<uint16_t>>(std::move(images))});
    return m;
}

namespace {

UTElement apply_graph(const UTElement & a)
{
    int n = a.dim();
    UTElement ai = a.inverse();
    UTElement r(n, a.field());
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j)
            r.set_entry_idx(i, j, ai.entry_idx(n + 1 - j, n + 1 - i));
    return r;
}

}

UTElement PCMap::operator()(const UTElement & a) const
{
    require(a.dim() == n_ && a.field() == *field_, "element outside the map's domain");
    UTElement x = a;
    for (auto it = steps_.rbegin(); it != steps_.rend(); ++it) {
        const Step & s = *it;
        if (auto qi = std::get_if<QuasiInnerStep>(&s)) {
            x = qi->t.conjugate(x);
        }
        else if (auto fa = std::get_if<FieldAutStep>(&s)) {
            UTElement y(n_, *field_);
            for (int i = 1; i <= n_; ++i)
                for (int j = i + 1; j <= n_; ++j)
                    y.set_entry_idx(i, j, field_->frobenius(x.entry_idx(i, j), fa->power));
            x = y;
        }
        else if (std::holds_alternative<GraphAutStep>(s)) {
            x = apply_graph(x);
        }
        else if (auto ce = std::get_if<CentralStep>(&s)) {
            UTElement shift = UTElement::transvection(n_, 1, n_, ce->f(x));
            x = x * shift;
        }
        else if (auto sc = std::get_if<SubcentralStep>(&s)) {
            UTElement left = UTElement::transvection(n_, 2, n_, sc->alpha * x.entry(1, 2));
            UTElement right = UTElement::transvection(n_, 1, n_ - 1, sc->beta * x.entry(n_ - 1, n_));
            x = left * x * right;
        }
        else if (auto pm = std::get_if<PermutableStep>(&s)) {
            const auto & m = pm->m;
            FieldElem a12 = x.entry(1, 2), a23 = x.entry(2, 3), a13 = x.entry(1, 3);
            FieldElem det = m[0] * m[3] - m[1] * m[2];
            UTElement y(3, *field_);
            y.set_entry(1, 2, m[0] * a12 + m[1] * a23);
            y.set_entry(2, 3, m[2] * a12 + m[3] * a23);
            y.set_entry(1, 3, det * a13);
            x = y;
        }
        else if (auto tb = std::get_if<TableStep>(&s)) {
            x = tb->table->element((*tb->images)[tb->table->index_of(x)]);
        }
    }
    return x;
}

int PCMap::apply_index(const GroupTable & table, int idx) const
{
    if (steps_.size() == 1)
        if (auto tb = std::get_if<TableStep>(&steps_[0]); tb && tb->table.get() == &table)
            return (*tb->images)[idx];
    return table.index_of((*this)(table.element(idx)));
}

PCMap PCMap::compose(const PCMap & inner) const
{
    require(n_ == inner.n_ && *field_ == *inner.field_, "composition needs equal domains");
    PCMap m(n_, *field_);
    m.steps_ = steps_;
    m.steps_.insert(m.steps_.end(), inner.steps_.begin(), inner.steps_.end());
    return m;
}

PCMap PCMap::inverted() const
{
    PCMap m(n_, *field_);
    auto invert_step = [this](const Step & s) -> Step {
        if (auto qi = std::get_if<QuasiInnerStep>(&s))
            return QuasiInnerStep{qi->t.inverse()};
        if (auto fa = std::get_if<FieldAutStep>(&s))
            return FieldAutStep{(field_->degree() - fa->power) % field_->degree()};
        if (std::holds_alternative<GraphAutStep>(s))
            return GraphAutStep{};
        if (auto ce = std::get_if<CentralStep>(&s)) {
            // psi^{-1}(b) = b t_{1n}(g(b)) with g(b) the unique gamma such
            // that gamma + f(b t_{1n}(gamma)) = 0.
            CentralFunction f = ce->f;
            int n = n_;
            auto g = [f, n](const UTElement & b) {
                const Field & fld = b.field();
                for (int gamma = 0; gamma < fld.order(); ++gamma) {
                    UTElement x = b * UTElement::transvection(n, 1, n, FieldElem(fld, gamma));
                    if (fld.add(gamma, f(x).index()) == 0)
                        return FieldElem(fld, gamma);
                }
                throw Error("central function has no per-coset inverse");  // unreachable
            };
            return CentralStep{CentralFunction::from_fn(n_, *field_, g)};
        }
        if (auto sc = std::get_if<SubcentralStep>(&s))
            return SubcentralStep{-sc->alpha, -sc->beta};
        if (auto pm = std::get_if<PermutableStep>(&s)) {
            const auto & m2 = pm->m;
            FieldElem det = m2[0] * m2[3] - m2[1] * m2[2];
            return PermutableStep{{m2[3] / det, -m2[1] / det, -m2[2] / det, m2[0] / det}};
        }
        const auto & tb = std::get<TableStep>(s);
        std::vector<uint16_t> rev(tb.images->size());
        for (size_t i = 0; i < rev.size(); ++i)
            rev[(*tb.images)[i]] = uint16_t(i);
        return TableStep{tb.table, std::make_shared<const std::vector<uint16_t>>(std::move(rev))};
    };
    for (const Step & s : steps_)  // reversed order, each step inverted
        m.steps_.insert(m.steps_.begin(), invert_step(s));
    return m;
}

std::vector<uint16_t> PCMap::to_table(const GroupTable & table) const
{
    require(table.dim() == n_ && table.field() == *field_, "table for a different group");
    std::vector<uint16_t> images(table.order());
    for (int idx = 0; idx < table.order(); ++idx)
        images[idx] = uint16_t(apply_index(table, idx));
    return images;
}

nlohmann::json PCMap::to_json() const
{
    using nlohmann::json;
    json j;
    j["n"] = n_;
    j["p"] = field_->characteristic();
    j["k"] = field_->degree();
    json steps = json::array();
    for (const Step & s : steps_) {
        json e;
        if (auto qi = std::get_if<QuasiInnerStep>(&s)) {
            e["family"] = "quasi_inner";
            json diag = json::array();
            for (uint8_t d : qi->t.diag())
                diag.push_back(int(d));
            e["diag"] = diag;
            e["unipotent"] = entries_json(qi->t.unipotent());
        }
        else if (auto fa = std::get_if<FieldAutStep>(&s)) {
            e["family"] = "field_aut";
            e["params"] = json::array({fa->power});
        }
        else if (std::holds_alternative<GraphAutStep>(s)) {
            e["family"] = "graph_aut";
        }
        else if (auto ce = std::get_if<CentralStep>(&s)) {
            e["family"] = "central";
            if (const auto * vals = ce->f.table_values()) {
                json arr = json::array();
                for (uint8_t v : *vals)
                    arr.push_back(int(v));
                e["values"] = arr;
            }
        }
        else if (auto sc = std::get_if<SubcentralStep>(&s)) {
            e["family"] = "standard_subcentral";
            e["params"] = json::array({sc->alpha.index(), sc->beta.index()});
        }
        else if (auto pm = std::get_if<PermutableStep>(&s)) {
            e["family"] = "permutable";
            e["params"] = json::array(
                {pm->m[0].index(), pm->m[1].index(), pm->m[2].index(), pm->m[3].index()});
        }
        else if (auto tb = std::get_if<TableStep>(&s)) {
            e["family"] = "table";
            e["group"] = {{"n", n_}, {"p", field_->characteristic()}, {"k", field_->degree()}};
            json perm = json::array();
            for (uint16_t v : *tb->images)
                perm.push_back(int(v));
            e["perm"] = perm;
        }
        steps.push_back(e);
    }
    if (steps.size() == 1) {
        json flat = steps[0];
        flat["n"] = n_;
        flat["p"] = field_->characteristic();
        flat["k"] = field_->degree();
        return flat;
    }
    j["family"] = steps.empty() ? "identity" : "composition";
    if (!steps.empty())
        j["steps"] = steps;
    return j;
}

PcCheckResult is_pc_map(const PCMap & phi, CheckMode mode, std::size_t bound, int samples, uint64_t seed)
{
    int n = phi.dim();
    const Field & f = phi.field();
    if (mode == CheckMode::exhaustive) {
        long long order = ut_order_capped(n, f.order(), static_cast<long long>(bound));
        require(order > 0, "domain too large for exhaustive mode; raise the bound or sample");
        auto table = build_group_table(n, f, bound);
        std::vector<uint16_t> images = phi.to_table(*table);
        std::vector<bool> seen(table->order(), false);
        for (int i = 0; i < table->order(); ++i) {
            if (seen[images[i]]) {
                for (int j = 0; j < i; ++j)
                    if (images[j] == images[i])
                        return {false, PcWitness{table->element(j), table->element(i)}};
            }
            seen[images[i]] = true;
        }
        for (int i = 0; i < table->order(); ++i)
            for (int j = 0; j < table->order(); ++j)
                if (images[table->comm(i, j)] != table->comm(images[i], images[j]))
                    return {false, PcWitness{table->element(i), table->element(j)}};
        return {true, std::nullopt};
    }

    std::mt19937_64 rng(seed);
    std::map<std::vector<uint8_t>, std::vector<uint8_t>> image_of;
    for (int trial = 0; trial < samples; ++trial) {
        UTElement x = random_element(n, f, rng);
        UTElement y = random_element(n, f, rng);
        if (phi(commutator(x, y)) != commutator(phi(x), phi(y)))
            return {false, PcWitness{x, y}};
        for (const UTElement * e : {&x, &y}) {
            auto img = phi(*e).entries();
            auto [it, fresh] = image_of.emplace(img, e->entries());
            if (!fresh && it->second != e->entries()) {
                UTElement other(n, f);
                int t = 0;
                for (int i = 1; i <= n; ++i)
                    for (int j = i + 1; j <= n; ++j)
                        other.set_entry_idx(i, j, it->second[t++]);
                return {false, PcWitness{other, *e}};
            }
        }
    }
    return {true, std::nullopt};
}

bool is_almost_identity(const PCMap & phi)
{
    int n = phi.dim();
    const Field & f = phi.field();
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j)
            for (int alpha = 1; alpha < f.order(); ++alpha) {
                UTElement t = UTElement::transvection(n, i, j, FieldElem(f, alpha));
                if (phi(t) != t)
                    return false;
            }
    return true;
}

namespace {

bool congruence_predicate(const PCMap & phi, std::size_t bound, int samples, uint64_t seed,
    bool (*congruent)(const UTElement &, const UTElement &))
{
    int n = phi.dim();
    const Field & f = phi.field();
    long long order = ut_order_capped(n, f.order(), static_cast<long long>(bound));
    if (order > 0) {
        auto table = build_group_table(n, f, bound);
        for (int idx = 0; idx < table->order(); ++idx)
            if (!congruent(phi(table->element(idx)), table->element(idx)))
                return false;
        return true;
    }
    std::mt19937_64 rng(seed);
    for (int trial = 0; trial < samples; ++trial) {
        UTElement a = random_element(n, f, rng);
        if (!congruent(phi(a), a))
            return false;
    }
    return true;
}

}

bool is_central_map(const PCMap & phi, std::size_t bound, int samples, uint64_t seed)
{
    return congruence_predicate(phi, bound, samples, seed, &center_congruent);
}

bool is_subcentral_map(const PCMap & phi, std::size_t bound, int samples, uint64_t seed)
{
    return congruence_predicate(phi, bound, samples, seed, &second_center_congruent);
}

bool table_is_central(const GroupTable & table, const std::vector<uint16_t> & images)
{
    for (int i = 0; i < table.order(); ++i)
        if (table.coset_base(images[i]) != table.coset_base(i))
            return false;
    return true;
}

bool table_is_subcentral(const GroupTable & table, const std::vector<uint16_t> & images)
{
    for (int i = 0; i < table.order(); ++i)
        if (!second_center_congruent(table.element(images[i]), table.element(i)))
            return false;
    return true;
}

bool table_is_pc(const GroupTable & table, const std::vector<uint16_t> & images)
{
    std::vector<bool> seen(table.order(), false);
    for (uint16_t v : images) {
        if (v >= table.order() || seen[v])
            return false;
        seen[v] = true;
    }
    for (int i = 0; i < table.order(); ++i)
        for (int j = 0; j < table.order(); ++j)
            if (images[table.comm(i, j)] != table.comm(images[i], images[j]))
                return false;
    return true;
}

bool table_is_almost_identity(const GroupTable & table, const std::vector<uint16_t> & images)
{
    for (int t : table.transvection_indices())
        if (images[t] != t)
            return false;
    return true;
}

}
