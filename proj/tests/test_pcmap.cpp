#include <utpc/pcmap.hpp>
#include <utpc/serial.hpp>

#include <doctest.h>

#include <random>

using namespace utpc;

namespace {

UTElement random_element(int n, const Field & f, std::mt19937_64 & rng)
{
    UTElement a(n, f);
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j)
            a.set_entry_idx(i, j, int(rng() % f.order()));
    return a;
}

TriangularInvertible random_conjugator(int n, const Field & f, std::mt19937_64 & rng)
{
    std::vector<FieldElem> d;
    for (int i = 0; i < n; ++i)
        d.push_back(FieldElem(f, 1 + int(rng() % (f.order() - 1))));
    return TriangularInvertible(d, random_element(n, f, rng));
}

}

TEST_CASE("quasi-inner maps")
{
    auto f = get_field(3, 1);
    std::mt19937_64 rng(20);

    PCMap id = PCMap::quasi_inner(TriangularInvertible::from_unipotent(UTElement::identity(3, *f)));
    for (int trial = 0; trial < 20; ++trial) {
        UTElement a = random_element(3, *f, rng);
        CHECK(id(a) == a);
    }

    // diagonal conjugation scales the transvections
    std::vector<FieldElem> d = {f->one(), f->element(2), f->one()};
    PCMap diag = PCMap::quasi_inner(TriangularInvertible::diagonal(*f, d));
    CHECK(diag(UTElement::transvection(3, 1, 2, f->one()))
        == UTElement::transvection(3, 1, 2, f->element(2)));

    // purely unipotent conjugation only moves the center coordinate in UT(3)
    PCMap inner = PCMap::quasi_inner(TriangularInvertible::from_unipotent(
        UTElement::transvection(3, 1, 2, f->one())));
    CHECK(is_central_map(inner));
    CHECK(is_pc_map(inner).ok);
}

TEST_CASE("field automorphism maps")
{
    auto f3 = get_field(3, 1);
    PCMap triv = PCMap::field_aut(3, *f3, 0);
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 20; ++trial) {
        UTElement a = random_element(3, *f3, rng);
        CHECK(triv(a) == a);  // prime fields have no automorphisms
    }

    auto f4 = get_field(2, 2);
    PCMap frob = PCMap::field_aut(3, *f4, 1);
    FieldElem g = f4->generator();
    CHECK(frob(UTElement::transvection(3, 1, 2, g))
        == UTElement::transvection(3, 1, 2, g + f4->one()));
    for (int trial = 0; trial < 50; ++trial) {
        UTElement a = random_element(3, *f4, rng);
        UTElement b = random_element(3, *f4, rng);
        CHECK(frob(a * b) == frob(a) * frob(b));
    }
    CHECK(is_pc_map(frob).ok);
}

TEST_CASE("graph automorphism")
{
    auto f = get_field(3, 1);
    PCMap graph = PCMap::graph_aut(4, *f);
    CHECK(graph(UTElement::identity(4, *f)).is_identity());

    // involution
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 50; ++trial) {
        UTElement a = random_element(4, *f, rng);
        CHECK(graph(graph(a)) == a);
    }

    // t_{ij}(v) -> t_{n+1-j, n+1-i}(-v)
    for (int i = 1; i <= 4; ++i)
        for (int j = i + 1; j <= 4; ++j)
            for (int v = 0; v < 3; ++v) {
                UTElement t = UTElement::transvection(4, i, j, f->element(v));
                CHECK(graph(t) == UTElement::transvection(4, 5 - j, 5 - i, -f->element(v)));
            }
    CHECK(is_pc_map(graph).ok);
}

TEST_CASE("central maps")
{
    auto f = get_field(3, 1);

    CentralFunction zero = CentralFunction::from_fn(4, *f,
        [&](const UTElement &) { return f->zero(); });
    PCMap id = PCMap::central(zero);
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        UTElement a = random_element(4, *f, rng);
        CHECK(id(a) == a);
    }

    // f(a) = a_{12} vanishes on the derived subgroup and shifts each coset
    // by a constant
    CentralFunction row = CentralFunction::from_fn(4, *f,
        [](const UTElement & a) { return a.entry(1, 2); });
    PCMap c = PCMap::central(row);
    CHECK(is_pc_map(c).ok);
    CHECK(is_central_map(c));

    // nonzero on a derived element: rejected
    CHECK_THROWS_AS(CentralFunction::from_fn(4, *f,
                        [&](const UTElement & a) {
                            return a == UTElement::transvection(4, 1, 4, a.field().one())
                                ? a.field().one()
                                : a.field().zero();
                        }),
        Error);

    // per-coset bijectivity failure: gamma -> gamma + a_{12}(a_{13} + gamma)
    // collapses when a_{12} = 2 over F_3
    CHECK_THROWS_AS(CentralFunction::from_fn(3, *f,
                        [](const UTElement & a) { return a.entry(1, 2) * a.entry(1, 3); }),
        Error);
}

TEST_CASE("standard subcentral maps")
{
    auto f3 = get_field(3, 1);
    CHECK_THROWS_AS(PCMap::standard_subcentral(3, *f3, f3->one(), f3->zero()), Error);

    PCMap id = PCMap::standard_subcentral(4, *f3, f3->zero(), f3->zero());
    std::mt19937_64 rng(24);
    for (int trial = 0; trial < 20; ++trial) {
        UTElement a = random_element(4, *f3, rng);
        CHECK(id(a) == a);
    }

    PCMap s = PCMap::standard_subcentral(4, *f3, f3->one(), f3->element(2));
    // fixes every transvection away from positions (1,2) and (n-1,n)
    for (int i = 1; i <= 4; ++i)
        for (int j = i + 1; j <= 4; ++j)
            for (int v = 1; v < 3; ++v) {
                UTElement t = UTElement::transvection(4, i, j, f3->element(v));
                if ((i == 1 && j == 2) || (i == 3 && j == 4))
                    continue;
                CHECK(s(t) == t);
            }
    CHECK(is_subcentral_map(s));
    CHECK_FALSE(is_central_map(PCMap::standard_subcentral(4, *f3, f3->one(), f3->zero())));
    CHECK(is_pc_map(s).ok);
}

TEST_CASE("permutable maps")
{
    auto f = get_field(3, 1);
    PCMap id = PCMap::permutable(f->one(), f->zero(), f->zero(), f->one());
    std::mt19937_64 rng(25);
    for (int trial = 0; trial < 20; ++trial) {
        UTElement a = random_element(3, *f, rng);
        CHECK(id(a) == a);
    }

    // determinant -1 swap
    PCMap swap = PCMap::permutable(f->zero(), f->one(), f->one(), f->zero());
    UTElement a(3, *f);
    a.set_entry_idx(1, 2, 1);
    a.set_entry_idx(2, 3, 2);
    a.set_entry_idx(1, 3, 1);
    UTElement b = swap(a);
    CHECK(b.entry_idx(1, 2) == 2);
    CHECK(b.entry_idx(2, 3) == 1);
    CHECK(b.entry_idx(1, 3) == 2);  // negated

    CHECK_THROWS_AS(PCMap::permutable(f->one(), f->one(), f->one(), f->one()), Error);
    CHECK(is_pc_map(swap).ok);
}

TEST_CASE("every family passes the exhaustive PC check on small domains")
{
    std::mt19937_64 rng(26);
    for (auto [n, q] : {std::pair{3, 2}, {3, 3}, {4, 2}}) {
        auto [p, k] = prime_power(q);
        auto f = get_field(p, k);
        std::vector<PCMap> maps;
        maps.push_back(PCMap::identity(n, *f));
        maps.push_back(PCMap::quasi_inner(random_conjugator(n, *f, rng)));
        maps.push_back(PCMap::quasi_inner(random_conjugator(n, *f, rng)));
        maps.push_back(PCMap::field_aut(n, *f, 0));
        maps.push_back(PCMap::graph_aut(n, *f));
        maps.push_back(PCMap::central(CentralFunction::from_fn(n, *f,
            [](const UTElement & x) { return x.entry(1, 2); })));
        if (n >= 4)
            maps.push_back(PCMap::standard_subcentral(n, *f, f->one(), f->one()));
        if (n == 3)
            maps.push_back(PCMap::permutable(f->zero(), f->one(), f->one(), f->zero()));
        for (const PCMap & m : maps) {
            auto res = is_pc_map(m);
            CHECK(res.ok);
        }
    }
    // a nontrivial field automorphism needs an extension field
    auto f4 = get_field(2, 2);
    CHECK(is_pc_map(PCMap::field_aut(3, *f4, 1)).ok);
}

TEST_CASE("quasi-inner and field maps are homomorphisms on all pairs")
{
    auto f4 = get_field(2, 2);
    auto f2 = get_field(2, 1);
    std::mt19937_64 rng(31);
    auto t32 = build_group_table(3, *f2);

    PCMap qi = PCMap::quasi_inner(random_conjugator(3, *f2, rng));
    PCMap frob = PCMap::field_aut(3, *f4, 1);
    for (int i = 0; i < t32->order(); ++i)
        for (int j = 0; j < t32->order(); ++j) {
            const UTElement & a = t32->element(i);
            const UTElement & b = t32->element(j);
            CHECK(qi(a * b) == qi(a) * qi(b));
        }
    auto t34 = build_group_table(3, *f4);
    for (int i = 0; i < t34->order(); ++i)
        for (int j = 0; j < t34->order(); ++j) {
            const UTElement & a = t34->element(i);
            const UTElement & b = t34->element(j);
            CHECK(frob(a * b) == frob(a) * frob(b));
        }
}

TEST_CASE("pc check rejects a transposition of the identity with a witness")
{
    auto f = get_field(3, 1);
    auto table = build_group_table(3, *f);
    std::vector<uint16_t> images(table->order());
    for (int i = 0; i < table->order(); ++i)
        images[i] = uint16_t(i);
    int other = table->index_of(UTElement::transvection(3, 1, 2, f->one()));
    std::swap(images[table->identity_index()], images[other]);
    PCMap bad = PCMap::from_table(table, images);
    auto res = is_pc_map(bad);
    CHECK_FALSE(res.ok);
    CHECK(res.witness.has_value());
}

TEST_CASE("sampled pc check works on larger domains")
{
    auto f = get_field(2, 1);
    std::mt19937_64 rng(27);
    PCMap qi = PCMap::quasi_inner(random_conjugator(6, *f, rng));
    CHECK(is_pc_map(qi, CheckMode::sampled, GroupTable::default_bound, 300, 0).ok);
    CHECK_THROWS_AS(is_pc_map(qi, CheckMode::exhaustive), Error);  // 2^15 over the bound
}

TEST_CASE("almost identity predicate")
{
    auto f = get_field(3, 1);
    CHECK(is_almost_identity(PCMap::identity(3, *f)));

    std::vector<FieldElem> d = {f->one(), f->element(2), f->one()};
    CHECK_FALSE(is_almost_identity(PCMap::quasi_inner(TriangularInvertible::diagonal(*f, d))));

    // central map whose function vanishes on every transvection
    CentralFunction cf = CentralFunction::from_fn(3, *f, [](const UTElement & a) {
        const Field & fl = a.field();
        return a.entry_idx(1, 2) != 0 && a.entry_idx(2, 3) != 0 ? a.entry(1, 2) : fl.zero();
    });
    CHECK(is_almost_identity(PCMap::central(cf)));
}

TEST_CASE("centrality and subcentrality predicates")
{
    auto f = get_field(3, 1);
    CHECK(is_central_map(PCMap::identity(4, *f)));
    CHECK(is_subcentral_map(PCMap::identity(4, *f)));
    PCMap graph = PCMap::graph_aut(4, *f);
    CHECK_FALSE(is_central_map(graph));
    CHECK_FALSE(is_subcentral_map(graph));
    PCMap s = PCMap::standard_subcentral(4, *f, f->element(2), f->zero());
    CHECK(is_subcentral_map(s));
    CHECK_FALSE(is_central_map(s));
}

TEST_CASE("composition and inversion")
{
    auto f = get_field(3, 1);
    auto table = build_group_table(3, *f);
    std::mt19937_64 rng(28);

    PCMap id = PCMap::identity(3, *f);
    PCMap qi = PCMap::quasi_inner(random_conjugator(3, *f, rng));
    CHECK(qi.compose(id).to_table(*table) == qi.to_table(*table));
    CHECK(id.compose(qi).to_table(*table) == qi.to_table(*table));

    // quasi-inner inversion is conjugator inversion
    TriangularInvertible t = random_conjugator(3, *f, rng);
    CHECK(PCMap::quasi_inner(t).inverted().to_table(*table)
        == PCMap::quasi_inner(t.inverse()).to_table(*table));

    // every family inverts to its actual inverse
    std::vector<PCMap> maps;
    maps.push_back(qi);
    maps.push_back(PCMap::graph_aut(3, *f));
    maps.push_back(PCMap::permutable(f->element(2), f->one(), f->zero(), f->one()));
    maps.push_back(PCMap::central(CentralFunction::from_fn(3, *f,
        [](const UTElement & x) { return x.entry(1, 2); })));
    maps.push_back(PCMap::standard_subcentral(4, *f, f->one(), f->element(2)));
    for (const PCMap & m : maps) {
        if (m.dim() != 3) {
            auto t4 = build_group_table(4, *f);
            std::vector<uint16_t> composed = m.inverted().compose(m).to_table(*t4);
            for (int i = 0; i < t4->order(); ++i)
                CHECK(composed[i] == i);
            continue;
        }
        std::vector<uint16_t> composed = m.inverted().compose(m).to_table(*table);
        for (int i = 0; i < table->order(); ++i)
            CHECK(composed[i] == i);
    }

    // the central maps form a set closed under composition and inversion
    for (int trial = 0; trial < 20; ++trial) {
        int v1 = 1 + int(rng() % 2), v2 = 1 + int(rng() % 2);
        PCMap c1 = PCMap::central(CentralFunction::from_fn(3, *f,
            [v1](const UTElement & x) { return x.entry(1, 2) * FieldElem(x.field(), v1); }));
        PCMap c2 = PCMap::central(CentralFunction::from_fn(3, *f,
            [v2](const UTElement & x) { return x.entry(2, 3) * FieldElem(x.field(), v2); }));
        CHECK(is_central_map(c1.compose(c2)));
        CHECK(is_central_map(c1.inverted()));
    }

    CHECK_THROWS_AS(PCMap::identity(3, *f).compose(PCMap::identity(4, *f)), Error);
}

TEST_CASE("central maps do not disturb commutators")
{
    auto f = get_field(3, 1);
    auto table = build_group_table(3, *f);
    PCMap c = PCMap::central(CentralFunction::from_fn(3, *f,
        [](const UTElement & x) { return x.entry(1, 2); }));
    for (int i = 0; i < table->order(); ++i)
        for (int j = 0; j < table->order(); ++j) {
            const UTElement & a = table->element(i);
            const UTElement & b = table->element(j);
            CHECK(commutator(c(a), c(b)) == commutator(a, b));
        }
}

TEST_CASE("conjugating a central map by a pc map keeps it central")
{
    auto f = get_field(3, 1);
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 20; ++trial) {
        PCMap c = PCMap::central(CentralFunction::from_fn(3, *f,
            [](const UTElement & x) { return x.entry(1, 2); }));
        int params[4];
        do {
            for (int & v : params)
                v = int(rng() % 3);
        } while (f->sub(f->mul(params[0], params[3]), f->mul(params[1], params[2])) == 0);
        PCMap pi = PCMap::permutable(f->element(params[0]), f->element(params[1]),
            f->element(params[2]), f->element(params[3]));
        PCMap conj = pi.compose(c).compose(pi.inverted());
        CHECK(is_central_map(conj));
    }
}

TEST_CASE("the standard subcentral family is not normal: a conjugate escapes it")
{
    // conjugating a standard subcentral map by a quasi-inner automorphism can
    // leave the two-parameter family; witness found by sweeping conjugators
    auto f = get_field(3, 1);
    auto table = build_group_table(4, *f);
    PCMap s = PCMap::standard_subcentral(4, *f, f->one(), f->zero());

    auto in_family = [&](const std::vector<uint16_t> & images) {
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) {
                PCMap cand = PCMap::standard_subcentral(4, *f, f->element(a), f->element(b));
                if (cand.to_table(*table) == images)
                    return true;
            }
        return false;
    };
    REQUIRE(in_family(s.to_table(*table)));

    std::mt19937_64 rng(30);
    bool witness_found = false;
    for (int trial = 0; trial < 50 && !witness_found; ++trial) {
        PCMap psi = PCMap::quasi_inner(random_conjugator(4, *f, rng));
        std::vector<uint16_t> conj = psi.compose(s).compose(psi.inverted()).to_table(*table);
        witness_found = !in_family(conj);
    }
    CHECK(witness_found);
}

TEST_CASE("map serialization forms")
{
    auto f = get_field(3, 1);
    PCMap perm = PCMap::permutable(f->one(), f->zero(), f->zero(), f->one());
    auto j = perm.to_json();
    CHECK(j["family"] == "permutable");
    CHECK(j["params"].size() == 4);

    auto table = build_group_table(3, *f);
    PCMap tablemap = PCMap::from_table(table, perm.to_table(*table));
    auto jt = tablemap.to_json();
    CHECK(jt["family"] == "table");
    CHECK(jt["perm"].size() == 27);

    PCMap comp = perm.compose(PCMap::field_aut(3, *f, 0));
    CHECK(comp.to_json()["family"] == "composition");
    CHECK(comp.steps().size() == 2);
}

TEST_CASE("table-backed maps refuse non-permutations")
{
    auto f = get_field(2, 1);
    auto table = build_group_table(3, *f);
    std::vector<uint16_t> bad(table->order(), 0);
    CHECK_THROWS_AS(PCMap::from_table(table, bad), Error);
}
