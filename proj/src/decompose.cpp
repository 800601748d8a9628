#include <utpc/decompose.hpp>

namespace utpc {

namespace {

// Extract f from a central residual R (R(x) = x t_{1n}(f(x))) and validate
// it as a central PC-map function; returns empty on any violation.
std::optional<std::vector<uint8_t>> central_values_of(const GroupTable & t,
    const std::vector<int> & residual)
{
    const Field & f = t.field();
    std::vector<uint8_t> vals(t.order());
    for (int x = 0; x < t.order(); ++x) {
        int r = residual[x];
        if (t.coset_base(r) != t.coset_base(x))
            return std::nullopt;  // not center-congruent
        int gamma = f.sub(t.center_offset(r), t.center_offset(x));
        if (t.in_derived_idx(x) && gamma != 0)
            return std::nullopt;  // must vanish on the derived subgroup
        vals[x] = uint8_t(gamma);
    }
    return vals;
}

}

PCMap Decomposition::recompose() const
{
    const Field & f = table->field();
    int n = table->dim();
    PCMap m = PCMap::central(CentralFunction::from_table(table, central_values));
    m = PCMap::field_aut(n, f, field_power).compose(m);
    m = PCMap::quasi_inner(conjugator).compose(m);
    m = PCMap::standard_subcentral(n, f, sub_alpha, sub_beta).compose(m);
    if (graph)
        m = PCMap::graph_aut(n, f).compose(m);
    return m;
}

nlohmann::json Decomposition::to_json() const
{
    nlohmann::json j;
    j["group"] = {{"n", table->dim()}, {"p", table->field().characteristic()},
        {"k", table->field().degree()}};
    j["graph"] = graph;
    j["subcentral"] = {sub_alpha.index(), sub_beta.index()};
    nlohmann::json diag = nlohmann::json::array();
    for (uint8_t d : conjugator.diag())
        diag.push_back(int(d));
    nlohmann::json unip = nlohmann::json::array();
    for (uint8_t e : conjugator.unipotent().entries())
        unip.push_back(int(e));
    j["quasi_inner"] = {{"diag", diag}, {"unipotent", unip}};
    j["field_power"] = field_power;
    nlohmann::json cv = nlohmann::json::array();
    for (uint8_t v : central_values)
        cv.push_back(int(v));
    j["central"] = cv;
    return j;
}

Decomposition decompose_pc_map(std::shared_ptr<const GroupTable> table,
    const std::vector<uint16_t> & images)
{
    const GroupTable & t = *table;
    const Field & f = t.field();
    int n = t.dim(), q = f.order(), k = f.degree(), m = n * (n - 1) / 2;
    require(n >= 4, "dimension-3 tables decompose through classify_dim3");
    require(table_is_pc(t, images), "input table is not a PC-map");

    // probe on the generators first, full residual check only on survivors
    std::vector<int> probes;
    for (int g : t.generator_indices())
        probes.push_back(g);
    probes.push_back(t.order() - 1);

    std::size_t unip_classes = 1;
    for (int i = 0; i < m - 1; ++i)
        unip_classes *= q;

    std::vector<std::vector<FieldElem>> diags;
    {
        std::vector<int> digits(n - 1, 0);
        while (true) {
            std::vector<FieldElem> d = {f.one()};
            for (int v : digits)
                d.push_back(FieldElem(f, 1 + v));
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
                            PCMap inv = prefix.inverted();

                            bool ok = true;
                            for (int x : probes) {
                                int r = t.index_of(inv(t.element(images[x])));
                                if (t.coset_base(r) != t.coset_base(x)) {
                                    ok = false;
                                    break;
                                }
                            }
                            if (!ok)
                                continue;

                            std::vector<int> residual(t.order());
                            for (int x = 0; x < t.order(); ++x)
                                residual[x] = t.index_of(inv(t.element(images[x])));
                            auto vals = central_values_of(t, residual);
                            if (!vals)
                                continue;

                            Decomposition dec{table, g != 0, FieldElem(f, ai), FieldElem(f, bi),
                                conj, power, *vals};
                            require(dec.recompose().to_table(t) == images,
                                "decomposition recomposition mismatch");
                            return dec;
                        }
    throw Error("no decomposition found within the parameter sweep");
}

PCMap Dim3Decomposition::recompose() const
{
    const Field & f = table->field();
    PCMap m = PCMap::central(CentralFunction::from_table(table, central_values));
    m = PCMap::field_aut(3, f, field_power).compose(m);
    m = PCMap::permutable(permutable[0], permutable[1], permutable[2], permutable[3]).compose(m);
    return m;
}

nlohmann::json Dim3Decomposition::to_json() const
{
    nlohmann::json j;
    j["group"] = {{"n", 3}, {"p", table->field().characteristic()},
        {"k", table->field().degree()}};
    j["permutable"] = {permutable[0].index(), permutable[1].index(), permutable[2].index(),
        permutable[3].index()};
    j["field_power"] = field_power;
    nlohmann::json cv = nlohmann::json::array();
    for (uint8_t v : central_values)
        cv.push_back(int(v));
    j["central"] = cv;
    return j;
}

Dim3Decomposition classify_dim3(std::shared_ptr<const GroupTable> table,
    const std::vector<uint16_t> & images)
{
    const GroupTable & t = *table;
    const Field & f = t.field();
    int q = f.order(), k = f.degree();
    require(t.dim() == 3, "classify_dim3 needs a dimension-3 table");
    require(table_is_pc(t, images), "input table is not a PC-map");

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
                        PCMap inv = prefix.inverted();

                        bool ok = true;
                        for (int x : t.generator_indices()) {
                            int r = t.index_of(inv(t.element(images[x])));
                            if (t.coset_base(r) != t.coset_base(x)) {
                                ok = false;
                                break;
                            }
                        }
                        if (!ok)
                            continue;

                        std::vector<int> residual(t.order());
                        for (int x = 0; x < t.order(); ++x)
                            residual[x] = t.index_of(inv(t.element(images[x])));
                        auto vals = central_values_of(t, residual);
                        if (!vals)
                            continue;

                        Dim3Decomposition dec{table,
                            {FieldElem(f, a), FieldElem(f, b), FieldElem(f, c), FieldElem(f, d)},
                            power, *vals};
                        require(dec.recompose().to_table(t) == images,
                            "dimension-3 recomposition mismatch");
                        return dec;
                    }
    throw Error("no dimension-3 decomposition found within the parameter sweep");
}

}
