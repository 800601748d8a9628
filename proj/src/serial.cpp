#include <utpc/serial.hpp>

namespace utpc {

using nlohmann::json;

json to_json(const UTElement & a)
{
    json j;
    j["n"] = a.dim();
    j["p"] = a.field().characteristic();
    j["k"] = a.field().degree();
    j["entries"] = entries_json(a);
    return j;
}

json entries_json(const UTElement & a)
{
    json arr = json::array();
    for (uint8_t e : a.entries())
        arr.push_back(int(e));
    return arr;
}

UTElement ut_element_from_json(const json & j)
{
    require(j.contains("n") && j.contains("p") && j.contains("k") && j.contains("entries"),
        "element object needs n, p, k, entries");
    auto f = get_field(j["p"].get<int>(), j["k"].get<int>());
    return ut_element_from_entries(j["entries"], j["n"].get<int>(), *f);
}

UTElement ut_element_from_entries(const json & entries, int n, const Field & f)
{
    require(entries.is_array() && int(entries.size()) == n * (n - 1) / 2,
        "expected " + std::to_string(n * (n - 1) / 2) + " entries");
    UTElement a(n, f);
    int t = 0;
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) {
            int v = entries[t++].get<int>();
            require(v >= 0 && v < f.order(), "entry outside the field");
            a.set_entry_idx(i, j, v);
        }
    return a;
}

}
