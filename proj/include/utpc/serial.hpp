#pragma once

#include <utpc/matrix.hpp>

#include <json.hpp>

namespace utpc {

/// Canonical wire form of a group element: the strictly-upper entries in
/// row-major order, each as its field index, under a (n, p, k) header.
nlohmann::json to_json(const UTElement & a);
UTElement ut_element_from_json(const nlohmann::json & j);

/// Entries-only array form, for use where (n, p, k) travel separately.
nlohmann::json entries_json(const UTElement & a);
UTElement ut_element_from_entries(const nlohmann::json & entries, int n, const Field & f);

}
