#pragma once

#include <utpc/enumerate.hpp>
#include <utpc/pcmap.hpp>

#include <json.hpp>

namespace utpc {

/// A witnessed factorization of a PC-map table into the standard families,
/// for n >= 4: graph, then standard subcentral, then quasi-inner, then
/// field, with the central freedom innermost. Composing the parts in that
/// order reproduces the input table exactly (checked before returning).
struct Decomposition {
    std::shared_ptr<const GroupTable> table;
    bool graph = false;
    FieldElem sub_alpha, sub_beta;
    TriangularInvertible conjugator;
    int field_power = 0;
    std::vector<uint8_t> central_values;  // f per element index

    PCMap recompose() const;
    nlohmann::json to_json() const;
};

/// Finds a Decomposition of the given PC-map table by sweeping the finite
/// parameter space (conjugators modulo the centralizer) and solving for the
/// central residue. The input must pass the exhaustive PC check; failure to
/// decompose raises an error, never a wrong answer.
Decomposition decompose_pc_map(std::shared_ptr<const GroupTable> table,
    const std::vector<uint16_t> & images);

/// The n = 3 form: permutable, then field, with the central freedom
/// innermost.
struct Dim3Decomposition {
    std::shared_ptr<const GroupTable> table;
    std::array<FieldElem, 4> permutable;
    int field_power = 0;
    std::vector<uint8_t> central_values;

    PCMap recompose() const;
    nlohmann::json to_json() const;
};

Dim3Decomposition classify_dim3(std::shared_ptr<const GroupTable> table,
    const std::vector<uint16_t> & images);

}
