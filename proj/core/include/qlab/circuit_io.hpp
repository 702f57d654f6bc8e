#pragma once

#include <filesystem>

#include <nlohmann/json.hpp>

#include "qlab/circuit.hpp"

namespace qlab {

// {"n_qubits": n, "n_clbits": m, "instructions": [
//    {"op": "unitary", "kind": "RX", "theta": 0.3, "targets": [0]},
//    {"op": "channel", "kraus": [<matrix>...], "targets": [1], "label": "..."},
//    {"op": "channel", "depolarizing": 1.0, "targets": [1]},
//    {"op": "reset", "target": 1},
//    {"op": "measure", "target": 0, "clbit": 0}]}
nlohmann::json circuit_to_json(const Circuit& c);
Circuit circuit_from_json(const nlohmann::json& j);
Circuit load_circuit(const std::filesystem::path& path);

/// Bitstring keys map to probabilities.
nlohmann::json distribution_to_json(const Distribution& d);

}  // namespace qlab
