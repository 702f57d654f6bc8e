#pragma once

#include <filesystem>

#include <nlohmann/json.hpp>

#include "qlab/qmath.hpp"

namespace qlab {

/// {"dim": d, "entries": [[re, im], ...]} in row-major order.
nlohmann::json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const nlohmann::json& j);

/// Reads a matrix file and rejects anything that is not unitary within
/// tol::kUnitarity. Parse errors throw Error{Parse}, non-unitary input
/// Error{NonUnitary}.
ComplexMatrix load_unitary(const std::filesystem::path& path);
void save_matrix(const std::filesystem::path& path, const ComplexMatrix& m);

}  // namespace qlab
