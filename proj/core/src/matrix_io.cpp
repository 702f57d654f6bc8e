#include "qlab/matrix_io.hpp"

#include <fstream>

namespace qlab {

nlohmann::json matrix_to_json(const ComplexMatrix& m) {
  nlohmann::json entries = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      entries.push_back({m(r, c).real(), m(r, c).imag()});
    }
  }
  return {{"dim", m.rows()}, {"entries", std::move(entries)}};
}

ComplexMatrix matrix_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("entries")) {
    throw Error(ErrorCode::Parse, "matrix object needs \"dim\" and \"entries\"");
  }
  if (!j["dim"].is_number_integer() || j["dim"].get<long long>() < 1) {
    throw Error(ErrorCode::Parse, "\"dim\" must be a positive integer");
  }
  const auto dim = static_cast<Eigen::Index>(j["dim"].get<long long>());
  const auto& entries = j["entries"];
  if (!entries.is_array() || static_cast<Eigen::Index>(entries.size()) != dim * dim) {
    throw Error(ErrorCode::Parse, "\"entries\" must hold dim*dim [re, im] pairs");
  }
  ComplexMatrix m(dim, dim);
  for (Eigen::Index k = 0; k < dim * dim; ++k) {
    const auto& e = entries[static_cast<std::size_t>(k)];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
      throw Error(ErrorCode::Parse, "entry " + std::to_string(k) + " is not [re, im]");
    }
    m(k / dim, k % dim) = Complex{e[0].get<double>(), e[1].get<double>()};
  }
  return m;
}

ComplexMatrix load_unitary(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Parse, "cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, path.string() + ": " + e.what());
  }
  ComplexMatrix u = matrix_from_json(j);
  qubits_for_dim(u.rows());
  if (!is_unitary(u)) throw Error(ErrorCode::NonUnitary, path.string() + " is not unitary");
  return u;
}

void save_matrix(const std::filesystem::path& path, const ComplexMatrix& m) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Parse, "cannot write " + path.string());
  out << matrix_to_json(m).dump(2) << '\n';
}

}  // namespace qlab
