#pragma once

// Brute-force reference implementations for the test suites. Everything here
// is written with explicit loops over basis indices and shares no code with
// the library beyond the Eigen matrix type.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline constexpr double kPi = 3.14159265358979323846;

inline int bit(std::size_t x, std::size_t k) { return static_cast<int>((x >> k) & 1u); }

inline Mat mat2(cd a, cd b, cd c, cd d) {
  Mat m(2, 2);
  m << a, b, c, d;
  return m;
}

inline Mat I2() { return mat2(1, 0, 0, 1); }
inline Mat X() { return mat2(0, 1, 1, 0); }
inline Mat Y() { return mat2(0, cd(0, -1), cd(0, 1), 0); }
inline Mat Z() { return mat2(1, 0, 0, -1); }
inline Mat H() {
  const double r = 1.0 / std::sqrt(2.0);
  return mat2(r, r, r, -r);
}
inline Mat RX(double theta) {
  return mat2(std::cos(theta / 2), cd(0, -std::sin(theta / 2)), cd(0, -std::sin(theta / 2)),
              std::cos(theta / 2));
}

// Multi-qubit gates in their local basis, local index = sum_k bit_k << k where
// bit k belongs to targets[k].
inline Mat permutation(std::size_t dim, const std::vector<std::size_t>& image) {
  Mat m = Mat::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t j = 0; j < dim; ++j) m(static_cast<Eigen::Index>(image[j]), static_cast<Eigen::Index>(j)) = 1;
  return m;
}
// CNOT(control = local bit 0, target = local bit 1).
inline Mat CNOT() { return permutation(4, {0, 3, 2, 1}); }
inline Mat SWAP() { return permutation(4, {0, 2, 1, 3}); }
inline Mat CH() {
  const double r = 1.0 / std::sqrt(2.0);
  Mat m = Mat::Zero(4, 4);
  m(0, 0) = 1;
  m(2, 2) = 1;
  m(1, 1) = r;
  m(1, 3) = r;
  m(3, 1) = r;
  m(3, 3) = -r;
  return m;
}
// CCX(controls = local bits 0 and 1, target = local bit 2).
inline Mat CCX() { return permutation(8, {0, 1, 2, 7, 4, 5, 6, 3}); }

inline Mat gate_by_name(const std::string& name, double theta = 0.0) {
  if (name == "H") return H();
  if (name == "X") return X();
  if (name == "Y") return Y();
  if (name == "Z") return Z();
  if (name == "I") return I2();
  if (name == "RX") return RX(theta);
  if (name == "CNOT") return CNOT();
  if (name == "SWAP") return SWAP();
  if (name == "CH") return CH();
  if (name == "CCX") return CCX();
  throw std::runtime_error("oracle: unknown gate " + name);
}

/// Kronecker product with `a` on the high-order bits.
inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      for (Eigen::Index k = 0; k < b.rows(); ++k)
        for (Eigen::Index l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

/// Full 2^n operator of `g` acting on `targets`, identity elsewhere.
inline Mat embed(const Mat& g, const std::vector<std::size_t>& targets, std::size_t n) {
  const std::size_t dim = std::size_t{1} << n;
  auto local = [&](std::size_t x) {
    std::size_t v = 0;
    for (std::size_t k = 0; k < targets.size(); ++k) v |= static_cast<std::size_t>(bit(x, targets[k])) << k;
    return v;
  };
  auto rest_equal = [&](std::size_t a, std::size_t b) {
    for (std::size_t q = 0; q < n; ++q) {
      bool is_target = false;
      for (auto t : targets) is_target = is_target || t == q;
      if (!is_target && bit(a, q) != bit(b, q)) return false;
    }
    return true;
  };
  Mat m = Mat::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      if (rest_equal(i, j))
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            g(static_cast<Eigen::Index>(local(i)), static_cast<Eigen::Index>(local(j)));
  return m;
}

/// Reduced state on `keep`; output bit k is keep[k].
inline Mat partial_trace(const Mat& rho, std::size_t n, const std::vector<std::size_t>& keep) {
  const std::size_t dim = std::size_t{1} << n;
  const std::size_t out_dim = std::size_t{1} << keep.size();
  Mat out = Mat::Zero(static_cast<Eigen::Index>(out_dim), static_cast<Eigen::Index>(out_dim));
  auto kept = [&](std::size_t x) {
    std::size_t v = 0;
    for (std::size_t k = 0; k < keep.size(); ++k) v |= static_cast<std::size_t>(bit(x, keep[k])) << k;
    return v;
  };
  auto traced_equal = [&](std::size_t a, std::size_t b) {
    for (std::size_t q = 0; q < n; ++q) {
      bool is_kept = false;
      for (auto k : keep) is_kept = is_kept || k == q;
      if (!is_kept && bit(a, q) != bit(b, q)) return false;
    }
    return true;
  };
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      if (traced_equal(i, j))
        out(static_cast<Eigen::Index>(kept(i)), static_cast<Eigen::Index>(kept(j))) +=
            rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  return out;
}

inline Vec basis(std::size_t n, std::size_t index) {
  Vec v = Vec::Zero(static_cast<Eigen::Index>(std::size_t{1} << n));
  v(static_cast<Eigen::Index>(index)) = 1;
  return v;
}

inline Mat projector(const Vec& v) { return v * v.adjoint(); }

inline Mat ket0() { return projector(basis(1, 0)); }
inline Mat ket1() { return projector(basis(1, 1)); }
inline Mat plus() {
  Vec v(2);
  v << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
  return projector(v);
}
inline Mat minus() {
  Vec v(2);
  v << 1 / std::sqrt(2.0), -1 / std::sqrt(2.0);
  return projector(v);
}

inline std::vector<double> eigenvalues(const Mat& m) {
  Eigen::SelfAdjointEigenSolver<Mat> es(m);
  const Eigen::VectorXd& v = es.eigenvalues();
  return {v.data(), v.data() + v.size()};
}

inline double entropy_bits(const Mat& rho) {
  double s = 0.0;
  for (double l : eigenvalues(rho))
    if (l > 1e-12) s -= l * std::log2(l);
  return s;
}

inline double trace_distance(const Mat& a, const Mat& b) {
  double s = 0.0;
  for (double l : eigenvalues(a - b)) s += std::abs(l);
  return 0.5 * s;
}

inline double max_diff(const Mat& a, const Mat& b) { return (a - b).cwiseAbs().maxCoeff(); }

/// Probability of each bit pattern on `qubits`; key character k is qubits[k].
inline std::map<std::string, double> distribution(const Mat& rho, const std::vector<std::size_t>& qubits) {
  std::map<std::string, double> d;
  for (Eigen::Index i = 0; i < rho.rows(); ++i) {
    std::string key;
    for (auto q : qubits) key += bit(static_cast<std::size_t>(i), q) ? '1' : '0';
    d[key] += rho(i, i).real();
  }
  return d;
}

inline double prob(const std::map<std::string, double>& d, const std::string& key) {
  const auto it = d.find(key);
  return it == d.end() ? 0.0 : it->second;
}

// ------------------------------------------------------------- random inputs

struct GateSpec {
  std::string name;
  std::vector<std::size_t> targets;
  double theta = 0.0;
};

inline std::vector<std::size_t> distinct_qubits(std::mt19937_64& rng, std::size_t n, std::size_t k) {
  std::vector<std::size_t> all(n);
  for (std::size_t q = 0; q < n; ++q) all[q] = q;
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(k);
  return all;
}

inline std::vector<GateSpec> random_gates(std::mt19937_64& rng, std::size_t n, std::size_t count) {
  static const char* one[] = {"H", "X", "Y", "Z", "RX"};
  static const char* two[] = {"CNOT", "SWAP", "CH"};
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  std::vector<GateSpec> out;
  for (std::size_t g = 0; g < count; ++g) {
    const std::size_t pick = rng() % (n >= 3 ? 10 : n == 2 ? 9 : 5);
    GateSpec s;
    if (pick < 5) {
      s.name = one[pick];
      s.targets = distinct_qubits(rng, n, 1);
      if (s.name == "RX") s.theta = angle(rng);
    } else if (pick < 9) {
      s.name = two[pick % 3];
      s.targets = distinct_qubits(rng, n, 2);
    } else {
      s.name = "CCX";
      s.targets = distinct_qubits(rng, n, 3);
    }
    out.push_back(s);
  }
  return out;
}

inline Mat circuit_unitary(const std::vector<GateSpec>& gates, std::size_t n) {
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
  Mat u = Mat::Identity(dim, dim);
  for (const auto& g : gates) u = embed(gate_by_name(g.name, g.theta), g.targets, n) * u;
  return u;
}

inline Mat random_unitary(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g;
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
  Mat a(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) a(i, j) = cd(g(rng), g(rng));
  Eigen::HouseholderQR<Mat> qr(a);
  return qr.householderQ();
}

inline Mat random_density(std::mt19937_64& rng, std::size_t n, std::size_t rank = 0) {
  std::normal_distribution<double> g;
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
  const Eigen::Index r = rank == 0 ? dim : static_cast<Eigen::Index>(rank);
  Mat a(dim, r);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < r; ++j) a(i, j) = cd(g(rng), g(rng));
  Mat rho = a * a.adjoint();
  return rho / rho.trace().real();
}

inline Vec random_state(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g;
  Vec v(static_cast<Eigen::Index>(std::size_t{1} << n));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = cd(g(rng), g(rng));
  return v / v.norm();
}

}  // namespace oracle
