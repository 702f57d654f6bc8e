#include "qlab/ctc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qlab::ctc {

namespace {

constexpr double kUnitEigenvalue = 1e-8;
constexpr double kNullSingularValue = 1e-9;
constexpr std::size_t kCesaroCheckEvery = 16;
constexpr std::size_t kEntropyAscentSteps = 500;

QubitList loop_qubits(const CtcProblem& p) {
  QubitList q(p.n_loop);
  std::iota(q.begin(), q.end(), p.n_sys);
  return q;
}

QubitList system_qubits(const CtcProblem& p) {
  QubitList q(p.n_sys);
  std::iota(q.begin(), q.end(), 0);
  return q;
}

// The map on arbitrary (not necessarily positive) loop operators.
ComplexMatrix apply_map(const CtcProblem& p, const ComplexMatrix& x) {
  const ComplexMatrix joint = tensor(x, p.system_state.matrix());
  const ComplexMatrix out = p.u * joint * p.u.adjoint();
  const QubitList keep = loop_qubits(p);
  return partial_trace(out, p.n_sys + p.n_loop, keep);
}

double residual_of(const CtcProblem& p, const DensityMatrix& rho) {
  return trace_distance(consistency_map(p, rho), rho);
}

double frob_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a.adjoint() * b).trace().real();
}

// Orthonormal (Frobenius) basis of Hermitian matrices spanning the fixed
// space of the map.
std::vector<ComplexMatrix> fixed_space_basis(const ComplexMatrix& super, Eigen::Index d) {
  const auto dd = d * d;
  const ComplexMatrix shifted = super - ComplexMatrix::Identity(dd, dd);
  Eigen::BDCSVD<ComplexMatrix> svd(shifted, Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  std::vector<ComplexMatrix> herm;
  for (Eigen::Index k = 0; k < dd; ++k) {
    if (sv(k) > kNullSingularValue) continue;
    const ComplexVector v = svd.matrixV().col(k);
    const ComplexMatrix f = Eigen::Map<const ComplexMatrix>(v.data(), d, d);
    herm.push_back(0.5 * (f + f.adjoint()));
    herm.push_back(Complex{0.0, -0.5} * (f - f.adjoint()));
  }
  std::vector<ComplexMatrix> basis;
  for (auto& h : herm) {
    for (const auto& b : basis) h -= frob_inner(b, h) * b;
    const double norm = std::sqrt(std::max(frob_inner(h, h), 0.0));
    if (norm > 1e-8) basis.push_back(h / norm);
  }
  return basis;
}

struct Eig {
  Eigen::VectorXd values;
  ComplexMatrix vectors;
};

Eig hermitian_eig(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (m + m.adjoint()));
  return {es.eigenvalues(), es.eigenvectors()};
}

double entropy_of(const Eigen::VectorXd& lambda) {
  double s = 0.0;
  for (double l : lambda) {
    if (l > tol::kEntropyFloor) s -= l * std::log2(l);
  }
  return s;
}

// Projected gradient ascent of the von Neumann entropy over
// {start + sum_m c_m T_m} intersected with the PSD cone, where the T_m are
// traceless Hermitian fixed points.
ComplexMatrix maximize_entropy(const ComplexMatrix& start, const std::vector<ComplexMatrix>& basis) {
  std::vector<ComplexMatrix> dirs;
  for (const auto& b : basis) {
    ComplexMatrix t = b - b.trace().real() * start;
    for (const auto& prev : dirs) t -= frob_inner(prev, t) * prev;
    const double norm = std::sqrt(std::max(frob_inner(t, t), 0.0));
    if (norm > 1e-8) dirs.push_back(t / norm);
  }
  ComplexMatrix rho = start;
  if (dirs.empty()) return rho;
  Eig eig = hermitian_eig(rho);
  double s = entropy_of(eig.values);
  double step = 1.0;
  for (std::size_t it = 0; it < kEntropyAscentSteps; ++it) {
    Eigen::VectorXd log_l = eig.values.unaryExpr([](double l) { return std::log2(std::max(l, 1e-14)); });
    const ComplexMatrix log_rho =
        eig.vectors * log_l.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
    ComplexMatrix grad = ComplexMatrix::Zero(rho.rows(), rho.cols());
    double gnorm2 = 0.0;
    for (const auto& t : dirs) {
      const double g = -frob_inner(t, log_rho);
      grad += g * t;
      gnorm2 += g * g;
    }
    if (std::sqrt(gnorm2) < 1e-10) break;
    bool improved = false;
    step = std::min(step * 2.0, 1.0);
    while (step > 1e-14) {
      const ComplexMatrix trial = rho + step * grad;
      Eig te = hermitian_eig(trial);
      if (te.values.minCoeff() >= -1e-14) {
        const double st = entropy_of(te.values.cwiseMax(0.0));
        if (st > s + 1e-15) {
          rho = trial;
          eig = std::move(te);
          s = st;
          improved = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!improved) break;
  }
  return rho;
}

}  // namespace

std::string_view to_string(Method m) noexcept {
  return m == Method::Iteration ? "iteration" : "eigensolve";
}

CtcProblem make_problem(ComplexMatrix u, DensityMatrix system_state, std::size_t n_loop) {
  const std::size_t n_sys = system_state.num_qubits();
  if (n_loop == 0) throw Error(ErrorCode::DimensionMismatch, "loop needs at least one qubit");
  if (u.rows() != u.cols() || u.rows() != (Eigen::Index{1} << (n_sys + n_loop))) {
    throw Error(ErrorCode::DimensionMismatch,
                "unitary dimension does not match system + loop qubit count");
  }
  if (!is_unitary(u)) throw Error(ErrorCode::NonUnitary, "interaction is not unitary");
  return CtcProblem{std::move(u), std::move(system_state), n_sys, n_loop};
}

DensityMatrix consistency_map(const CtcProblem& p, const DensityMatrix& rho_loop) {
  if (rho_loop.num_qubits() != p.n_loop) {
    throw Error(ErrorCode::DimensionMismatch, "loop state width differs from problem");
  }
  return DensityMatrix::assume_valid(apply_map(p, rho_loop.matrix()));
}

ComplexMatrix superoperator(const CtcProblem& p) {
  const auto d = Eigen::Index{1} << p.n_loop;
  ComplexMatrix s(d * d, d * d);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) {
      ComplexMatrix e = ComplexMatrix::Zero(d, d);
      e(i, j) = 1.0;
      const ComplexMatrix out = apply_map(p, e);
      s.col(i + d * j) = Eigen::Map<const ComplexVector>(out.data(), d * d);
    }
  }
  return s;
}

FixedPointSolution solve_fixed_point(const CtcProblem& p, double tol, std::size_t max_iter) {
  const auto d = Eigen::Index{1} << p.n_loop;
  FixedPointSolution sol;
  std::optional<DensityMatrix> found;

  DensityMatrix rho = DensityMatrix::maximally_mixed(p.n_loop);
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  std::size_t k = 0;
  for (k = 1; k <= max_iter; ++k) {
    DensityMatrix next = consistency_map(p, rho);
    if (trace_distance(next, rho) <= tol) {
      found = rho;
      break;
    }
    sum += rho.matrix();
    if (k % kCesaroCheckEvery == 0) {
      DensityMatrix avg = DensityMatrix::assume_valid(sum / static_cast<double>(k));
      if (residual_of(p, avg) <= tol) {
        found = std::move(avg);
        break;
      }
    }
    rho = std::move(next);
  }
  sol.iterations = std::min(k, max_iter);

  const ComplexMatrix super = superoperator(p);
  Eigen::ComplexEigenSolver<ComplexMatrix> ces(super, false);
  for (Eigen::Index i = 0; i < ces.eigenvalues().size(); ++i) {
    if (std::abs(ces.eigenvalues()(i) - Complex{1.0, 0.0}) < kUnitEigenvalue) {
      ++sol.multiplicity_hint;
    }
  }

  const std::vector<ComplexMatrix> basis = fixed_space_basis(super, d);
  if (basis.empty()) throw Error(ErrorCode::NoConvergence, "map has no fixed space");

  // Orthogonal projection onto the fixed space, then back onto the states.
  auto project = [&](const ComplexMatrix& x) {
    ComplexMatrix y = ComplexMatrix::Zero(d, d);
    for (const auto& b : basis) y += frob_inner(b, x) * b;
    const Eig e = hermitian_eig(y);
    Eigen::VectorXd l = e.values.cwiseMax(0.0);
    if (l.sum() <= 0.0) throw Error(ErrorCode::NoConvergence, "projected fixed point vanished");
    l /= l.sum();
    return ComplexMatrix(e.vectors * l.cast<Complex>().asDiagonal() * e.vectors.adjoint());
  };

  ComplexMatrix candidate;
  if (found) {
    candidate = project(found->matrix());
    sol.method = Method::Iteration;
  } else {
    candidate = project(sum / static_cast<double>(sol.iterations));
    sol.method = Method::Eigensolve;
  }

  if (sol.multiplicity_hint > 1) candidate = maximize_entropy(candidate, basis);

  candidate /= candidate.trace().real();
  DensityMatrix result = DensityMatrix::zero_state(p.n_loop);
  try {
    result = DensityMatrix::from_matrix(0.5 * (candidate + candidate.adjoint()));
  } catch (const Error& e) {
    throw Error(ErrorCode::NoConvergence, std::string("fixed point is not a state: ") + e.what());
  }
  sol.residual = residual_of(p, result);
  if (sol.residual > std::max(tol, 1e-10)) {
    throw Error(ErrorCode::NoConvergence,
                "residual " + std::to_string(sol.residual) + " after " +
                    std::to_string(sol.iterations) + " iterations and eigensolve");
  }
  sol.entropy_bits = vn_entropy_bits(result);
  sol.rho_loop = std::move(result);
  return sol;
}

CtcRun run_ctc_circuit(const CtcProblem& p, std::span<const Qubit> measure, double tol) {
  if (!measure.empty()) check_targets(measure, p.n_sys);
  CtcRun run;
  run.solution = solve_fixed_point(p, tol);
  const ComplexMatrix joint = tensor(run.solution.rho_loop.matrix(), p.system_state.matrix());
  const DensityMatrix out = DensityMatrix::assume_valid(p.u * joint * p.u.adjoint());
  const QubitList sys = system_qubits(p);
  run.system_out = p.n_sys == 0 ? DensityMatrix::zero_state(0) : partial_trace(out, sys);
  run.distribution =
      measure.empty() ? Distribution{{"", 1.0}} : measurement_distribution(run.system_out, measure);
  return run;
}

Circuit distinguisher_interaction() {
  Circuit c(2, 0);
  c.swap(0, 1).ch(0, 1);
  return c;
}

ComplexMatrix distinguisher_unitary() { return distinguisher_interaction().unitary(); }

Circuit bb84_interaction() {
  constexpr Qubit s = 0, a = 1, m1 = 2, m0 = 3;
  Circuit c(4, 0);
  // Hand the loop label to the system and the input to the loop.
  c.swap(s, m1).swap(a, m0);
  // Label bit k0 picks the basis, k1 the expected bit in that basis.
  c.ch(a, m1);
  c.cx(a, m0);
  // On a mismatch with k1 = 1 the loop steps to the next label; a mismatch
  // with k1 = 0 already moves it through m1.
  c.x(m1).ccx(s, m1, m0).x(m1);
  return c;
}

ComplexMatrix bb84_unitary() { return bb84_interaction().unitary(); }

std::string_view to_string(Protocol p) noexcept { return p == Protocol::Single ? "single" : "bb84"; }

std::string_view to_string(Label l) noexcept {
  switch (l) {
    case Label::Zero: return "0";
    case Label::One: return "1";
    case Label::Plus: return "+";
    case Label::Minus: return "-";
  }
  return "?";
}

Label parse_label(std::string_view text) {
  if (text == "0") return Label::Zero;
  if (text == "1") return Label::One;
  if (text == "+" || text == "plus") return Label::Plus;
  if (text == "-" || text == "minus" || text == "\xE2\x88\x92") return Label::Minus;
  throw Error(ErrorCode::BadLabel, "unknown input label '" + std::string(text) + "'");
}

Protocol parse_protocol(std::string_view text) {
  if (text == "single" || text == "distinguish") return Protocol::Single;
  if (text == "bb84") return Protocol::Bb84;
  throw Error(ErrorCode::BadParams, "unknown protocol '" + std::string(text) + "'");
}

StateVector label_state(Label l) {
  const double r = 1.0 / std::sqrt(2.0);
  ComplexVector v(2);
  switch (l) {
    case Label::Zero: v << 1.0, 0.0; break;
    case Label::One: v << 0.0, 1.0; break;
    case Label::Plus: v << r, r; break;
    case Label::Minus: v << r, -r; break;
  }
  return StateVector::from_amplitudes(std::move(v));
}

void check_label(Protocol p, Label l) {
  if (p == Protocol::Single && l != Label::Zero && l != Label::Minus) {
    throw Error(ErrorCode::BadLabel,
                "the single-state distinguisher accepts only '0' and '-', got '" +
                    std::string(to_string(l)) + "'");
  }
}

CtcProblem protocol_problem(Protocol p, Label l) {
  const DensityMatrix input = label_state(l).to_density();
  if (p == Protocol::Single) return make_problem(distinguisher_unitary(), input, 1);
  // Ancilla a (qubit 1) starts in |0>.
  return make_problem(bb84_unitary(), tensor(DensityMatrix::zero_state(1), input), 2);
}

QubitList protocol_readout(Protocol p) {
  return p == Protocol::Single ? QubitList{0} : QubitList{0, 1};
}

Circuit classical_control_demo(Label l, Protocol p) {
  check_label(p, l);
  auto prepare_system = [l](Circuit& c) {
    switch (l) {
      case Label::Zero: break;
      case Label::One: c.x(0); break;
      case Label::Plus: c.h(0); break;
      case Label::Minus: c.h(0).z(0); break;
    }
  };
  if (p == Protocol::Single) {
    Circuit c(2, 1);
    prepare_system(c);
    if (l == Label::Minus) c.x(1);
    const Circuit interaction = distinguisher_interaction();
    for (const auto& instr : interaction.instructions()) c.append(instr);
    c.measure(0, 0);
    return c;
  }
  Circuit c(4, 2);
  prepare_system(c);
  // Loop register (m1, m0) = label code.
  if (l == Label::One || l == Label::Minus) c.x(2);
  if (l == Label::Plus || l == Label::Minus) c.x(3);
  const Circuit interaction = bb84_interaction();
  for (const auto& instr : interaction.instructions()) c.append(instr);
  c.measure(0, 0).measure(1, 1);
  return c;
}

double nonlinearity_witness(const ComplexMatrix& u, std::size_t n_loop, const DensityMatrix& a,
                            const DensityMatrix& b) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::DimensionMismatch, "inputs differ in width");
  const DensityMatrix mix = DensityMatrix::assume_valid(0.5 * (a.matrix() + b.matrix()));
  const auto fa = solve_fixed_point(make_problem(u, a, n_loop));
  const auto fb = solve_fixed_point(make_problem(u, b, n_loop));
  const auto fm = solve_fixed_point(make_problem(u, mix, n_loop));
  const DensityMatrix linear =
      DensityMatrix::assume_valid(0.5 * (fa.rho_loop.matrix() + fb.rho_loop.matrix()));
  return trace_distance(fm.rho_loop, linear);
}

}  // namespace qlab::ctc
