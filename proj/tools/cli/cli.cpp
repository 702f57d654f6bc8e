#include "cli/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <variant>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "qlab/circuit_io.hpp"
#include "qlab/ctc.hpp"
#include "qlab/descriptor.hpp"
#include "qlab/epr.hpp"
#include "qlab/matrix_io.hpp"
#include "qlab/szilard.hpp"

namespace qlab::cli {

namespace {

using nlohmann::json;

constexpr int kTableDigits = 6;
constexpr int kMachineDigits = 9;

constexpr const char* kTopHelp =
    "usage: qlab <command> [options]\n"
    "\n"
    "commands:\n"
    "  epr --theta F --phi F [--measured] [--x-basis]\n"
    "  epr sweep --theta-steps K --phi-steps K [--measured]\n"
    "  szilard --cycles N [--skip-reset]\n"
    "  ctc distinguish --input 0|- | --prompt\n"
    "  ctc bb84 --input 0|1|+|- | --prompt\n"
    "  ctc solve --unitary FILE --system-state 0|1|+|- [--tol F] [--n-sys K]\n"
    "  ctc grandfather [--tol F]\n"
    "  audit-locality [--circuit FILE | --theta F --phi F]\n"
    "\n"
    "common options: --format table|json|csv  --seed U64 (default 0)  --shots N (default 0)\n";

// ---------------------------------------------------------------- output model

using Cell = std::variant<std::string, double, std::int64_t, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

struct Output {
  json doc;
  Table table;
};

std::string cell_text(const Cell& c, int digits) {
  return std::visit(
      [digits](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::string>) {
          return v;
        } else if constexpr (std::is_same_v<T, double>) {
          return format_number(v, digits);
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else {
          return std::to_string(v);
        }
      },
      c);
}

void render_table(const Table& t, std::ostream& out) {
  std::vector<std::vector<std::string>> text;
  std::vector<std::size_t> width(t.columns.size());
  for (std::size_t k = 0; k < t.columns.size(); ++k) width[k] = t.columns[k].size();
  for (const auto& row : t.rows) {
    auto& line = text.emplace_back();
    for (std::size_t k = 0; k < row.size(); ++k) {
      line.push_back(cell_text(row[k], kTableDigits));
      width[k] = std::max(width[k], line.back().size());
    }
  }
  auto emit = [&](const std::vector<std::string>& cells, const std::vector<Cell>* types) {
    std::string line;
    for (std::size_t k = 0; k < cells.size(); ++k) {
      const bool numeric = types != nullptr && !std::holds_alternative<std::string>((*types)[k]);
      const std::string pad(width[k] - cells[k].size(), ' ');
      if (k > 0) line += "  ";
      line += numeric ? pad + cells[k] : cells[k] + pad;
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out << line << '\n';
  };
  emit(t.columns, nullptr);
  std::string rule;
  for (std::size_t k = 0; k < width.size(); ++k) {
    if (k > 0) rule += "  ";
    rule += std::string(width[k], '-');
  }
  out << rule << '\n';
  for (std::size_t r = 0; r < text.size(); ++r) emit(text[r], &t.rows[r]);
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

void render_csv(const Table& t, std::ostream& out) {
  auto emit = [&out](const auto& cells, auto&& to_text) {
    for (std::size_t k = 0; k < cells.size(); ++k) {
      if (k > 0) out << ',';
      out << csv_escape(to_text(cells[k]));
    }
    out << '\n';
  };
  emit(t.columns, [](const std::string& s) { return s; });
  for (const auto& row : t.rows) {
    emit(row, [](const Cell& c) { return cell_text(c, kMachineDigits); });
  }
}

void round_numbers(json& j) {
  if (j.is_number_float()) {
    j = std::strtod(format_number(j.get<double>(), kMachineDigits).c_str(), nullptr);
  } else if (j.is_structured()) {
    for (auto& child : j) round_numbers(child);
  }
}

void render(Output& o, Format f, std::ostream& out) {
  switch (f) {
    case Format::Table: render_table(o.table, out); break;
    case Format::Csv: render_csv(o.table, out); break;
    case Format::Json:
      round_numbers(o.doc);
      out << o.doc.dump(2) << '\n';
      break;
  }
}

// ------------------------------------------------------------------ flag access

const std::string* find_flag(const CliInvocation& inv, const std::string& key) {
  const auto it = inv.flags.find(key);
  return it == inv.flags.end() ? nullptr : &it->second;
}

bool flag_set(const CliInvocation& inv, const std::string& key) {
  const std::string* v = find_flag(inv, key);
  return v != nullptr && *v != "false" && *v != "0";
}

double flag_double(const CliInvocation& inv, const std::string& key, double fallback) {
  const std::string* v = find_flag(inv, key);
  if (v == nullptr) return fallback;
  char* end = nullptr;
  const double x = std::strtod(v->c_str(), &end);
  if (v->empty() || *end != '\0') throw UsageError("--" + key + ": not a number: " + *v);
  return x;
}

std::size_t flag_count(const CliInvocation& inv, const std::string& key, std::size_t fallback) {
  const std::string* v = find_flag(inv, key);
  if (v == nullptr) return fallback;
  char* end = nullptr;
  const unsigned long long x = std::strtoull(v->c_str(), &end, 10);
  if (v->empty() || *end != '\0' || v->front() == '-') {
    throw UsageError("--" + key + ": not a count: " + *v);
  }
  return static_cast<std::size_t>(x);
}

ctc::Label label_flag(const CliInvocation& inv, const std::string& key) {
  const std::string* v = find_flag(inv, key);
  if (v == nullptr) throw UsageError("--" + key + " is required");
  try {
    return ctc::parse_label(*v);
  } catch (const Error& e) {
    throw UsageError("--" + key + ": " + e.what());
  }
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

// --------------------------------------------------------------- shared pieces

json counts_json(const Counts& counts) {
  json o = json::object();
  for (const auto& [key, n] : counts) o[key] = n;
  return o;
}

void add_sampling(Output& o, const CliInvocation& inv, const Distribution& dist) {
  if (inv.shots == 0) return;
  const Counts counts = sample(dist, inv.shots, inv.seed);
  o.doc["shots"] = inv.shots;
  o.doc["seed"] = inv.seed;
  o.doc["counts"] = counts_json(counts);
  for (const auto& [key, n] : counts) {
    o.table.rows.push_back({"count(" + key + ")", static_cast<std::int64_t>(n)});
  }
}

// -------------------------------------------------------------------- commands

json dependence_json(const epr::ParamDependence& d) {
  return {{"depends_on_theta", d.on_theta},
          {"depends_on_phi", d.on_phi},
          {"delta_theta", d.delta_theta},
          {"delta_phi", d.delta_phi}};
}

Output run_epr(const CliInvocation& inv) {
  epr::EprConfig cfg;
  cfg.theta = flag_double(inv, "theta", 0.0);
  cfg.phi = flag_double(inv, "phi", 0.0);
  cfg.deferred = !flag_set(inv, "measured");
  cfg.x_basis = flag_set(inv, "x-basis");

  const Distribution dist = run_density(epr::build_epr_circuit(cfg)).distribution;
  double p_one = 0.0;
  double correlation = 0.0;
  for (const auto& [key, p] : dist) {
    if (key[epr::kCheckClbit] == '1') p_one += p;
    correlation += key[epr::kAliceClbit] == key[epr::kBobClbit] ? p : -p;
  }

  Output o;
  o.doc = {{"theta", cfg.theta},
           {"phi", cfg.phi},
           {"mode", cfg.deferred ? "deferred" : "measured"},
           {"x_basis", cfg.x_basis},
           {"p_check_one", p_one},
           {"correlation", correlation},
           {"distribution", distribution_to_json(dist)}};
  o.table.columns = {"quantity", "value"};
  o.table.rows = {{"theta", cfg.theta},
                  {"phi", cfg.phi},
                  {"mode", std::string(cfg.deferred ? "deferred" : "measured")},
                  {"p_check_one", p_one},
                  {"correlation", correlation}};
  for (const auto& [key, p] : dist) o.table.rows.push_back({"P(" + key + ")", p});
  if (cfg.deferred) {
    const epr::EprReport rep = epr::info_flow_report(cfg);
    o.doc["info_flow"] = {{"alice_memory", dependence_json(rep.alice_memory)},
                          {"bob_memory", dependence_json(rep.bob_memory)},
                          {"check", dependence_json(rep.check)}};
    const std::pair<const char*, const epr::ParamDependence*> parts[] = {
        {"alice_memory", &rep.alice_memory}, {"bob_memory", &rep.bob_memory}, {"check", &rep.check}};
    for (const auto& [name, dep] : parts) {
      o.table.rows.push_back({std::string(name) + " depends on theta", dep->on_theta});
      o.table.rows.push_back({std::string(name) + " depends on phi", dep->on_phi});
    }
  }
  add_sampling(o, inv, dist);
  return o;
}

Output run_epr_sweep(const CliInvocation& inv) {
  const bool deferred = !flag_set(inv, "measured");
  const auto thetas = epr::angle_grid(flag_count(inv, "theta-steps", 17));
  const auto phis = epr::angle_grid(flag_count(inv, "phi-steps", 17));
  Output o;
  o.doc = {{"mode", deferred ? "deferred" : "measured"}, {"rows", json::array()}};
  o.table.columns = {"theta", "phi", "p_check_one"};
  for (const auto& r : epr::sweep(thetas, phis, deferred)) {
    o.doc["rows"].push_back({{"theta", r.theta}, {"phi", r.phi}, {"p_check_one", r.p_check_one}});
    o.table.rows.push_back({r.theta, r.phi, r.p_check_one});
  }
  return o;
}

Output run_szilard(const CliInvocation& inv) {
  szilard::SzilardConfig cfg;
  cfg.cycles = flag_count(inv, "cycles", 1);
  cfg.skip_reset = flag_set(inv, "skip-reset");
  cfg.shots = inv.shots;
  const szilard::CycleLedger ledger = szilard::run_cycles(cfg, inv.seed);

  Output o;
  o.doc = json::array();
  o.table.columns = {"cycle",          "expected_work", "sampled_work", "S_mem_initial",
                     "S_mem_pre_reset", "S_mem_post",   "I_measured",   "I_decorrelated",
                     "erased_entropy"};
  for (const auto& r : ledger.records) {
    json counts = json::object();
    for (const auto& [work, n] : r.sampled_work_counts) counts[std::to_string(work)] = n;
    o.doc.push_back({{"cycle", r.cycle},
                     {"expected_work", r.expected_work},
                     {"sampled_work_mean", r.sampled_work_mean ? json(*r.sampled_work_mean) : json()},
                     {"sampled_work_counts", counts},
                     {"memory_entropy_initial", r.memory_entropy_initial},
                     {"memory_entropy_pre_reset", r.memory_entropy_pre_reset},
                     {"memory_entropy_post", r.memory_entropy_post},
                     {"mutual_info_after_measurement", r.mutual_info_after_measurement},
                     {"mutual_info_after_decorrelation", r.mutual_info_after_decorrelation},
                     {"erased_entropy", r.erased_entropy},
                     {"memory_out", matrix_to_json(r.memory_out.matrix())}});
    o.table.rows.push_back({static_cast<std::int64_t>(r.cycle), r.expected_work,
                            r.sampled_work_mean ? Cell(*r.sampled_work_mean) : Cell(std::string("-")),
                            r.memory_entropy_initial, r.memory_entropy_pre_reset,
                            r.memory_entropy_post, r.mutual_info_after_measurement,
                            r.mutual_info_after_decorrelation, r.erased_entropy});
  }
  return o;
}

Output ctc_output(const CliInvocation& inv, std::string_view input, const ctc::CtcRun& run) {
  const ctc::FixedPointSolution& s = run.solution;
  Output o;
  o.doc = {{"command", std::string(to_string(inv.command))},
           {"distribution", distribution_to_json(run.distribution)},
           {"fixed_point", matrix_to_json(s.rho_loop.matrix())},
           {"residual", s.residual},
           {"iterations", s.iterations},
           {"method", std::string(ctc::to_string(s.method))},
           {"multiplicity_hint", s.multiplicity_hint},
           {"entropy_bits", s.entropy_bits}};
  if (!input.empty()) o.doc["input"] = std::string(input);
  o.table.columns = {"quantity", "value"};
  if (!input.empty()) o.table.rows.push_back({"input", std::string(input)});
  for (const auto& [key, p] : run.distribution) o.table.rows.push_back({"P(" + key + ")", p});
  for (Eigen::Index i = 0; i < s.rho_loop.matrix().rows(); ++i) {
    o.table.rows.push_back({"loop diag[" + std::to_string(i) + "]", s.rho_loop(i, i).real()});
  }
  o.table.rows.push_back({"residual", s.residual});
  o.table.rows.push_back({"iterations", static_cast<std::int64_t>(s.iterations)});
  o.table.rows.push_back({"method", std::string(ctc::to_string(s.method))});
  o.table.rows.push_back({"multiplicity_hint", static_cast<std::int64_t>(s.multiplicity_hint)});
  o.table.rows.push_back({"loop entropy_bits", s.entropy_bits});
  add_sampling(o, inv, run.distribution);
  return o;
}

Output run_ctc_protocol(const CliInvocation& inv, ctc::Protocol protocol, std::ostream& err,
                        std::istream& in) {
  ctc::Label label{};
  if (flag_set(inv, "prompt")) {
    err << (protocol == ctc::Protocol::Single
                ? "Enter '0' to prepare |0> or '-' to prepare |->: "
                : "Enter '0', '1', '+' or '-' to prepare the input: ");
    std::string line;
    if (!std::getline(in, line)) throw UsageError("--prompt: no input on standard input");
    try {
      label = ctc::parse_label(trim(line));
    } catch (const Error& e) {
      throw UsageError(std::string("--prompt: ") + e.what());
    }
  } else {
    label = label_flag(inv, "input");
  }
  const ctc::CtcProblem problem = ctc::protocol_problem(protocol, label);
  const QubitList readout = ctc::protocol_readout(protocol);
  return ctc_output(inv, ctc::to_string(label), ctc::run_ctc_circuit(problem, readout));
}

Output run_ctc_solve(const CliInvocation& inv) {
  const std::string* path = find_flag(inv, "unitary");
  if (path == nullptr) throw UsageError("--unitary is required");
  const ctc::Label label =
      find_flag(inv, "system-state") ? label_flag(inv, "system-state") : ctc::Label::Zero;
  const double tol = flag_double(inv, "tol", ctc::kDefaultTolerance);
  const std::size_t n_sys = flag_count(inv, "n-sys", 1);

  ComplexMatrix u = load_unitary(*path);
  const std::size_t total = qubits_for_dim(static_cast<std::size_t>(u.rows()));
  if (n_sys >= total) {
    throw Error(ErrorCode::DimensionMismatch, "--n-sys leaves no loop qubits in a " +
                                                  std::to_string(total) + "-qubit unitary");
  }
  DensityMatrix system = DensityMatrix::zero_state(0);
  if (n_sys > 0) {
    system = tensor(DensityMatrix::zero_state(n_sys - 1), ctc::label_state(label).to_density());
  }
  const ctc::CtcProblem problem = ctc::make_problem(std::move(u), std::move(system), total - n_sys);
  QubitList readout(n_sys);
  for (Qubit q = 0; q < n_sys; ++q) readout[q] = q;
  return ctc_output(inv, n_sys > 0 ? ctc::to_string(label) : "",
                    ctc::run_ctc_circuit(problem, readout, tol));
}

Output run_ctc_grandfather(const CliInvocation& inv) {
  const double tol = flag_double(inv, "tol", ctc::kDefaultTolerance);
  const ctc::CtcProblem problem =
      ctc::make_problem(pauli_matrix(Pauli::X), DensityMatrix::zero_state(0), 1);
  return ctc_output(inv, "", ctc::run_ctc_circuit(problem, {}, tol));
}

Output run_audit(const CliInvocation& inv) {
  Circuit c(1, 0);
  if (const std::string* path = find_flag(inv, "circuit")) {
    c = load_circuit(*path);
  } else {
    epr::EprConfig cfg;
    cfg.theta = flag_double(inv, "theta", 0.0);
    cfg.phi = flag_double(inv, "phi", 0.0);
    c = epr::build_epr_unitary(cfg, epr::Stage::Full);
  }
  const LocalityReport report = locality_audit(c);
  Output o;
  o.doc = to_json(report);
  o.table.columns = {"instr", "max_offsupport_delta", "pass"};
  for (const auto& s : report.steps) {
    o.table.rows.push_back({static_cast<std::int64_t>(s.instruction), s.max_offsupport_delta, s.pass});
  }
  o.table.rows.push_back({std::string("overall"), std::string(""), report.overall});
  return o;
}

// ---------------------------------------------------------------------- parsing

struct CommandName {
  const char* word;
  const char* sub;
  Command command;
};

constexpr CommandName kCommands[] = {
    {"epr", "sweep", Command::EprSweep},
    {"epr", nullptr, Command::Epr},
    {"szilard", nullptr, Command::Szilard},
    {"ctc", "distinguish", Command::CtcDistinguish},
    {"ctc", "bb84", Command::CtcBb84},
    {"ctc", "solve", Command::CtcSolve},
    {"ctc", "grandfather", Command::CtcGrandfather},
    {"audit-locality", nullptr, Command::AuditLocality},
};

std::pair<Command, std::size_t> resolve_command(std::span<const std::string> args) {
  if (args.empty()) throw UsageError("missing command\n" + std::string(kTopHelp));
  const std::string& head = args[0];
  if (head == "--help" || head == "-h" || head == "help") throw HelpRequested(kTopHelp);
  for (const auto& c : kCommands) {
    if (head == c.word && c.sub != nullptr && args.size() > 1 && args[1] == c.sub) return {c.command, 2};
  }
  for (const auto& c : kCommands) {
    if (to_string(c.command) == head || (head == c.word && c.sub == nullptr)) return {c.command, 1};
  }
  if (head == "ctc") {
    throw UsageError(args.size() > 1 ? "unknown ctc subcommand '" + args[1] + "'"
                                     : "ctc needs a subcommand: distinguish, bb84, solve, grandfather");
  }
  throw UsageError("unknown command '" + head + "'");
}

}  // namespace

std::string_view to_string(Command c) noexcept {
  switch (c) {
    case Command::Epr: return "epr";
    case Command::EprSweep: return "epr-sweep";
    case Command::Szilard: return "szilard";
    case Command::CtcDistinguish: return "ctc-distinguish";
    case Command::CtcBb84: return "ctc-bb84";
    case Command::CtcSolve: return "ctc-solve";
    case Command::CtcGrandfather: return "ctc-grandfather";
    case Command::AuditLocality: return "audit-locality";
  }
  return "?";
}

std::string_view to_string(Format f) noexcept {
  switch (f) {
    case Format::Table: return "table";
    case Format::Json: return "json";
    case Format::Csv: return "csv";
  }
  return "?";
}

std::string format_number(double x, int significant_digits) {
  if (x == 0.0) x = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", significant_digits, x);
  std::string s(buf);
  if (s == "-0") s = "0";
  return s;
}

CliInvocation parse(std::span<const std::string> args) {
  const auto [command, consumed] = resolve_command(args);
  CLI::App app{"", "qlab " + std::string(to_string(command))};

  std::string format = "table";
  std::uint64_t seed = 0;
  std::uint64_t shots = 0;
  app.add_option("--format", format, "table, json or csv")
      ->check(CLI::IsMember({"table", "json", "csv"}));
  app.add_option("--seed", seed, "sampling seed (default 0)");
  app.add_option("--shots", shots, "seeded samples on top of the exact result (default 0)");

  double theta = 0.0, phi = 0.0, tol = ctc::kDefaultTolerance;
  std::size_t theta_steps = 17, phi_steps = 17, cycles = 1, n_sys = 1;
  std::string input, system_state, unitary, circuit;
  bool measured = false, x_basis = false, skip_reset = false, prompt = false;

  switch (command) {
    case Command::Epr:
      app.add_option("--theta", theta, "Alice's rotation angle");
      app.add_option("--phi", phi, "Bob's rotation angle");
      app.add_flag("--measured", measured, "measure before the parity check");
      app.add_flag("--x-basis", x_basis, "read out in the X basis");
      break;
    case Command::EprSweep:
      app.add_option("--theta-steps", theta_steps)->check(CLI::PositiveNumber);
      app.add_option("--phi-steps", phi_steps)->check(CLI::PositiveNumber);
      app.add_flag("--measured", measured);
      break;
    case Command::Szilard:
      app.add_option("--cycles", cycles)->check(CLI::Range(std::size_t{1}, std::size_t{100000}));
      app.add_flag("--skip-reset", skip_reset, "keep the demon memory between cycles");
      break;
    case Command::CtcDistinguish:
    case Command::CtcBb84: {
      auto* in_opt = app.add_option("--input", input, "input label");
      auto* prompt_opt = app.add_flag("--prompt", prompt, "read the label from standard input");
      in_opt->excludes(prompt_opt);
      break;
    }
    case Command::CtcSolve:
      app.add_option("--unitary", unitary, "unitary matrix file")->required()->check(CLI::ExistingFile);
      app.add_option("--system-state", system_state, "system input label");
      app.add_option("--tol", tol)->check(CLI::PositiveNumber);
      app.add_option("--n-sys", n_sys, "system qubits (low-order)");
      break;
    case Command::CtcGrandfather:
      app.add_option("--tol", tol)->check(CLI::PositiveNumber);
      break;
    case Command::AuditLocality: {
      auto* c_opt = app.add_option("--circuit", circuit, "circuit file")->check(CLI::ExistingFile);
      app.add_option("--theta", theta)->excludes(c_opt);
      app.add_option("--phi", phi)->excludes(c_opt);
      break;
    }
  }

  std::vector<std::string> rest(args.begin() + static_cast<std::ptrdiff_t>(consumed), args.end());
  std::reverse(rest.begin(), rest.end());
  try {
    app.parse(rest);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  CliInvocation inv;
  inv.command = command;
  inv.format = format == "json" ? Format::Json : format == "csv" ? Format::Csv : Format::Table;
  inv.seed = seed;
  inv.shots = shots;
  for (const CLI::Option* opt : app.get_options()) {
    if (opt->count() == 0 || opt->get_lnames().empty()) continue;
    const std::string& name = opt->get_lnames().front();
    if (name == "help") continue;
    inv.flags[name] = opt->get_expected_min() == 0 ? "true" : opt->results().back();
  }

  if (command == Command::CtcDistinguish || command == Command::CtcBb84) {
    if (!prompt && input.empty()) throw UsageError("--input is required (or use --prompt)");
    if (!input.empty()) (void)label_flag(inv, "input");
  }
  if (command == Command::CtcSolve && !system_state.empty()) (void)label_flag(inv, "system-state");
  return inv;
}

int execute(const CliInvocation& inv, std::ostream& out, std::ostream& err, std::istream& in) {
  try {
    Output o;
    switch (inv.command) {
      case Command::Epr: o = run_epr(inv); break;
      case Command::EprSweep: o = run_epr_sweep(inv); break;
      case Command::Szilard: o = run_szilard(inv); break;
      case Command::CtcDistinguish: o = run_ctc_protocol(inv, ctc::Protocol::Single, err, in); break;
      case Command::CtcBb84: o = run_ctc_protocol(inv, ctc::Protocol::Bb84, err, in); break;
      case Command::CtcSolve: o = run_ctc_solve(inv); break;
      case Command::CtcGrandfather: o = run_ctc_grandfather(inv); break;
      case Command::AuditLocality: o = run_audit(inv); break;
    }
    render(o, inv.format, out);
    return kExitOk;
  } catch (const UsageError& e) {
    err << "qlab: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "qlab: " << e.what() << '\n';
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "qlab: " << e.what() << '\n';
    return kExitFailure;
  }
}

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err, std::istream& in) {
  CliInvocation inv;
  try {
    inv = parse(args);
  } catch (const HelpRequested& h) {
    out << h.what();
    return kExitOk;
  } catch (const UsageError& e) {
    err << "qlab: " << e.what() << '\n';
    return kExitUsage;
  }
  return execute(inv, out, err, in);
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err, std::istream& in) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, out, err, in);
}

}  // namespace qlab::cli
