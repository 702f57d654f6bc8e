#include "qlab/circuit_io.hpp"

#include <fstream>

#include "qlab/matrix_io.hpp"

namespace qlab {

namespace {

template <typename T>
T required(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw Error(ErrorCode::Parse, std::string("missing \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("bad \"") + key + "\": " + e.what());
  }
}

}  // namespace

nlohmann::json circuit_to_json(const Circuit& c) {
  nlohmann::json instrs = nlohmann::json::array();
  for (const auto& instr : c.instructions()) {
    if (const auto* u = std::get_if<UnitaryOp>(&instr)) {
      nlohmann::json o = {{"op", "unitary"}, {"kind", to_string(u->gate.kind)},
                          {"targets", u->targets}};
      if (u->gate.kind == GateKind::RX) o["theta"] = u->gate.theta;
      instrs.push_back(std::move(o));
    } else if (const auto* ch = std::get_if<ChannelOp>(&instr)) {
      nlohmann::json ops = nlohmann::json::array();
      for (const auto& k : ch->kraus.operators()) ops.push_back(matrix_to_json(k));
      nlohmann::json o = {{"op", "channel"}, {"kraus", std::move(ops)}, {"targets", ch->targets}};
      if (!ch->label.empty()) o["label"] = ch->label;
      instrs.push_back(std::move(o));
    } else if (const auto* r = std::get_if<ResetOp>(&instr)) {
      instrs.push_back({{"op", "reset"}, {"target", r->target}});
    } else {
      const auto& m = std::get<MeasureOp>(instr);
      instrs.push_back({{"op", "measure"}, {"target", m.target}, {"clbit", m.clbit}});
    }
  }
  return {{"n_qubits", c.n_qubits()}, {"n_clbits", c.n_clbits()}, {"instructions", instrs}};
}

Circuit circuit_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorCode::Parse, "circuit must be a JSON object");
  Circuit c(required<std::size_t>(j, "n_qubits"),
            j.contains("n_clbits") ? required<std::size_t>(j, "n_clbits") : 0);
  if (!j.contains("instructions") || !j["instructions"].is_array()) {
    throw Error(ErrorCode::Parse, "missing \"instructions\" array");
  }
  for (const auto& o : j["instructions"]) {
    const auto op = required<std::string>(o, "op");
    if (op == "unitary") {
      const GateKind kind = gate_kind_from_string(required<std::string>(o, "kind"));
      std::vector<double> params;
      if (o.contains("theta")) params.push_back(required<double>(o, "theta"));
      c.gate(kind, required<QubitList>(o, "targets"), params);
    } else if (op == "channel") {
      const auto targets = required<QubitList>(o, "targets");
      const std::string label = o.contains("label") ? required<std::string>(o, "label") : "";
      if (o.contains("depolarizing")) {
        c.channel(depolarizing_kraus(required<double>(o, "depolarizing")), targets,
                  label.empty() ? "depolarizing" : label);
      } else {
        if (!o.contains("kraus") || !o["kraus"].is_array()) {
          throw Error(ErrorCode::Parse, "channel needs \"kraus\" or \"depolarizing\"");
        }
        std::vector<ComplexMatrix> ops;
        for (const auto& m : o["kraus"]) ops.push_back(matrix_from_json(m));
        c.channel(KrausSet(std::move(ops)), targets, label);
      }
    } else if (op == "reset") {
      c.reset(required<Qubit>(o, "target"));
    } else if (op == "measure") {
      c.measure(required<Qubit>(o, "target"), required<std::size_t>(o, "clbit"));
    } else {
      throw Error(ErrorCode::Parse, "unknown op \"" + op + "\"");
    }
  }
  return c;
}

Circuit load_circuit(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Parse, "cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, path.string() + ": " + e.what());
  }
  return circuit_from_json(j);
}

nlohmann::json distribution_to_json(const Distribution& d) {
  nlohmann::json o = nlohmann::json::object();
  for (const auto& [key, p] : d) o[key] = p;
  return o;
}

}  // namespace qlab
