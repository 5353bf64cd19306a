#include "exactfit/json_io.hpp"

#include <fstream>
#include <stdexcept>

namespace exactfit::io {

using nlohmann::json;

json rat_to_json(const Rat& r) { return rat_to_string(r); }

Rat rat_from_json(const json& j) {
  if (j.is_string()) return rat_from_string(j.get<std::string>());
  if (j.is_number_integer()) return Rat(j.get<long long>());
  if (j.is_number())
    throw std::invalid_argument("floating-point numbers are not accepted; use \"p/q\" strings");
  throw std::invalid_argument("expected a rational as \"p/q\" string or integer");
}

std::string activation_name(nets::Activation a) {
  return a == nets::Activation::Relu ? "relu" : "lt";
}

nets::Activation activation_from_name(const std::string& name) {
  if (name == "relu") return nets::Activation::Relu;
  if (name == "lt") return nets::Activation::LinearThreshold;
  throw std::invalid_argument("unknown activation: \"" + name + "\" (expected relu or lt)");
}

namespace {

json vec_to_json(const std::vector<Rat>& v) {
  json out = json::array();
  for (const Rat& r : v) out.push_back(rat_to_json(r));
  return out;
}

std::vector<Rat> vec_from_json(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("expected an array of rationals");
  std::vector<Rat> out;
  out.reserve(j.size());
  for (const auto& e : j) out.push_back(rat_from_json(e));
  return out;
}

const json& field(const json& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end())
    throw std::invalid_argument(std::string("missing field \"") + name + "\"");
  return *it;
}

json units_to_json(const std::vector<nets::Unit>& units) {
  json arr = json::array();
  for (const nets::Unit& u : units)
    arr.push_back({{"w", vec_to_json(u.w)}, {"b", rat_to_json(u.b)}, {"a", rat_to_json(u.a)}});
  return arr;
}

std::vector<nets::Unit> units_from_json(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("expected an array of units");
  std::vector<nets::Unit> units;
  for (const auto& e : j)
    units.push_back({vec_from_json(field(e, "w")), rat_from_json(field(e, "b")),
                     rat_from_json(field(e, "a"))});
  return units;
}

}  // namespace

json to_json(const nets::Instance& inst) {
  json points = json::array();
  for (const nets::LabeledPoint& p : inst.points)
    points.push_back({{"x", vec_to_json(p.x)}, {"y", rat_to_json(p.y)}});
  return {{"dim", inst.dim},
          {"k", inst.k},
          {"gamma", rat_to_json(inst.gamma)},
          {"activation", activation_name(inst.activation)},
          {"points", std::move(points)}};
}

nets::Instance instance_from_json(const json& j) {
  nets::Instance inst;
  inst.dim = field(j, "dim").get<int>();
  inst.k = field(j, "k").get<int>();
  inst.gamma = rat_from_json(field(j, "gamma"));
  inst.activation = activation_from_name(field(j, "activation").get<std::string>());
  for (const auto& e : field(j, "points"))
    inst.points.push_back({vec_from_json(field(e, "x")), rat_from_json(field(e, "y"))});
  inst.validate();
  return inst;
}

json to_json(const nets::ReluNetwork& net) {
  return {{"dim", net.dim}, {"activation", "relu"}, {"units", units_to_json(net.units)}};
}

json to_json(const nets::LTNetwork& net) {
  return {{"dim", net.dim}, {"activation", "lt"}, {"units", units_to_json(net.units)}};
}

AnyNetwork network_from_json(const json& j) {
  const int dim = field(j, "dim").get<int>();
  const nets::Activation act = activation_from_name(field(j, "activation").get<std::string>());
  std::vector<nets::Unit> units = units_from_json(field(j, "units"));
  if (act == nets::Activation::Relu) {
    nets::ReluNetwork net{dim, std::move(units)};
    nets::validate(net);
    return net;
  }
  nets::LTNetwork net{dim, std::move(units)};
  nets::validate(net);
  return net;
}

json to_json(const reduce::PoitsFormula& formula) {
  json clauses = json::array();
  for (const auto& c : formula.clauses) clauses.push_back({c[0], c[1], c[2]});
  return {{"n", formula.num_vars}, {"clauses", std::move(clauses)}};
}

reduce::PoitsFormula formula_from_json(const json& j) {
  reduce::PoitsFormula formula;
  formula.num_vars = field(j, "n").get<int>();
  for (const auto& e : field(j, "clauses")) {
    if (!e.is_array() || e.size() != 3)
      throw std::invalid_argument("each clause must list exactly three variable indices");
    formula.clauses.push_back({e[0].get<int>(), e[1].get<int>(), e[2].get<int>()});
  }
  formula.validate();
  return formula;
}

json to_json(const reduce::TruthAssignment& assignment) {
  json vars = json::array();
  for (int v : assignment.true_vars) vars.push_back(v);
  return {{"T", std::move(vars)}};
}

reduce::TruthAssignment assignment_from_json(const json& j) {
  reduce::TruthAssignment assignment;
  for (const auto& e : field(j, "T")) assignment.true_vars.insert(e.get<int>());
  return assignment;
}

json to_json(const reduce::HsepInput& input) {
  json q = json::array(), p = json::array();
  for (const auto& pt : input.q_points) q.push_back(vec_to_json(pt));
  for (const auto& pt : input.p_points) p.push_back(vec_to_json(pt));
  json out = {{"Q", std::move(q)}, {"P", std::move(p)}};
  if (input.witness) {
    out["witness"] = {{"h1", vec_to_json(input.witness->h1)},
                      {"o1", rat_to_json(input.witness->o1)},
                      {"h2", vec_to_json(input.witness->h2)},
                      {"o2", rat_to_json(input.witness->o2)}};
  }
  return out;
}

reduce::HsepInput hsep_from_json(const json& j) {
  reduce::HsepInput input;
  for (const auto& e : field(j, "Q")) input.q_points.push_back(vec_from_json(e));
  for (const auto& e : field(j, "P")) input.p_points.push_back(vec_from_json(e));
  if (j.contains("witness")) {
    const json& w = j["witness"];
    input.witness = reduce::HsepWitness{vec_from_json(field(w, "h1")),
                                        rat_from_json(field(w, "o1")),
                                        vec_from_json(field(w, "h2")),
                                        rat_from_json(field(w, "o2"))};
  }
  input.validate();
  return input;
}

namespace {

const char* event_name(convex::SearchEvent::Kind kind) {
  using Kind = convex::SearchEvent::Kind;
  switch (kind) {
    case Kind::Place: return "place";
    case Kind::Forced: return "forced";
    case Kind::Reject: return "reject";
    case Kind::Leaf: return "leaf";
    case Kind::Pop: return "pop";
  }
  return "?";
}

convex::SearchEvent::Kind event_kind(const std::string& name) {
  using Kind = convex::SearchEvent::Kind;
  if (name == "place") return Kind::Place;
  if (name == "forced") return Kind::Forced;
  if (name == "reject") return Kind::Reject;
  if (name == "leaf") return Kind::Leaf;
  if (name == "pop") return Kind::Pop;
  throw std::invalid_argument("unknown search event: " + name);
}

}  // namespace

json to_json(const convex::SearchLog& log) {
  json events = json::array();
  for (const convex::SearchEvent& e : log.events) {
    json entry = {{"t", event_name(e.kind)}};
    switch (e.kind) {
      case convex::SearchEvent::Kind::Place:
        entry["point"] = e.point;
        entry["bucket"] = e.bucket;
        break;
      case convex::SearchEvent::Kind::Forced:
      case convex::SearchEvent::Kind::Reject:
        entry["point"] = e.point;
        entry["bucket"] = e.bucket;
        entry["mu"] = e.mu;
        break;
      case convex::SearchEvent::Kind::Leaf:
        entry["feasible"] = e.feasible;
        break;
      case convex::SearchEvent::Kind::Pop:
        break;
    }
    events.push_back(std::move(entry));
  }
  return {{"k", log.k}, {"d", log.d}, {"n", log.n}, {"events", std::move(events)}};
}

convex::SearchLog search_log_from_json(const json& j) {
  convex::SearchLog log;
  log.k = field(j, "k").get<int>();
  log.d = field(j, "d").get<int>();
  log.n = field(j, "n").get<int>();
  for (const auto& e : field(j, "events")) {
    convex::SearchEvent event;
    event.kind = event_kind(field(e, "t").get<std::string>());
    switch (event.kind) {
      case convex::SearchEvent::Kind::Place:
        event.point = field(e, "point").get<int>();
        event.bucket = field(e, "bucket").get<int>();
        break;
      case convex::SearchEvent::Kind::Forced:
      case convex::SearchEvent::Kind::Reject:
        event.point = field(e, "point").get<int>();
        event.bucket = field(e, "bucket").get<int>();
        event.mu = field(e, "mu").get<std::string>();
        break;
      case convex::SearchEvent::Kind::Leaf:
        event.feasible = field(e, "feasible").get<bool>();
        break;
      case convex::SearchEvent::Kind::Pop:
        break;
    }
    log.events.push_back(std::move(event));
  }
  return log;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  json j;
  in >> j;
  return j;
}

void save_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << j.dump(2) << "\n";
}

}  // namespace exactfit::io
