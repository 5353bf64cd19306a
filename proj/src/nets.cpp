#include "exactfit/nets.hpp"

#include <map>
#include <stdexcept>

namespace exactfit::nets {

void Instance::validate() const {
  if (dim < 1) throw std::invalid_argument("instance dimension must be at least 1");
  if (k < 1) throw std::invalid_argument("instance unit count must be at least 1");
  if (gamma < 0) throw std::invalid_argument("instance gamma must be nonnegative");
  std::map<std::vector<Rat>, Rat> seen;
  for (const LabeledPoint& p : points) {
    if (static_cast<int>(p.x.size()) != dim)
      throw std::invalid_argument("point width does not match instance dimension");
    auto [it, inserted] = seen.emplace(p.x, p.y);
    if (!inserted && it->second != p.y)
      throw std::invalid_argument("equal inputs carry different labels");
  }
}

namespace {

void validate_units(int dim, const std::vector<Unit>& units) {
  for (const Unit& u : units)
    if (static_cast<int>(u.w.size()) != dim)
      throw std::invalid_argument("unit width does not match network dimension");
}

Rat dot_plus_bias(const Unit& u, const std::vector<Rat>& x) {
  Rat acc = u.b;
  for (std::size_t i = 0; i < u.w.size(); ++i)
    if (u.w[i] != 0) acc += u.w[i] * x[i];
  return acc;
}

void check_input(int dim, const std::vector<Rat>& x) {
  if (static_cast<int>(x.size()) != dim)
    throw std::invalid_argument("input width does not match network dimension");
}

}  // namespace

void validate(const ReluNetwork& net) {
  validate_units(net.dim, net.units);
  for (const Unit& u : net.units)
    if (u.a != 1 && u.a != -1)
      throw std::invalid_argument("rectifier output coefficients must be -1 or +1");
}

void validate(const LTNetwork& net) { validate_units(net.dim, net.units); }

Rat eval_relu(const ReluNetwork& net, const std::vector<Rat>& x) {
  check_input(net.dim, x);
  Rat total(0);
  for (const Unit& u : net.units) {
    Rat pre = dot_plus_bias(u, x);
    if (pre > 0) total += u.a * pre;
  }
  return total;
}

Rat eval_lt(const LTNetwork& net, const std::vector<Rat>& x) {
  check_input(net.dim, x);
  Rat total(0);
  for (const Unit& u : net.units)
    if (dot_plus_bias(u, x) > 0) total += u.a;
  return total;
}

Rat levee_value(const Rat& s, const Rat& x1, const Rat& x2) {
  Rat t = x2 - s * x1;
  Rat mag = abs(t);
  if (mag >= 2) return Rat(0);
  if (mag <= 1) return Rat(1);
  if (t < 0) return Rat(2) + t;
  return Rat(2) - t;
}

ReluNetwork levee_network(const Rat& s, const Rat& z) {
  // [t+2]+ - [t+1]+ - [t-1]+ + [t-2]+ with t = x2 - s*x1 - z.
  ReluNetwork net;
  net.dim = 2;
  const std::vector<Rat> w{-s, Rat(1)};
  net.units.push_back({w, Rat(2) - z, Rat(1)});
  net.units.push_back({w, Rat(1) - z, Rat(-1)});
  net.units.push_back({w, Rat(-1) - z, Rat(-1)});
  net.units.push_back({w, Rat(-2) - z, Rat(1)});
  return net;
}

LTNetwork stripe_network(const Rat& s, const Rat& z) {
  LTNetwork net;
  net.dim = 2;
  const std::vector<Rat> w{-s, Rat(1)};
  const Rat half = Rat(3) / Rat(2);
  net.units.push_back({w, half - z, Rat(1)});
  net.units.push_back({w, -half - z, Rat(-1)});
  return net;
}

Rat loss_value(LossKind kind, const Rat& predicted, const Rat& label) {
  Rat r = predicted - label;
  switch (kind) {
    case LossKind::L0: return r == 0 ? Rat(0) : Rat(1);
    case LossKind::L1: return abs(r);
    case LossKind::L2: return Rat(r * r);
  }
  throw std::logic_error("unknown loss kind");
}

namespace {

template <typename Net, typename Eval>
Rat total_loss_impl(const Net& net, const Instance& inst, LossKind kind, Eval eval) {
  Rat total(0);
  for (const LabeledPoint& p : inst.points) total += loss_value(kind, eval(net, p.x), p.y);
  return total;
}

template <typename Net, typename Eval>
bool exact_fit_impl(const Net& net, const Instance& inst, Eval eval) {
  for (const LabeledPoint& p : inst.points)
    if (eval(net, p.x) != p.y) return false;
  return true;
}

void check_activation(Activation expected, const Instance& inst) {
  if (inst.activation != expected)
    throw std::invalid_argument("network activation does not match instance");
}

}  // namespace

Rat total_loss(const ReluNetwork& net, const Instance& inst, LossKind kind) {
  check_activation(Activation::Relu, inst);
  return total_loss_impl(net, inst, kind, [](const ReluNetwork& n, const std::vector<Rat>& x) {
    return eval_relu(n, x);
  });
}

Rat total_loss(const LTNetwork& net, const Instance& inst, LossKind kind) {
  check_activation(Activation::LinearThreshold, inst);
  return total_loss_impl(net, inst, kind, [](const LTNetwork& n, const std::vector<Rat>& x) {
    return eval_lt(n, x);
  });
}

bool is_exact_fit(const ReluNetwork& net, const Instance& inst) {
  check_activation(Activation::Relu, inst);
  return exact_fit_impl(net, inst, [](const ReluNetwork& n, const std::vector<Rat>& x) {
    return eval_relu(n, x);
  });
}

bool is_exact_fit(const LTNetwork& net, const Instance& inst) {
  check_activation(Activation::LinearThreshold, inst);
  return exact_fit_impl(net, inst, [](const LTNetwork& n, const std::vector<Rat>& x) {
    return eval_lt(n, x);
  });
}

}  // namespace exactfit::nets
