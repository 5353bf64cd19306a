#pragma once

#include "exactfit/rational.hpp"

#include <vector>

namespace exactfit::nets {

enum class Activation { Relu, LinearThreshold };

struct LabeledPoint {
  std::vector<Rat> x;
  Rat y;

  friend bool operator==(const LabeledPoint&, const LabeledPoint&) = default;
};

/// A training instance: points in Q^dim with rational labels, a unit budget k,
/// and a target error gamma (0 throughout this toolkit).
struct Instance {
  int dim = 0;
  int k = 0;
  Rat gamma;
  Activation activation = Activation::Relu;
  std::vector<LabeledPoint> points;

  /// Throws std::invalid_argument on malformed data (width mismatch,
  /// k < 1, gamma < 0, or equal inputs carrying different labels).
  void validate() const;
};

struct Unit {
  std::vector<Rat> w;
  Rat b;
  Rat a;

  friend bool operator==(const Unit&, const Unit&) = default;
};

/// Hidden layer of rectifier units; output coefficients restricted to -1/+1.
struct ReluNetwork {
  int dim = 0;
  std::vector<Unit> units;
};

/// Hidden layer of linear threshold units; output coefficients unrestricted.
struct LTNetwork {
  int dim = 0;
  std::vector<Unit> units;
};

void validate(const ReluNetwork&);
void validate(const LTNetwork&);

/// sum_j a_j * max(0, w_j.x + b_j), exactly.
Rat eval_relu(const ReluNetwork& net, const std::vector<Rat>& x);

/// sum_j a_j * [w_j.x + b_j > 0], with the indicator strict at zero.
Rat eval_lt(const LTNetwork& net, const std::vector<Rat>& x);

/// Ramp-plateau-ramp profile around the line x2 = s*x1: value 0 at vertical
/// distance >= 2 from the line, 1 at distance <= 1, linear in between.
Rat levee_value(const Rat& s, const Rat& x1, const Rat& x2);

/// Four-unit network over R^2 evaluating to levee_value(s, x1, x2 - z).
ReluNetwork levee_network(const Rat& s, const Rat& z);

/// Two-threshold network valued 1 on the stripe around x2 = s*x1 + z and 0
/// elsewhere. The thresholds sit at vertical distance 3/2 from the center
/// line, strictly inside the levee support and strictly outside its plateau;
/// with strict indicators the lower boundary is excluded and the upper one
/// included, so points at distance exactly 3/2 above the line evaluate to 1.
LTNetwork stripe_network(const Rat& s, const Rat& z);

enum class LossKind { L0, L1, L2 };

/// All three kinds vanish exactly on a residual of zero and only there.
Rat loss_value(LossKind kind, const Rat& predicted, const Rat& label);

Rat total_loss(const ReluNetwork& net, const Instance& inst, LossKind kind);
Rat total_loss(const LTNetwork& net, const Instance& inst, LossKind kind);

/// True iff every residual is exactly zero.
bool is_exact_fit(const ReluNetwork& net, const Instance& inst);
bool is_exact_fit(const LTNetwork& net, const Instance& inst);

}  // namespace exactfit::nets
