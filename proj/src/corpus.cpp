#include "exactfit/corpus.hpp"

#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

namespace exactfit::corpus {

nets::Instance make_random_instance(std::uint64_t seed, const RandomInstanceParams& params) {
  if (params.value_max < params.value_min)
    throw std::invalid_argument("empty value range");
  const double grid = std::pow(params.value_max - params.value_min + 1, params.d);
  if (grid < params.n)
    throw std::invalid_argument("grid too small for the requested distinct points");

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> value(params.value_min, params.value_max);

  nets::Instance inst;
  inst.dim = params.d;
  inst.k = params.k;
  inst.gamma = Rat(0);
  inst.activation = params.activation;

  std::set<std::vector<int>> used;
  while (static_cast<int>(inst.points.size()) < params.n) {
    std::vector<int> coords(params.d);
    for (int& c : coords) c = value(rng);
    if (!used.insert(coords).second) continue;
    nets::LabeledPoint p;
    for (int c : coords) p.x.push_back(Rat(c));
    p.y = Rat(value(rng));
    inst.points.push_back(std::move(p));
  }
  inst.validate();
  return inst;
}

}  // namespace exactfit::corpus
