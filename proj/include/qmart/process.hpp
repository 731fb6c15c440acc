#ifndef QMART_PROCESS_HPP
#define QMART_PROCESS_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "qmart/space.hpp"

namespace qmart {

/// Adapted process: one slice per index, each slice constant on the
/// blocks of that index's partition.
struct AdaptedProcess {
  SpacePtr space;
  std::vector<RandomVariable> values; // [index][outcome]

  const RandomVariable& slice(IndexPos t) const { return values[t]; }
};

/// Reports adaptedness violations (slice not constant on a block), one
/// message per offending (index, block).
std::vector<std::string> validate_process(const AdaptedProcess& x);

AdaptedProcess operator+(const AdaptedProcess& a, const AdaptedProcess& b);
AdaptedProcess operator-(const AdaptedProcess& a, const AdaptedProcess& b);
AdaptedProcess operator*(const Rat& c, const AdaptedProcess& x);
bool operator==(const AdaptedProcess& a, const AdaptedProcess& b);

/// Constant-zero process on a space.
AdaptedProcess zero_process(SpacePtr space);

struct ProcessClass {
  bool martingale = false;
  bool supermartingale = false;
  bool positive = false;
  bool increasing = false;
  bool natural = false;
  bool quasi_potential = false;
  bool potential = false;
  Rat q_norm;
};

/// V^d(X): pathwise sum of |X at d_n minus P(X at d_{n+1} | F at d_n)|
/// over the cut's consecutive pairs. Zero for a singleton cut.
RandomVariable d_variation(const AdaptedProcess& x, const Cut& cut);

/// The quasimartingale norm: sup over cuts of P(V^d(X)). On a finite
/// space the sup is attained at the full cut, which is what is computed.
Rat q_norm(const AdaptedProcess& x);

/// P(V^d(X) | F at the cut's first label). Throws unless t is the
/// first label of the cut.
RandomVariable conditional_variation(const AdaptedProcess& x, const Cut& cut, IndexPos t);

/// All classification predicates, decided exactly.
ProcessClass classify(const AdaptedProcess& x);

/// Pathwise Stieltjes integral of a simple predictable f against the
/// increments of A, each increment attributed to its right endpoint:
/// the contribution of ]d_n, d_{n+1}] is coeff_n * (A at d_{n+1} - A at d_n).
RandomVariable stieltjes_integral(const SimplePredictable& f, const AdaptedProcess& a);

struct NaturalWitness {
  RandomVariable b;
  SimplePredictable f;
  Rat lhs; // P(b * integral of f dA)
  Rat rhs; // P(integral of projected-b * f dA) on the full cut
};

struct NaturalCheck {
  bool natural = false;     // the increment-measurability predicate (authoritative)
  bool integral_ok = false; // the projection-identity form agreed on every checked pair
  std::optional<NaturalWitness> witness;
};

/// Decides naturalness of an increasing process. The predicate (every
/// increment measurable at the preceding index) is authoritative; the
/// projection identity is additionally checked on `trials` seeded
/// random pairs (b, f), plus a deterministic witness pair whenever the
/// predicate fails. Throws Error when A is not increasing.
NaturalCheck is_natural(const AdaptedProcess& a, int trials, std::uint64_t seed);

} // namespace qmart

#endif
