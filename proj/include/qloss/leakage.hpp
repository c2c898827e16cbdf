#pragma once

#include <array>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include "qloss/core.hpp"

namespace qloss {

/// One of the eight 5^2 S_1/2 ground-manifold sublevels of Rb-87, labeled by
/// (F, m_F). The qubit lives in the field-insensitive pair m_F = 0.
struct LevelLabel {
  int F = 1;
  int mF = 0;

  friend bool operator==(const LevelLabel&, const LevelLabel&) = default;
};

inline bool isValidLevel(const LevelLabel& level) {
  return (level.F == 1 || level.F == 2) && std::abs(level.mF) <= level.F;
}

inline void requireValidLevel(const LevelLabel& level) {
  if (!isValidLevel(level))
    throw DomainError("not a ground-manifold level: F=" +
                      std::to_string(level.F) +
                      ", mF=" + std::to_string(level.mF));
}

inline bool isQubitLevel(const LevelLabel& level) {
  requireValidLevel(level);
  return level.mF == 0;
}

inline constexpr LevelLabel kQubitZero{1, 0};  // |0>
inline constexpr LevelLabel kQubitOne{2, 0};   // |1>

inline const std::array<LevelLabel, 8>& allLevels() {
  static const std::array<LevelLabel, 8> levels = {
      LevelLabel{1, -1}, LevelLabel{1, 0}, LevelLabel{1, 1},
      LevelLabel{2, -2}, LevelLabel{2, -1}, LevelLabel{2, 0},
      LevelLabel{2, 1},  LevelLabel{2, 2}};
  return levels;
}

inline const std::array<LevelLabel, 6>& leakedLevels() {
  static const std::array<LevelLabel, 6> levels = {
      LevelLabel{1, -1}, LevelLabel{1, 1},  LevelLabel{2, -2},
      LevelLabel{2, -1}, LevelLabel{2, 1},  LevelLabel{2, 2}};
  return levels;
}

inline std::string levelText(const LevelLabel& level) {
  return std::to_string(level.F) + "," + std::to_string(level.mF);
}

/// Phase-signature classes of a circularly polarized QND probe. The eight
/// levels partition into five classes: the qubit pair (nearly identical
/// shifts), the individually resolvable stretched states m_F=2 = +-2, and
/// two degenerate pairs whose members impose the same shift.
enum class SignatureClassId {
  kQubit,          // (1,0), (2,0)
  kStretchedPlus,  // (2,+2)
  kStretchedMinus, // (2,-2)
  kPairPlus,       // (1,+1), (2,-1)
  kPairMinus,      // (1,-1), (2,+1)
};

struct SignatureClass {
  SignatureClassId id;
  std::vector<LevelLabel> members;
};

inline SignatureClass signatureOf(const LevelLabel& level) {
  requireValidLevel(level);
  if (level.mF == 0)
    return {SignatureClassId::kQubit, {kQubitZero, kQubitOne}};
  if (level == LevelLabel{2, 2})
    return {SignatureClassId::kStretchedPlus, {LevelLabel{2, 2}}};
  if (level == LevelLabel{2, -2})
    return {SignatureClassId::kStretchedMinus, {LevelLabel{2, -2}}};
  if (level == LevelLabel{1, 1} || level == LevelLabel{2, -1})
    return {SignatureClassId::kPairPlus, {LevelLabel{1, 1}, LevelLabel{2, -1}}};
  return {SignatureClassId::kPairMinus, {LevelLabel{1, -1}, LevelLabel{2, 1}}};
}

/// Optional numeric phase shifts per signature class. The protocol itself
/// only uses the symbolic class relations; magnitudes are hardware inputs.
/// Validation enforces what the classification relies on: the stretched
/// states shift by opposite amounts of the same magnitude, and distinct
/// classes are resolvable (distinct values).
struct SignatureTable {
  double qubit = 0;
  double stretched_plus = 0;
  double stretched_minus = 0;
  double pair_plus = 0;
  double pair_minus = 0;

  void validate(double resolution = 1e-9) const {
    if (std::abs(stretched_plus + stretched_minus) > resolution)
      throw ValidationError(
          "stretched-state shifts must be opposite with equal magnitude");
    const std::array<double, 5> values = {qubit, stretched_plus,
                                          stretched_minus, pair_plus,
                                          pair_minus};
    for (std::size_t i = 0; i < values.size(); ++i)
      for (std::size_t j = i + 1; j < values.size(); ++j)
        if (std::abs(values[i] - values[j]) <= resolution)
          throw ValidationError("signature classes are not resolvable");
  }

  double phaseOf(SignatureClassId id) const {
    switch (id) {
      case SignatureClassId::kQubit: return qubit;
      case SignatureClassId::kStretchedPlus: return stretched_plus;
      case SignatureClassId::kStretchedMinus: return stretched_minus;
      case SignatureClassId::kPairPlus: return pair_plus;
      case SignatureClassId::kPairMinus: return pair_minus;
    }
    throw DomainError("unknown signature class");
  }
};

enum class PlanStepKind {
  kMeasureSignature,  // circular-polarization QND phase measurement
  kSelectiveUnitary,  // state-selective rotation between two named levels
  kReturnRotation,    // rotation of the identified level into |0> = (1,0)
};

struct PlanStep {
  PlanStepKind kind = PlanStepKind::kMeasureSignature;
  std::optional<LevelLabel> from;
  std::optional<LevelLabel> to;
  std::optional<SignatureClassId> observed;  // filled for measurements
};

/// The executed step sequence; serializes in the circuit text style with the
/// pseudo-gates MEASIG and `SEL F,m -> F',m'`.
struct DisambiguationPlan {
  std::vector<PlanStep> steps;

  int measurementCount() const {
    int n = 0;
    for (const auto& s : steps)
      if (s.kind == PlanStepKind::kMeasureSignature) ++n;
    return n;
  }

  int unitaryCount() const {
    int n = 0;
    for (const auto& s : steps)
      if (s.kind != PlanStepKind::kMeasureSignature) ++n;
    return n;
  }

  std::string toText() const {
    std::string out;
    for (const auto& s : steps) {
      if (s.kind == PlanStepKind::kMeasureSignature) {
        out += "MEASIG\n";
      } else {
        out += "SEL " + levelText(*s.from) + " -> " + levelText(*s.to) + "\n";
      }
    }
    return out;
  }
};

/// Replays level transitions of a plan on a classical hidden label: selective
/// steps move the atom only when it occupies the step's source level.
inline LevelLabel simulatePlan(LevelLabel start, const DisambiguationPlan& plan) {
  requireValidLevel(start);
  LevelLabel current = start;
  for (const auto& s : plan.steps) {
    if (s.kind == PlanStepKind::kMeasureSignature) continue;
    if (current == *s.from) current = *s.to;
  }
  return current;
}

/// Outcome of the classification protocol. Leaked levels are identified
/// exactly; atoms found in the qubit class terminate immediately without any
/// unitary, preserving the QND property, so their m_F stays unresolved.
struct ClassifyResult {
  bool in_qubit_subspace = false;
  std::optional<LevelLabel> leaked_level;
  DisambiguationPlan plan;
};

namespace detail {

inline PlanStep measureStep(SignatureClassId observed) {
  PlanStep s;
  s.kind = PlanStepKind::kMeasureSignature;
  s.observed = observed;
  return s;
}

inline PlanStep selectiveStep(LevelLabel from, LevelLabel to) {
  PlanStep s;
  s.kind = PlanStepKind::kSelectiveUnitary;
  s.from = from;
  s.to = to;
  return s;
}

}  // namespace detail

/// Identifies which ground-manifold level the atom occupies using at most
/// two signature measurements and one selective unitary. The hidden label
/// models ideal von Neumann collapse onto its signature class; the generator
/// argument is reserved for superposed inputs, which the classical-label
/// model collapses deterministically.
template <class Rng>
ClassifyResult classify(const LevelLabel& hidden_level, Rng&&) {
  requireValidLevel(hidden_level);
  ClassifyResult result;
  const SignatureClass first = signatureOf(hidden_level);
  result.plan.steps.push_back(detail::measureStep(first.id));

  switch (first.id) {
    case SignatureClassId::kQubit:
      result.in_qubit_subspace = true;
      return result;
    case SignatureClassId::kStretchedPlus:
    case SignatureClassId::kStretchedMinus:
      result.leaked_level = hidden_level;
      return result;
    case SignatureClassId::kPairPlus:
    case SignatureClassId::kPairMinus:
      break;
  }

  // Degenerate pair: shelve the F=1 member into (2,0) and measure again.
  const LevelLabel f1_member =
      first.id == SignatureClassId::kPairPlus ? LevelLabel{1, 1}
                                              : LevelLabel{1, -1};
  const LevelLabel f2_member =
      first.id == SignatureClassId::kPairPlus ? LevelLabel{2, -1}
                                              : LevelLabel{2, 1};
  result.plan.steps.push_back(detail::selectiveStep(f1_member, kQubitOne));
  const LevelLabel current =
      hidden_level == f1_member ? kQubitOne : hidden_level;
  const SignatureClass second = signatureOf(current);
  result.plan.steps.push_back(detail::measureStep(second.id));
  result.leaked_level =
      second.id == SignatureClassId::kQubit ? f1_member : f2_member;
  return result;
}

/// Physical level occupied after classify's plan ran: the F=1 pair members
/// were shelved into (2,0); every other level sits where it started.
inline LevelLabel postClassificationLevel(const LevelLabel& identified) {
  requireValidLevel(identified);
  if (identified == LevelLabel{1, 1} || identified == LevelLabel{1, -1})
    return kQubitOne;
  return identified;
}

struct ReturnPlan {
  DisambiguationPlan plan;
  /// Set when called on a qubit level, where returning is a no-op.
  bool qubit_level_noop = false;
};

/// Rotation plan taking an identified leaked atom into the qubit ground
/// state |0> = (1,0), continuing from wherever classification left it. After
/// execution the register is in the reinserted-|0> form, so the loss
/// correction pipeline applies unchanged.
inline ReturnPlan returnToGround(const LevelLabel& identified) {
  requireValidLevel(identified);
  ReturnPlan result;
  if (isQubitLevel(identified)) {
    result.qubit_level_noop = true;
    return result;
  }
  const LevelLabel current = postClassificationLevel(identified);
  PlanStep s;
  s.kind = PlanStepKind::kReturnRotation;
  s.from = current;
  s.to = kQubitZero;
  result.plan.steps.push_back(s);
  return result;
}

}  // namespace qloss
