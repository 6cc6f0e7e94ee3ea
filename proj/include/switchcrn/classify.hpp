// Regime verdicts for fast and slow switching, plus the transience helpers.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "switchcrn/metzler.hpp"
#include "switchcrn/model.hpp"

namespace switchcrn {

enum class Outcome { ErgodicEventually, EvanescentEventually, Unknown };
enum class UnknownReason { None, NearCritical, NonlinearGenerator, NotMonomolecular, NoCommonSupport, MixedStability };

std::string to_string(Outcome o);
std::string to_string(UnknownReason r);

struct Conclusion {
    Outcome outcome = Outcome::Unknown;
    UnknownReason reason = UnknownReason::None;
    IndexSet support;  ///< evanescent states are those whose support meets this set
    std::vector<DirectionCertificate> certificates;
};

struct RegimeVerdict {
    Conclusion fast;
    Conclusion slow;
};

Conclusion classify_fast(const SwitchedModel& model);
Conclusion classify_slow(const SwitchedModel& model);
RegimeVerdict classify(const SwitchedModel& model);

/// Re-verifies every certificate attached to a conclusion against the model's matrices.
bool verify_conclusion(const SwitchedModel& model, const Conclusion& c, bool fast);

struct CommonSupport {
    IndexSet support;
    std::vector<DirectionCertificate> certificates;  ///< one per environment, embedded in R^d
};

/// First index set (largest first, then lexicographic) on which every M_i has an
/// increasing direction. Throws std::invalid_argument when d > 20.
std::optional<CommonSupport> common_unstable_support(const SwitchedModel& model);

/// Nudges v so that v.xi != 0 for every xi while keeping its support and (vM)_m > 0 there.
Vec perturb_direction(const Vec& v, const Matrix& m, const std::vector<Vec>& xis, std::uint64_t seed = 0);

/// Reaction vectors y' - y of all environments whose support meets supp(v).
std::vector<Vec> reaction_vectors_meeting(const SwitchedModel& model, const Vec& v);

struct WitnessStep {
    std::size_t env;
    std::size_t reaction;
};

struct EscapeWitness {
    std::vector<WitnessStep> path;
    State terminal;
};

/// Greedy path of reactions, each with positive propensity and raising v.x, until v.x > c.
EscapeWitness escape_witness(const SwitchedModel& model, const Vec& v, const State& x0,
                             std::size_t i0, double c);

}  // namespace switchcrn
