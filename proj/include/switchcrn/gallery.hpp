// Built-in example models with their expected regime verdicts.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "switchcrn/classify.hpp"
#include "switchcrn/model.hpp"
#include "switchcrn/sim.hpp"

namespace switchcrn {

using Params = std::map<std::string, double>;

struct ParamSpec {
    std::string name;
    double default_value;
    std::string domain;
};

struct GalleryEntry {
    std::string id;
    std::vector<ParamSpec> params;
    std::string description;
};

const std::vector<GalleryEntry>& gallery_entries();
const GalleryEntry& gallery_entry(const std::string& id);  ///< accepts aliases; throws on unknown id

/// Fills in defaults and checks every value against its domain. Throws std::invalid_argument.
Params resolve_params(const std::string& id, const Params& params);

SwitchedModel build(const std::string& id, const Params& params = {});

struct ExpectedConclusion {
    Outcome outcome = Outcome::Unknown;
    UnknownReason reason = UnknownReason::None;
    IndexSet support;
};

struct ExpectedVerdict {
    ExpectedConclusion fast;
    ExpectedConclusion slow;
    std::string note;
};

ExpectedVerdict expected_verdict(const std::string& id, const Params& params = {});

/// True when the classifier's conclusion agrees with the expected outcome, reason and support.
bool matches(const Conclusion& got, const ExpectedConclusion& want);

/// Scale factors and window estimates chosen for the multi-window composite model.
struct CompositeDesign {
    std::vector<double> betas;       ///< block 0, windows 1..N, block N+1
    std::vector<double> kappa_max;   ///< per block, ergodic below (unscaled); +inf if always
    std::vector<double> kappa_min;   ///< per block, ergodic above (unscaled); 0 if always
    std::vector<IndexSet> block_species;
};

CompositeDesign composite_design(const Params& params);

/// Sweep settings used by `reproduce` for each entry.
struct SweepPlan {
    std::vector<double> kappas;
    double t_max = 1e3;
    std::int64_t escape_norm = 1000;
    std::size_t n_traj = 200;
    std::uint64_t max_events = 10'000'000;
    SimMethod method = SimMethod::Direct;
};

SweepPlan default_sweep(const std::string& id, const Params& params = {});

}  // namespace switchcrn
