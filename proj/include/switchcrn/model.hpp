// Reaction networks, switched models, the text/JSON model formats and linearization.
#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "switchcrn/linalg.hpp"

namespace switchcrn {

/// Raised for malformed model text or models violating structural invariants.
class ModelError : public std::runtime_error {
public:
    explicit ModelError(const std::string& what) : std::runtime_error(what) {}
    ModelError(const std::string& what, int line, int column);
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_ = 0;
    int column_ = 0;
};

/// Sparse non-negative integer combination of species; empty means the zero complex.
struct Complex {
    std::map<std::size_t, std::uint32_t> counts;

    std::uint32_t operator[](std::size_t species) const;
    std::uint32_t order() const;  ///< total molecule count
    bool operator==(const Complex&) const = default;
    auto operator<=>(const Complex&) const = default;
};

struct Reaction {
    Complex source;
    Complex product;
    double rate = 0.0;
    bool operator==(const Reaction&) const = default;
};

/// One environment's network.
struct CrnSpec {
    std::size_t n_species = 0;
    std::vector<Reaction> reactions;

    void validate() const;  ///< throws ModelError
    bool operator==(const CrnSpec&) const = default;
};

/// n networks over shared species plus the base switching matrix Q.
class SwitchedModel {
public:
    SwitchedModel(std::vector<std::string> species, std::vector<CrnSpec> environments, Matrix q);

    std::size_t n_species() const { return species_.size(); }
    std::size_t n_env() const { return envs_.size(); }
    const std::vector<std::string>& species() const { return species_; }
    const std::vector<CrnSpec>& environments() const { return envs_; }
    const CrnSpec& environment(std::size_t i) const { return envs_.at(i); }
    const Matrix& q() const { return q_; }

    bool operator==(const SwitchedModel&) const = default;

private:
    std::vector<std::string> species_;
    std::vector<CrnSpec> envs_;
    Matrix q_;
};

/// Validates a switching matrix: zero row sums, non-negative off-diagonals, irreducible.
void validate_q(const Matrix& q);
/// Fills the diagonal so that every row sums to zero.
Matrix complete_diagonal(Matrix q);
bool is_irreducible(const Matrix& q);

struct LinearData {
    Matrix matrix;
    Vec inflow;
    bool is_mass_action = true;
    bool is_at_most_monomolecular = false;
    bool is_linear_generator = false;
};

LinearData linearize(const CrnSpec& crn);

using State = std::vector<std::int64_t>;

/// Mass-action propensity of one reaction at state x.
double propensity(const Reaction& r, const State& x);
Vec propensities(const CrnSpec& crn, const State& x);

/// Net change y' - y as a dense vector.
std::vector<std::int64_t> reaction_delta(const Reaction& r, std::size_t n_species);

SwitchedModel parse_model(const std::string& text);
std::string emit_model(const SwitchedModel& model);

/// Loads a model file; files ending in .json use the JSON format, everything else the text grammar.
SwitchedModel load_model_file(const std::string& path);

std::string complex_to_string(const Complex& c, const std::vector<std::string>& species);

}  // namespace switchcrn
