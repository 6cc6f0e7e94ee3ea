// Lyapunov functions, the exact generator, and the drift inequalities behind each regime.
#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "switchcrn/metzler.hpp"
#include "switchcrn/mixing.hpp"
#include "switchcrn/model.hpp"

namespace switchcrn {

class LyapunovFn {
public:
    enum class Form { Linear, Reciprocal, Power };

    /// h(x,i) = c^i.x + offset
    static LyapunovFn linear(std::vector<Vec> coeffs, double offset = 0.0);
    /// h(x,i) = 1 - 1/(1 + c^i.x)
    static LyapunovFn reciprocal(std::vector<Vec> coeffs);
    /// h(x,i) = s_i x^p, single species only
    static LyapunovFn power(Vec scales, double exponent);

    Form form() const { return form_; }
    std::size_t n_env() const { return form_ == Form::Power ? scales_.size() : coeffs_.size(); }
    const std::vector<Vec>& coeffs() const { return coeffs_; }
    double offset() const { return offset_; }
    const Vec& scales() const { return scales_; }
    double exponent() const { return exponent_; }

    double value(const State& x, std::size_t env) const;
    /// h(to, to_env) - h(from, from_env), evaluated without cancellation for large states.
    double difference(const State& from, std::size_t from_env, const State& to, std::size_t to_env) const;

    LyapunovFn operator+(const LyapunovFn& other) const;  ///< Linear forms only

private:
    Form form_ = Form::Linear;
    std::vector<Vec> coeffs_;
    double offset_ = 0.0;
    Vec scales_;
    double exponent_ = 1.0;
};

std::string to_string(LyapunovFn::Form f);

/// Exact value of the generator of the switched process applied to h at (x, env).
double generator_apply(const SwitchedModel& model, double kappa, const LyapunovFn& h,
                       const State& x, std::size_t env);

struct SampledState {
    State x;
    std::size_t env;
    double value;
};

struct DriftReport {
    enum class Mode { ErgodicDrift, TransientDrift };
    Mode mode = Mode::ErgodicDrift;
    double kappa = 0.0;
    bool algebraic_pass = false;
    double b = 0.0;       ///< transient shell radius; +inf when no sampled band is clean
    double c = 0.0;       ///< Foster-Lyapunov decay constant
    double dconst = 0.0;  ///< Foster-Lyapunov offset
    std::vector<Vec> leading;  ///< per environment, the coefficients whose sign is checked
    std::vector<SampledState> sampled_violations;
    std::vector<SampledState> samples;  ///< every evaluated state, in evaluation order
};

std::string to_string(DriftReport::Mode m);

// threshold grids: 2^k for k in [-30, 30]
std::vector<double> kappa_grid();

struct ErgodicBuild {
    LyapunovFn h;
    double kappa_threshold = 0.0;
    DriftReport report;
};

/// Leading coefficients sum_{j!=i} q_ij (u^j - u^i) + (v + u^i/kappa) M_i.
std::vector<Vec> fast_ergodic_leading(const SwitchedModel& model, const Vec& v, const ZVectors& z,
                                      double kappa);
LyapunovFn fast_ergodic_function(const Vec& v, const ZVectors& z, std::size_t n_env, double kappa);
ErgodicBuild build_fast_ergodic(const SwitchedModel& model, const DirectionCertificate& cert);

/// Leading coefficients sum_{j!=i} kappa q_ij (v^j - v^i) + v^i M_i.
std::vector<Vec> slow_ergodic_leading(const SwitchedModel& model, const std::vector<Vec>& vs,
                                      double kappa);
ErgodicBuild build_slow_ergodic(const SwitchedModel& model,
                                const std::vector<DirectionCertificate>& certs);

DriftReport check_fast_transience(const SwitchedModel& model, double kappa, const Vec& v);
/// Smallest grid kappa from which the fast transience inequality holds on the whole upper grid.
double fast_transience_threshold(const SwitchedModel& model, const Vec& v);

DriftReport check_slow_transience(const SwitchedModel& model, double kappa, const IndexSet& support,
                                  const std::vector<Vec>& vs);
/// Largest grid kappa below which (on the grid) the slow transience inequality holds.
double slow_transience_threshold(const SwitchedModel& model, const IndexSet& support,
                                 const std::vector<Vec>& vs);

/// 4x4 rate matrix with pairs {1,2}, {3,4}: in-pair rate 1, cross rate eps.
Matrix grouped_q(double eps);
/// Same networks as `model`, switching matrix replaced by grouped_q(eps).
SwitchedModel with_grouped_q(const SwitchedModel& model, double eps);

DriftReport check_grouped_transience(const SwitchedModel& model4, double kappa, double eps,
                                     const Vec& v1, const Vec& v2);

/// (v^k A_k)_m, the eps -> 0, kappa -> infinity limit of the grouped inequality, per environment.
std::vector<Vec> grouped_limit_targets(const SwitchedModel& model4, const Vec& v1, const Vec& v2);

struct GroupedScan {
    std::vector<double> kappas;
    std::vector<double> epss;
    std::vector<std::vector<bool>> pass;  ///< pass[k][e]
    std::vector<std::pair<double, double>> passing() const;
};

GroupedScan grouped_scan(const SwitchedModel& model4, const std::vector<double>& kappas,
                         const std::vector<double>& epss, const Vec& v1, const Vec& v2);

DriftReport verify_foster_lyapunov(const SwitchedModel& model, double kappa, const LyapunovFn& h,
                                   std::int64_t box_radius);

}  // namespace switchcrn
