#include "switchcrn/json_io.hpp"

#include <cmath>
#include <map>

#include "switchcrn/metzler.hpp"
#include "switchcrn/mixing.hpp"

namespace switchcrn {

namespace {

Json complex_json(const Complex& c, const std::vector<std::string>& species) {
    Json o = Json::object();
    for (const auto& [m, n] : c.counts) o[species.at(m)] = n;
    return o;
}

Complex complex_from(const Json& j, const std::vector<std::string>& species) {
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < species.size(); ++i) index[species[i]] = i;
    Complex c;
    if (j.is_string()) {
        // reuse the text grammar through a one-reaction scratch model
        std::string text = "species";
        for (const auto& s : species) text += " " + s;
        std::string lhs = j.get<std::string>();
        std::string rhs = lhs == "0" ? species.front() : "0";
        text += "\nenvironment 1\n" + lhs + " -> " + rhs + " @ 1\n";
        try {
            return parse_model(text).environment(0).reactions.at(0).source;
        } catch (const ModelError& e) {
            throw ModelError("bad complex '" + lhs + "' in JSON model");
        }
    }
    if (!j.is_object()) throw ModelError("complex must be an object or a string");
    for (const auto& [name, count] : j.items()) {
        auto it = index.find(name);
        if (it == index.end()) throw ModelError("undeclared species '" + name + "' in JSON model");
        if (!count.is_number_integer() || count.get<long long>() < 0)
            throw ModelError("species counts must be non-negative integers");
        auto n = count.get<long long>();
        if (n > 0) c.counts[it->second] += static_cast<std::uint32_t>(n);
    }
    return c;
}

}  // namespace

Json to_json(const Matrix& m) {
    Json rows = Json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(row);
    }
    return rows;
}

Matrix matrix_from_json(const Json& j) {
    if (!j.is_array()) throw ModelError("matrix must be an array of rows");
    std::size_t rows = j.size();
    std::size_t cols = rows ? j[0].size() : 0;
    Matrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        if (!j[r].is_array() || j[r].size() != cols) throw ModelError("ragged matrix in JSON");
        for (std::size_t c = 0; c < cols; ++c) {
            if (!j[r][c].is_number()) throw ModelError("matrix entries must be numbers");
            m(r, c) = j[r][c].get<double>();
        }
    }
    return m;
}

Json model_to_json(const SwitchedModel& model) {
    Json j;
    j["species"] = model.species();
    Json envs = Json::array();
    for (const CrnSpec& e : model.environments()) {
        Json rxs = Json::array();
        for (const Reaction& r : e.reactions)
            rxs.push_back({{"source", complex_json(r.source, model.species())},
                           {"product", complex_json(r.product, model.species())},
                           {"rate", r.rate}});
        envs.push_back({{"reactions", rxs}});
    }
    j["environments"] = envs;
    j["q"] = to_json(model.q());
    return j;
}

SwitchedModel model_from_json(const Json& j) {
    try {
        if (!j.is_object()) throw ModelError("JSON model must be an object");
        auto species = j.at("species").get<std::vector<std::string>>();
        if (species.empty()) throw ModelError("model declares no species");
        std::vector<CrnSpec> envs;
        for (const auto& e : j.at("environments")) {
            CrnSpec spec{species.size(), {}};
            if (e.contains("reactions"))
                for (const auto& r : e.at("reactions")) {
                    Reaction rx;
                    rx.source = complex_from(r.at("source"), species);
                    rx.product = complex_from(r.at("product"), species);
                    rx.rate = r.at("rate").get<double>();
                    spec.reactions.push_back(std::move(rx));
                }
            envs.push_back(std::move(spec));
        }
        Matrix q = j.contains("q") ? matrix_from_json(j.at("q")) : Matrix(envs.size(), envs.size());
        bool zero_diag = true;
        for (std::size_t i = 0; i < q.rows() && i < q.cols(); ++i)
            if (q(i, i) != 0.0) zero_diag = false;
        if (zero_diag && q.rows() == q.cols()) q = complete_diagonal(q);
        return SwitchedModel(std::move(species), std::move(envs), std::move(q));
    } catch (const Json::exception& e) {
        throw ModelError(std::string("malformed JSON model: ") + e.what());
    }
}

SwitchedModel model_from_json_text(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ModelError(std::string("invalid JSON: ") + e.what());
    }
    return model_from_json(j);
}

namespace {

Json finite_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json vec_json(const Vec& v) {
    Json a = Json::array();
    for (double x : v) a.push_back(finite_or_null(x));
    return a;
}

}  // namespace

Json analysis_to_json(const SwitchedModel& model) {
    Json j = model_to_json(model);
    const auto lin = linearize_all(model);
    for (std::size_t i = 0; i < lin.size(); ++i) {
        Json& e = j["environments"][i];
        e["matrix"] = to_json(lin[i].matrix);
        e["inflow"] = lin[i].inflow;
        e["is_mass_action"] = lin[i].is_mass_action;
        e["is_at_most_monomolecular"] = lin[i].is_at_most_monomolecular;
        e["is_linear_generator"] = lin[i].is_linear_generator;
        e["is_metzler"] = is_metzler(lin[i].matrix);
    }
    MixData md = mix(model);
    j["w"] = md.w;
    j["mixed_matrix"] = to_json(md.mixed_matrix);
    j["mixed_is_metzler"] = is_metzler(md.mixed_matrix);
    if (is_metzler(md.mixed_matrix)) j["mixed_spectral_abscissa"] = spectral_abscissa(md.mixed_matrix);
    return j;
}

Json to_json(const DirectionCertificate& cert) {
    return Json{{"kind", to_string(cert.kind)}, {"v", vec_json(cert.v)}, {"support", cert.support},
                {"margin", finite_or_null(cert.margin)}};
}

Json to_json(const Conclusion& c, const std::vector<std::string>& species) {
    Json j{{"outcome", to_string(c.outcome)}, {"reason", to_string(c.reason)}, {"support", c.support}};
    Json names = Json::array();
    for (std::size_t k : c.support) names.push_back(species.at(k));
    j["support_species"] = names;
    Json certs = Json::array();
    for (const auto& cert : c.certificates) certs.push_back(to_json(cert));
    j["certificates"] = certs;
    return j;
}

Json to_json(const RegimeVerdict& v, const std::vector<std::string>& species) {
    return Json{{"fast", to_json(v.fast, species)}, {"slow", to_json(v.slow, species)}};
}

Json to_json(const DriftReport& r, bool with_samples) {
    Json j{{"mode", to_string(r.mode)},
           {"kappa", finite_or_null(r.kappa)},
           {"algebraic_pass", r.algebraic_pass},
           {"b", finite_or_null(r.b)},
           {"c", finite_or_null(r.c)},
           {"d", finite_or_null(r.dconst)}};
    Json lead = Json::array();
    for (const Vec& row : r.leading) lead.push_back(vec_json(row));
    j["leading"] = lead;
    auto states = [](const std::vector<SampledState>& ss) {
        Json a = Json::array();
        for (const auto& s : ss) a.push_back(Json{{"x", s.x}, {"env", s.env}, {"value", finite_or_null(s.value)}});
        return a;
    };
    j["sampled_violations"] = states(r.sampled_violations);
    j["n_samples"] = r.samples.size();
    if (with_samples) j["samples"] = states(r.samples);
    return j;
}

}  // namespace switchcrn
