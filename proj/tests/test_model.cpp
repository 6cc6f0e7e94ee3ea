#include <doctest.h>

#include <cmath>
#include <random>
#include <string>

#include "switchcrn/gallery.hpp"
#include "switchcrn/json_io.hpp"
#include "switchcrn/model.hpp"

using namespace switchcrn;

namespace {

Reaction make(Complex s, Complex p, double rate) { return {std::move(s), std::move(p), rate}; }

Complex cx(std::initializer_list<std::pair<const std::size_t, std::uint32_t>> c) { return Complex{c}; }

const char* kFig1 = R"(# two networks, symmetric switching
species S1 S2
environment 1
S1 -> 0 @ 0.99
0 -> S1 @ 1
S1 -> 4 S2 @ 0.01
S2 -> 0 @ 0.01
0 -> S2 @ 1
S2 -> 4 S1 @ 0.99
environment 2
S1 -> 0 @ 0.01
0 -> S1 @ 1
S1 -> 4 S2 @ 0.99
S2 -> 0 @ 0.99
0 -> S2 @ 1
S2 -> 4 S1 @ 0.01
switching
q 1 2 1
q 2 1 1
)";

}  // namespace

TEST_CASE("parse the two-network figure model") {
    SwitchedModel m = parse_model(kFig1);
    CHECK(m.n_env() == 2);
    CHECK(m.n_species() == 2);
    // the figure's networks have six reactions each
    CHECK(m.environment(0).reactions.size() == 6);
    CHECK(m.environment(1).reactions.size() == 6);
    CHECK(m.q()(0, 0) == -1.0);
    CHECK(m.q()(0, 1) == 1.0);
    CHECK(m == build("fig1"));
}

TEST_CASE("single environment with no reactions") {
    SwitchedModel m = parse_model("species X\nenvironment 1\n");
    CHECK(m.n_env() == 1);
    CHECK(m.environment(0).reactions.empty());
    CHECK(m.q()(0, 0) == 0.0);
}

TEST_CASE("parser errors") {
    CHECK_THROWS_AS(parse_model("species S1\nenvironment 1\nS1 -> S1 @ 1\n"), ModelError);
    CHECK_THROWS_AS(parse_model("species S1\nenvironment 1\nS1 -> 0 @ 0\n"), ModelError);
    CHECK_THROWS_AS(parse_model("species S1\nenvironment 1\nS1 -> 0 @ -2\n"), ModelError);
    CHECK_THROWS_AS(parse_model("environment 1\n"), ModelError);
    CHECK_THROWS_AS(parse_model("species S1\nenvironment 1\nS2 -> 0 @ 1\n"), ModelError);
    // two environments without switching are reducible
    CHECK_THROWS_AS(parse_model("species S\nenvironment 1\nenvironment 2\n"), ModelError);
    CHECK_THROWS_AS(parse_model("species S\nenvironment 1\nenvironment 2\nswitching\nq 1 2 -1\nq 2 1 1\n"),
                    ModelError);
    try {
        parse_model("species S1\nenvironment 1\nS1 -> 0 @ 1 $\n");
        FAIL("expected a syntax error");
    } catch (const ModelError& e) {
        CHECK(e.line() == 3);
        CHECK(e.column() > 0);
    }
}

TEST_CASE("Q validation") {
    CHECK(is_irreducible(Matrix{{-1, 1}, {1, -1}}));
    CHECK_FALSE(is_irreducible(Matrix{{-1, 1}, {0, 0}}));
    CHECK_NOTHROW(validate_q(Matrix{{-1, 1}, {2, -2}}));
    CHECK_THROWS_AS(validate_q(Matrix{{-1, 1.5}, {1, -1}}), ModelError);
    Matrix q = complete_diagonal(Matrix{{5, 2, 1}, {1, 0, 0}, {0, 3, 9}});
    CHECK(q(0, 0) == -3.0);
    CHECK(q(1, 1) == -1.0);
    CHECK(q(2, 2) == -3.0);
}

TEST_CASE("propensities use falling factorials") {
    CrnSpec one{1, {make(cx({{0, 3}}), cx({{0, 2}}), 1.0), make(cx({{0, 2}}), cx({{0, 3}}), 1.0)}};
    Vec p = propensities(one, {2});
    CHECK(p[0] == 0.0);
    p = propensities(one, {5});
    CHECK(p[1] == 20.0);
    CrnSpec two{2, {make(cx({{0, 1}}), cx({{1, 4}}), 0.01)}};
    CHECK(propensities(two, {7, 3})[0] == doctest::Approx(0.07).epsilon(1e-15));
    CHECK(propensity(make(Complex{}, cx({{0, 1}}), 2.5), {0, 0}) == 2.5);
}

TEST_CASE("linearization of the evanescent pair") {
    const double eps = 0.25;
    SwitchedModel m = build("ex4.1", {{"eps", eps}});
    LinearData l = linearize(m.environment(0));
    // column l collects the rates of reactions whose source is one molecule of species l
    CHECK(l.matrix(0, 0) == -4.0);
    CHECK(l.matrix(1, 0) == 2.0 * eps);
    CHECK(l.matrix(0, 1) == 2.0 * (1.0 - eps));
    CHECK(l.matrix(1, 1) == 0.0);
    CHECK(l.inflow == Vec{1.0, 1.0});
    CHECK(l.is_at_most_monomolecular);
    CHECK(l.is_linear_generator);
}

TEST_CASE("cancelling higher-order reactions keep the linear generator") {
    SwitchedModel a = build("ex4.1", {{"eps", 0.25}});
    SwitchedModel b = build("ex4.2", {{"eps", 0.25}});
    LinearData la = linearize(a.environment(0));
    LinearData lb = linearize(b.environment(0));
    CHECK(la.matrix == lb.matrix);
    CHECK_FALSE(lb.is_at_most_monomolecular);
    CHECK(lb.is_linear_generator);
}

TEST_CASE("higher-order network with linear net drift") {
    LinearData l = linearize(build("ex_trans").environment(0));
    CHECK(l.matrix(0, 0) == 1.0);
    CHECK(l.inflow == Vec{1.0});
    CHECK(l.is_linear_generator);
    CHECK_FALSE(l.is_at_most_monomolecular);

    CrnSpec dimer{1, {make(cx({{0, 2}}), Complex{}, 1.0)}};
    CHECK_FALSE(linearize(dimer).is_linear_generator);
}

TEST_CASE("net drift equals Mx + inflow for monomolecular networks") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> count(0, 60);
    for (const char* id : {"ex4.1", "ex4.3", "ex5.4", "ex6.2"}) {
        SwitchedModel m = build(id);
        for (const CrnSpec& crn : m.environments()) {
            LinearData l = linearize(crn);
            CHECK(l.is_at_most_monomolecular);
            for (int trial = 0; trial < 50; ++trial) {
                State x(m.n_species());
                for (auto& v : x) v = count(rng);
                Vec drift(m.n_species(), 0.0);
                Vec p = propensities(crn, x);
                for (std::size_t r = 0; r < crn.reactions.size(); ++r) {
                    auto d = reaction_delta(crn.reactions[r], m.n_species());
                    for (std::size_t k = 0; k < d.size(); ++k) drift[k] += p[r] * double(d[k]);
                }
                for (std::size_t row = 0; row < m.n_species(); ++row) {
                    double expect = l.inflow[row];
                    for (std::size_t col = 0; col < m.n_species(); ++col) expect += l.matrix(row, col) * double(x[col]);
                    CHECK(drift[row] == doctest::Approx(expect).epsilon(1e-12));
                }
            }
        }
    }
}

TEST_CASE("linearization is Metzler for monomolecular gallery models") {
    for (const auto& e : gallery_entries()) {
        SwitchedModel m = build(e.id);
        for (const CrnSpec& crn : m.environments()) {
            LinearData l = linearize(crn);
            if (!l.is_at_most_monomolecular) continue;
            for (std::size_t i = 0; i < l.matrix.rows(); ++i)
                for (std::size_t j = 0; j < l.matrix.cols(); ++j)
                    if (i != j) CHECK(l.matrix(i, j) >= 0.0);
        }
    }
}

TEST_CASE("text and JSON round trips") {
    for (const auto& e : gallery_entries()) {
        SwitchedModel m = build(e.id);
        CHECK(parse_model(emit_model(m)) == m);
        CHECK(model_from_json(model_to_json(m)) == m);
        CHECK(model_from_json(analysis_to_json(m)) == m);
    }
}

TEST_CASE("JSON accepts text complexes") {
    SwitchedModel m = model_from_json_text(R"({
      "species": ["A", "B"],
      "environments": [{"reactions": [{"source": "2 A + B", "product": "0", "rate": 0.5}]}],
      "q": [[0]]
    })");
    const Reaction& r = m.environment(0).reactions[0];
    CHECK(r.source[0] == 2);
    CHECK(r.source[1] == 1);
    CHECK(r.product.order() == 0);
    CHECK(complex_to_string(r.source, m.species()) == "2 A + B");
}

TEST_CASE("model files load") {
    const std::string dir = std::string(SWITCHCRN_SOURCE_DIR) + "/models/";
    CHECK(load_model_file(dir + "ex4_1.crn") == build("ex4.1", {{"eps", 0.25}}));
    CHECK(load_model_file(dir + "ex4_3.crn") == build("ex4.3", {{"eps", 0.05}}));
    CHECK(load_model_file(dir + "fig1.crn") == build("fig1"));
    CHECK_THROWS(load_model_file(dir + "missing.crn"));
}
