#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "switchcrn/gallery.hpp"
#include "switchcrn/mixing.hpp"

using namespace switchcrn;

TEST_CASE("entries build with their defaults") {
    std::set<std::string> ids;
    for (const auto& e : gallery_entries()) {
        CAPTURE(e.id);
        CHECK(ids.insert(e.id).second);
        CHECK_FALSE(e.description.empty());
        SwitchedModel m = build(e.id);
        CHECK(m.n_env() >= 1);
        CHECK_NOTHROW(validate_q(m.q()));
        Params p = resolve_params(e.id, {});
        for (const auto& s : e.params) CHECK(p.count(s.name) == 1);
    }
    for (const char* id : {"ex4.1", "ex4.2", "ex4.3", "fig1", "ex4.4", "ex4.5", "ex_trans", "ex4.6", "ex4.7",
                           "ex5.1", "ex5.4", "ex5.6", "ex6.2"})
        CHECK(ids.count(id) == 1);
}

TEST_CASE("aliases and unknown ids") {
    CHECK(gallery_entry("ex_disjoint").id == "ex4.6");
    CHECK(build("ex_disjoint") == build("ex4.6"));
    CHECK_THROWS_AS(gallery_entry("ex9.9"), std::invalid_argument);
    CHECK_THROWS_AS(build("nope"), std::invalid_argument);
}

TEST_CASE("parameter domains") {
    CHECK_THROWS(resolve_params("ex4.1", {{"eps", 0.0}}));
    CHECK_THROWS(resolve_params("ex4.1", {{"eps", 1.0}}));
    CHECK_THROWS(resolve_params("ex4.1", {{"bogus", 1.0}}));
    CHECK_THROWS(resolve_params("ex4.4", {{"n", 2.5}}));
    CHECK_THROWS(resolve_params("ex4.4", {{"beta", -1.0}}));
    CHECK_THROWS(resolve_params("ex5.6", {{"N", 9}}));
    CHECK_THROWS(resolve_params("ex5.6", {{"small_evanescent", 0.5}}));
    CHECK_THROWS(resolve_params("ex5.6", {{"window_low", 10.0}, {"window_high", 5.0}}));
    CHECK(resolve_params("ex4.1", {{"eps", 0.3}}).at("eps") == 0.3);
}

TEST_CASE("figure model is the ergodic pair at eps 0.01") {
    CHECK(build("fig1") == build("ex4.3", {{"eps", 0.01}}));
    CHECK(build("fig1").environment(0).reactions.size() == 6);
}

TEST_CASE("expected verdicts track parameters") {
    auto e = expected_verdict("ex4.3", {{"eps", 0.3}});
    CHECK(e.slow.outcome == Outcome::EvanescentEventually);
    e = expected_verdict("ex4.3", {{"eps", 0.05}});
    CHECK(e.slow.outcome == Outcome::ErgodicEventually);
    e = expected_verdict("ex4.4", {{"n", 4}, {"alpha", 1}, {"beta", 1}});
    CHECK(e.fast.outcome == Outcome::EvanescentEventually);
    e = expected_verdict("ex4.4", {{"n", 4}, {"alpha", 1}, {"beta", 3}});
    CHECK(e.fast.outcome == Outcome::ErgodicEventually);
    e = expected_verdict("ex4.4", {{"n", 4}, {"alpha", 1}, {"beta", 2}});
    CHECK(e.fast.reason == UnknownReason::NearCritical);
    for (double alpha : {0.5, 3.0, 5.0}) {
        Params p{{"alpha", alpha}};
        RegimeVerdict v = classify(build("ex6.2", p));
        CHECK(matches(v.fast, expected_verdict("ex6.2", p).fast));
    }
}

TEST_CASE("matches compares outcome, reason and support") {
    Conclusion c;
    c.outcome = Outcome::EvanescentEventually;
    c.support = {0, 1};
    CHECK(matches(c, {Outcome::EvanescentEventually, UnknownReason::None, {0, 1}}));
    CHECK_FALSE(matches(c, {Outcome::EvanescentEventually, UnknownReason::None, {1}}));
    CHECK_FALSE(matches(c, {Outcome::ErgodicEventually, UnknownReason::None, {0, 1}}));
    Conclusion u;
    u.reason = UnknownReason::MixedStability;
    CHECK(matches(u, {Outcome::Unknown, UnknownReason::MixedStability, {}}));
    CHECK_FALSE(matches(u, {Outcome::Unknown, UnknownReason::NoCommonSupport, {}}));
}

TEST_CASE("composite windows are ordered") {
    for (double n : {1.0, 2.0, 3.0}) {
        Params p{{"N", n}, {"window_low", 2.0}, {"window_high", 400.0}};
        CompositeDesign des = composite_design(p);
        REQUIRE(des.betas.size() == std::size_t(n) + 2);
        for (std::size_t j = 1; j + 1 < des.betas.size(); ++j) {
            CHECK(des.kappa_max[j] == 2.0);
            CHECK(des.kappa_min[j] == 400.0);
            // window j ends before window j+1 starts once scaled
            if (j + 2 < des.betas.size()) CHECK(des.betas[j] * des.kappa_min[j] < des.betas[j + 1] * des.kappa_max[j + 1]);
        }
        SwitchedModel m = build("ex5.6", p);
        std::size_t species = 0;
        for (const auto& b : des.block_species) species += b.size();
        CHECK(m.n_species() == species);
        RegimeVerdict v = classify(m);
        auto want = expected_verdict("ex5.6", p);
        CHECK(matches(v.fast, want.fast));
        CHECK(matches(v.slow, want.slow));
    }
    Params ends{{"N", 1}, {"small_evanescent", 1}, {"large_evanescent", 1}, {"window_low", 2.0}, {"window_high", 400.0}};
    RegimeVerdict v = classify(build("ex5.6", ends));
    CHECK(v.fast.outcome == Outcome::EvanescentEventually);
    CHECK(v.slow.outcome == Outcome::EvanescentEventually);
}

TEST_CASE("composite defaults come from the drift thresholds") {
    Params p = resolve_params("ex5.6", {});
    CHECK(p.at("window_low") > 0.0);
    CHECK(p.at("window_high") > p.at("window_low"));
}

TEST_CASE("sweep plans") {
    SweepPlan d = default_sweep("ex4.1");
    CHECK(d.kappas.size() == 13);
    CHECK(d.kappas.front() == doctest::Approx(1e-3));
    CHECK(d.kappas.back() == doctest::Approx(1e3));
    CHECK(d.method == SimMethod::Direct);
    SweepPlan w = default_sweep("ex5.4");
    CHECK(std::is_sorted(w.kappas.begin(), w.kappas.end()));
    CHECK(w.method == SimMethod::Auto);
    Params p{{"N", 2}, {"window_low", 2.0}, {"window_high", 400.0}};
    SweepPlan c = default_sweep("ex5.6", p);
    CHECK(c.kappas.size() == 5);
    CHECK(std::is_sorted(c.kappas.begin(), c.kappas.end()));
    // the interior points sit inside the scaled windows
    CompositeDesign des = composite_design(p);
    CHECK(c.kappas[1] > des.betas[1] * 2.0);
    CHECK(c.kappas[1] < des.betas[1] * 400.0);
    CHECK(c.kappas[3] > des.betas[2] * 2.0);
    CHECK(c.kappas[3] < des.betas[2] * 400.0);
}
