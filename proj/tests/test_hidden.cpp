#include "doctest.h"

#include <random>

#include "ctx/errors.hpp"
#include "ctx/hidden.hpp"
#include "support/builders.hpp"
#include "support/lp_oracle.hpp"

using namespace ctx;

namespace {

/// Exact re-marginalization of a hidden distribution against every cell.
void check_distribution_reproduces(const EmpiricalModel& model, const HiddenDistribution& d) {
    Rational total = 0;
    for (const auto& [g, w] : d.weights) {
        CHECK(w > 0);
        total += w;
    }
    CHECK(total == 1);
    for (std::size_t c = 0; c < model.scenario.contexts.size(); ++c) {
        const auto& context = model.scenario.contexts[c];
        for (const auto& [result, p] : model.tables[c]) {
            Rational sum = 0;
            for (const auto& [g, w] : d.weights) {
                if (restrict_assignment(g, context) == result) sum += w;
            }
            CHECK(sum == p);
        }
    }
}

} // namespace

TEST_CASE("enumerate_assignments counts and order") {
    const auto assignments = enumerate_assignments(fixtures::bipartite_scenario());
    CHECK(assignments.size() == 16);
    CHECK(assignment_key(assignments.front()) == "A0=0,A1=0,B0=0,B1=0");
    CHECK(assignment_key(assignments.back()) == "A0=1,A1=1,B0=1,B1=1");
    // last measurement varies fastest
    CHECK(assignment_key(assignments[1]) == "A0=0,A1=0,B0=0,B1=1");

    const auto single = enumerate_assignments(MeasurementScenario::make(
        {"M"}, {{"M", {"a", "b", "c"}}}, {{"M"}}));
    CHECK(single.size() == 3);

    const auto pair = enumerate_assignments(MeasurementScenario::make(
        {"M", "N"}, {{"M", {"0", "1"}}, {"N", {"x", "y", "z"}}}, {{"M", "N"}}));
    CHECK(pair.size() == 6);
}

TEST_CASE("enumerate_assignments respects the cap") {
    std::vector<std::string> measurements;
    std::map<std::string, std::vector<std::string>> outcomes;
    std::vector<Context> contexts;
    for (int i = 0; i < 30; ++i) {
        const std::string m = "M" + std::to_string(i);
        measurements.push_back(m);
        outcomes[m] = {"0", "1"};
        contexts.push_back({m});
    }
    const auto scenario = MeasurementScenario::make(measurements, outcomes, contexts);
    CHECK_THROWS_AS(enumerate_assignments(scenario), SizeLimitError);
    CHECK_THROWS_AS(enumerate_assignments(scenario, 1 << 20), SizeLimitError);
}

TEST_CASE("deterministic table has a point-mass witness") {
    const auto certificate = check_hidden_distribution(fixtures::deterministic_model());
    REQUIRE(certificate.feasible);
    REQUIRE(certificate.distribution.weights.size() == 1);
    const auto& [g, w] = certificate.distribution.weights.front();
    CHECK(w == 1);
    CHECK(assignment_key(g) == "A0=1,A1=1,B0=1,B1=1");
    check_distribution_reproduces(fixtures::deterministic_model(), certificate.distribution);
}

TEST_CASE("fifty-fifty table mixes the two constant assignments") {
    const auto certificate = check_hidden_distribution(fixtures::fifty_fifty_model());
    REQUIRE(certificate.feasible);
    REQUIRE(certificate.distribution.weights.size() == 2);
    CHECK(assignment_key(certificate.distribution.weights[0].first) == "A0=0,A1=0,B0=0,B1=0");
    CHECK(certificate.distribution.weights[0].second == Rational(1, 2));
    CHECK(assignment_key(certificate.distribution.weights[1].first) == "A0=1,A1=1,B0=1,B1=1");
    CHECK(certificate.distribution.weights[1].second == Rational(1, 2));
    check_distribution_reproduces(fixtures::fifty_fifty_model(), certificate.distribution);
}

TEST_CASE("contextual tables are infeasible with strict dual certificates") {
    for (const auto& model : {fixtures::pr_box_model(), fixtures::chsh_model(),
                              fixtures::signalling_model()}) {
        const auto certificate = check_hidden_distribution(model);
        CHECK_FALSE(certificate.feasible);
        CHECK(certificate.value > certificate.classical_bound);
        // re-evaluate the functional independently
        const auto evaluation = bell_functional_value(model, certificate.functional);
        CHECK(evaluation.value == certificate.value);
        CHECK(evaluation.classical_bound == certificate.classical_bound);
    }
}

TEST_CASE("is_weakly_contextual on the standard tables") {
    CHECK_FALSE(is_weakly_contextual(fixtures::deterministic_model()));
    CHECK_FALSE(is_weakly_contextual(fixtures::fifty_fifty_model()));
    CHECK(is_weakly_contextual(fixtures::signalling_model()));
    CHECK(is_weakly_contextual(fixtures::pr_box_model()));
    CHECK(is_weakly_contextual(fixtures::chsh_model()));
    CHECK(is_weakly_contextual(fixtures::hardy_model()));
}

TEST_CASE("CHSH correlator values") {
    const auto functional = fixtures::chsh_correlator();
    const auto chsh = bell_functional_value(fixtures::chsh_model(), functional);
    CHECK(chsh.value == Rational(5, 2));
    CHECK(chsh.classical_bound == 2);

    const auto pr = bell_functional_value(fixtures::pr_box_model(), functional);
    CHECK(pr.value == 4);
    CHECK(pr.classical_bound == 2);

    const auto zero = bell_functional_value(fixtures::pr_box_model(), CellFunctional{});
    CHECK(zero.value == 0);
    CHECK(zero.classical_bound == 0);
}

TEST_CASE("bell_functional_value rejects unknown keys") {
    CellFunctional bad_context;
    bad_context[{"A0", "A1"}][{"0", "0"}] = 1;
    CHECK_THROWS_AS(bell_functional_value(fixtures::pr_box_model(), bad_context),
                    std::invalid_argument);
    CellFunctional bad_result;
    bad_result[{"A0", "B0"}][{"0", "2"}] = 1;
    CHECK_THROWS_AS(bell_functional_value(fixtures::pr_box_model(), bad_result),
                    std::invalid_argument);
}

TEST_CASE("feasibility agrees with the elimination oracle") {
    std::mt19937_64 rng(2024);
    int feasible_count = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const auto model = (trial % 2 == 0) ? fixtures::random_bipartite_model(rng, 8)
                                            : fixtures::random_feasible_model(rng, 8);
        const auto certificate = check_hidden_distribution(model);
        CHECK(certificate.feasible == oracle::oracle_hidden_feasible(model));
        if (certificate.feasible) {
            ++feasible_count;
            check_distribution_reproduces(model, certificate.distribution);
        } else {
            CHECK(certificate.value > certificate.classical_bound);
        }
    }
    CHECK(feasible_count >= 30); // every mixture model is feasible
}

TEST_CASE("signalling implies weak contextuality") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 40; ++trial) {
        const auto model = fixtures::random_bipartite_model(rng, 8);
        if (!check_no_signalling(model).no_signalling) {
            CHECK(is_weakly_contextual(model));
        }
    }
}
