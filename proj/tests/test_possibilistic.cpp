#include "doctest.h"

#include <random>

#include "ctx/possibilistic.hpp"
#include "support/builders.hpp"

using namespace ctx;

namespace {

std::string chain_text(const std::vector<ChainStep>& chain) {
    std::string out;
    for (const auto& step : chain) {
        if (!out.empty()) out += " ";
        out += step.measurement + "=" + step.outcome + "@" + join_key(step.via_context);
    }
    return out;
}

} // namespace

TEST_CASE("global sections of the standard tables") {
    CHECK(global_sections(fixtures::pr_box_model()).empty());
    CHECK(global_sections(fixtures::signalling_model()).empty());

    const auto hardy_sections = global_sections(fixtures::hardy_model());
    REQUIRE(hardy_sections.size() == 2);
    CHECK(assignment_key(hardy_sections[0]) == "A0=0,A1=0,B0=0,B1=0");
    CHECK(assignment_key(hardy_sections[1]) == "A0=1,A1=1,B0=1,B1=1");

    const auto det_sections = global_sections(fixtures::deterministic_model());
    REQUIRE(det_sections.size() == 1);
    CHECK(assignment_key(det_sections[0]) == "A0=1,A1=1,B0=1,B1=1");
}

TEST_CASE("sections restrict into every support") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 25; ++trial) {
        const auto model = fixtures::random_bipartite_model(rng, 6);
        const auto support = support_of(model);
        for (const auto& g : global_sections(model)) {
            for (std::size_t c = 0; c < model.scenario.contexts.size(); ++c) {
                CHECK(support.contains(static_cast<int>(c),
                                       restrict_assignment(g, model.scenario.contexts[c])));
            }
        }
    }
}

TEST_CASE("extendability on the hardy-style table") {
    const auto model = fixtures::hardy_model();
    CHECK_FALSE(is_extendable(model, {"A1", "B1"}, {"0", "1"}));
    CHECK(is_extendable(model, {"A0", "B0"}, {"0", "0"}));
    CHECK(is_extendable(fixtures::deterministic_model(), {"A0", "B0"}, {"1", "1"}));
    // result outside the support is an argument error
    CHECK_THROWS_AS(is_extendable(model, {"A0", "B0"}, {"0", "1"}), std::invalid_argument);
}

TEST_CASE("classification of the standard tables") {
    const auto sig = classify(fixtures::signalling_model());
    CHECK(sig.level == ContextualityLevel::Strong);
    CHECK(sig.signalling);

    const auto pr = classify(fixtures::pr_box_model());
    CHECK(pr.level == ContextualityLevel::Strong);
    CHECK_FALSE(pr.signalling);

    const auto chsh = classify(fixtures::chsh_model());
    CHECK(chsh.level == ContextualityLevel::Weak);
    CHECK_FALSE(chsh.signalling);
    REQUIRE(chsh.certificate.has_value());
    CHECK(chsh.certificate->value > chsh.certificate->classical_bound);

    const auto hardy = classify(fixtures::hardy_model());
    CHECK(hardy.level == ContextualityLevel::Logical);
    CHECK_FALSE(hardy.signalling);
    REQUIRE(hardy.non_extendable.has_value());
    CHECK_FALSE(is_extendable(fixtures::hardy_model(), hardy.non_extendable->context,
                              hardy.non_extendable->result));

    const auto det = classify(fixtures::deterministic_model());
    CHECK(det.level == ContextualityLevel::NonContextual);
    REQUIRE(det.certificate.has_value());
    CHECK(det.certificate->feasible);
}

TEST_CASE("liar's cycle on the box table from a single seed") {
    GlobalAssignment seed{{{"A0", "1"}}};
    const auto chain = non_extendability_chain(fixtures::pr_box_model(), seed);
    REQUIRE(chain.size() == 4);
    CHECK(chain_text(chain) == "B0=1@A0,B0 A1=1@A1,B0 B1=0@A1,B1 A0=0@A0,B1");
}

TEST_CASE("chain on the hardy-style table") {
    const auto chain =
        non_extendability_chain(fixtures::hardy_model(), {"A1", "B1"}, {"0", "1"});
    REQUIRE(chain.size() == 3);
    CHECK(chain_text(chain) == "B0=0@A1,B0 A0=0@A0,B0 B1=0@A0,B1");
}

TEST_CASE("chain rejects extendable inputs") {
    CHECK_THROWS_AS(
        non_extendability_chain(fixtures::deterministic_model(), {"A0", "B0"}, {"1", "1"}),
        std::invalid_argument);
    GlobalAssignment seed{{{"A0", "2"}}};
    CHECK_THROWS_AS(non_extendability_chain(fixtures::pr_box_model(), seed),
                    std::invalid_argument);
}

TEST_CASE("hierarchy coherence on random models") {
    std::mt19937_64 rng(123);
    for (int trial = 0; trial < 40; ++trial) {
        const auto model = (trial % 3 == 0) ? fixtures::random_feasible_model(rng, 8)
                                            : fixtures::random_bipartite_model(rng, 8);
        const auto classification = classify(model);
        const auto sections = global_sections(model);
        const bool feasible = check_hidden_distribution(model).feasible;

        if (classification.level == ContextualityLevel::Strong) CHECK(sections.empty());
        if (!sections.empty()) CHECK(classification.level != ContextualityLevel::Strong);
        CHECK((classification.level == ContextualityLevel::NonContextual) == feasible);
        if (classification.signalling) {
            CHECK(classification.level != ContextualityLevel::NonContextual);
        }
        if (classification.level == ContextualityLevel::Logical) {
            REQUIRE(classification.non_extendable.has_value());
            CHECK_FALSE(is_extendable(model, classification.non_extendable->context,
                                      classification.non_extendable->result));
        }
    }
}

TEST_CASE("possibilistic collapse preserves sections and extendability") {
    std::mt19937_64 rng(321);
    for (int trial = 0; trial < 15; ++trial) {
        const auto model = fixtures::random_bipartite_model(rng, 8);
        // uniform over each support row
        EmpiricalModel collapsed;
        collapsed.scenario = model.scenario;
        collapsed.tables.resize(model.tables.size());
        for (std::size_t c = 0; c < model.tables.size(); ++c) {
            std::size_t positive = 0;
            for (const auto& [r, p] : model.tables[c]) {
                if (p > 0) ++positive;
            }
            for (const auto& [r, p] : model.tables[c]) {
                collapsed.tables[c][r] = (p > 0) ? Rational(1, positive) : Rational(0);
            }
        }
        CHECK(global_sections(model) == global_sections(collapsed));
        const auto support = support_of(model);
        for (std::size_t c = 0; c < model.scenario.contexts.size(); ++c) {
            for (const auto& r : support.by_context[c]) {
                CHECK(is_extendable(model, model.scenario.contexts[c], r) ==
                      is_extendable(collapsed, collapsed.scenario.contexts[c], r));
            }
        }
    }
}
