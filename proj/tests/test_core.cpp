#include <doctest.h>

#include "cogevo/rng.hpp"
#include "cogevo/types.hpp"

using namespace cogevo;

TEST_CASE("clamp_knowledge basic cases") {
    CHECK(clamp_knowledge({{0.5, 0.5}}).mastery == std::vector<double>{0.5, 0.5});
    CHECK(clamp_knowledge({{-0.2, 1.3}}).mastery == std::vector<double>{0.0, 1.0});
    CHECK(clamp_knowledge({{0.0, 1.0, 0.7}}).mastery == std::vector<double>{0.0, 1.0, 0.7});
}

TEST_CASE("clamp_knowledge is idempotent on random vectors") {
    Rng rng(42);
    for (int trial = 0; trial < 1000; ++trial) {
        KnowledgeStructure k;
        size_t d = 1 + rng.below(8);
        for (size_t i = 0; i < d; ++i) k.mastery.push_back(rng.uniform(-2.0, 3.0));
        auto once = clamp_knowledge(k);
        auto twice = clamp_knowledge(once);
        CHECK(once.mastery == twice.mastery);
        for (double m : once.mastery) {
            CHECK(m >= 0.0);
            CHECK(m <= 1.0);
        }
    }
}

TEST_CASE("ability_from_knowledge") {
    CHECK(ability_from_knowledge({{0.5, 0.5, 0.5}}) == doctest::Approx(0.0));
    CHECK(ability_from_knowledge({{1.0, 1.0}}) == doctest::Approx(3.0));
    // direct arithmetic: -3 + 6 * mean([0.2, 0.6]) = -3 + 6 * 0.4
    CHECK(ability_from_knowledge({{0.2, 0.6}}) == doctest::Approx(-3.0 + 6.0 * 0.4));
    CHECK_THROWS_AS(ability_from_knowledge(KnowledgeStructure{}), InvariantError);
}

TEST_CASE("ability is monotone and bounded") {
    Rng rng(7);
    for (int trial = 0; trial < 1000; ++trial) {
        size_t d = 1 + rng.below(6);
        KnowledgeStructure k, k2;
        for (size_t i = 0; i < d; ++i) {
            double base = rng.uniform01();
            k.mastery.push_back(base);
            k2.mastery.push_back(std::min(1.0, base + rng.uniform01() * (1.0 - base)));
        }
        CHECK(ability_from_knowledge(k) <= ability_from_knowledge(k2) + 1e-12);
        double theta = ability_from_knowledge(clamp_knowledge(k));
        CHECK(theta >= -3.0);
        CHECK(theta <= 3.0);
    }
}

TEST_CASE("item validation catches malformed items") {
    Item item;
    item.id = "x";
    item.irt_a = 1.2;
    item.concept_weights = {{0, 0.6}, {1, 0.4}};
    item.correct_option = 0;
    item.options.resize(3);
    item.options[1].misconception_tag = "t1";
    item.options[2].misconception_tag = "t2";
    CHECK_NOTHROW(item.validate(2));

    SUBCASE("weights must sum to 1") {
        item.concept_weights = {{0, 0.6}, {1, 0.3}};
        CHECK_THROWS_AS(item.validate(2), DataError);
    }
    SUBCASE("discrimination must be positive") {
        item.irt_a = 0.0;
        CHECK_THROWS_AS(item.validate(2), DataError);
    }
    SUBCASE("correct option must not carry a tag") {
        item.options[0].misconception_tag = "oops";
        CHECK_THROWS_AS(item.validate(2), DataError);
    }
    SUBCASE("every distractor needs a tag") {
        item.options[2].misconception_tag.reset();
        CHECK_THROWS_AS(item.validate(2), DataError);
    }
}

TEST_CASE("hyperparameter invariants") {
    HyperParams hp;
    CHECK_NOTHROW(hp.validate());

    SUBCASE("alpha + beta must be 1") {
        hp.alpha_sem = 0.7;
        CHECK_THROWS_AS(hp.validate(), ConfigError);
    }
    SUBCASE("zpd band must be ordered") {
        hp.zpd_hi = hp.zpd_lo;
        CHECK_THROWS_AS(hp.validate(), ConfigError);
    }
    SUBCASE("eta in (0,1]") {
        hp.eta_step = 1.5;
        CHECK_THROWS_AS(hp.validate(), ConfigError);
    }
}
