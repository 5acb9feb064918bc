#include <cmath>

#include <doctest.h>

#include "cogevo/decision.hpp"
#include "cogevo/irt.hpp"
#include "cogevo/rng.hpp"

using namespace cogevo;

namespace {

// 1-d knowledge whose ability puts icc(a=1,b=0) exactly at p.
KnowledgeStructure knowledge_for_icc(double p) {
    double theta = std::log(p / (1.0 - p));
    return {{(theta + 3.0) / 6.0}};
}

Item unit_item() {
    Item item;
    item.id = "u";
    item.irt_a = 1.0;
    item.irt_b = 0.0;
    item.stem_text = "unit";
    item.concept_weights = {{0, 1.0}};
    item.correct_option = 0;
    item.options.resize(2);
    item.options[1].misconception_tag = "u-tag";
    item.options[1].concept_index = 0;
    return item;
}

Item tagged_item() {
    Item item;
    item.id = "tagged";
    item.irt_a = 1.2;
    item.irt_b = 0.0;
    item.stem_text = "three concepts";
    item.concept_weights = {{0, 0.5}, {1, 0.3}, {2, 0.2}};
    item.correct_option = 1;
    item.options.resize(4);
    item.options[0].concept_index = 0;
    item.options[0].misconception_tag = "c0-tag";
    item.options[2].concept_index = 1;
    item.options[2].misconception_tag = "c1-tag";
    item.options[3].concept_index = 2;
    item.options[3].misconception_tag = "c2-tag";
    return item;
}

} // namespace

TEST_CASE("mastery_confidence formula and clamps") {
    auto item = unit_item();

    CognitiveState neutral{CognitiveLabel::Stable, 0.5, 0.0};
    auto k = knowledge_for_icc(0.8);
    // conf = 0.5: p_hat = 0.75 * icc
    CHECK(mastery_confidence(k, item, neutral) == doctest::Approx(0.6).epsilon(1e-9));

    Item hopeless;
    hopeless.id = "h";
    hopeless.irt_a = 60.0;
    hopeless.irt_b = 3.0; // icc(theta=-3) == 0 exactly at this saturation
    hopeless.concept_weights = {{0, 1.0}};
    CognitiveState deflated{CognitiveLabel::Frustrated, 0.0, 1.0};
    CHECK(mastery_confidence({{0.0}}, hopeless, deflated) == 0.0);

    Item certain;
    certain.id = "c";
    certain.irt_a = 60.0;
    certain.irt_b = -3.0;
    certain.concept_weights = {{0, 1.0}};
    CognitiveState soaring{CognitiveLabel::Flow, 1.0, 0.0};
    CHECK(mastery_confidence({{1.0}}, certain, soaring) == 1.0);
}

TEST_CASE("mastery_confidence is monotone in icc at fixed state") {
    CognitiveState state{CognitiveLabel::Exploring, 0.7, 0.2};
    auto item = unit_item();
    double prev = -1.0;
    for (double p = 0.05; p <= 0.95; p += 0.05) {
        double ph = mastery_confidence(knowledge_for_icc(p), item, state);
        CHECK(ph >= prev);
        CHECK(ph >= 0.0);
        CHECK(ph <= 1.0);
        prev = ph;
    }
}

TEST_CASE("decide: degenerate Bernoulli cases") {
    auto item = tagged_item();
    KnowledgeStructure k{{0.9, 0.2, 0.5}};

    Rng seeds(8);
    for (int trial = 0; trial < 100; ++trial) {
        auto sure = decide(k, item, 1.0, seeds.next_u64());
        CHECK(sure.is_correct);
        CHECK(sure.chosen_option == item.correct_option);
        CHECK(!sure.misconception_tag);

        auto doomed = decide(k, item, 0.0, seeds.next_u64());
        CHECK(!doomed.is_correct);
        // weakest relevant concept is 1 -> option 2 carries its tag
        CHECK(doomed.chosen_option == 2);
        CHECK(doomed.misconception_tag == "c1-tag");
    }
}

TEST_CASE("decide: misconception follows the weakest concept") {
    auto item = tagged_item();
    CHECK(*decide({{0.1, 0.9, 0.9}}, item, 0.0, 1).misconception_tag == "c0-tag");
    CHECK(*decide({{0.9, 0.9, 0.1}}, item, 0.0, 1).misconception_tag == "c2-tag");
    // tie on mastery: lower concept index wins
    CHECK(*decide({{0.5, 0.5, 0.5}}, item, 0.0, 1).misconception_tag == "c0-tag");
}

TEST_CASE("decide is reproducible per seed") {
    auto item = tagged_item();
    KnowledgeStructure k{{0.4, 0.6, 0.5}};
    for (uint64_t seed = 0; seed < 50; ++seed) {
        auto a = decide(k, item, 0.5, seed);
        auto b = decide(k, item, 0.5, seed);
        CHECK(a.chosen_option == b.chosen_option);
        CHECK(a.is_correct == b.is_correct);
        CHECK(a.misconception_tag == b.misconception_tag);
    }
}

TEST_CASE("embedding formulas") {
    Response correct;
    correct.is_correct = true;
    auto bv = behavior_embedding(correct, 1.0);
    CHECK(bv == std::array<double, 3>{1.0, 1.0, 0.0});

    CognitiveState flow{CognitiveLabel::Flow, 1.0, 0.0};
    CHECK(state_embedding(flow) == std::array<double, 3>{1.0, 1.0, 0.0});

    CognitiveState confused{CognitiveLabel::Confused, 0.0, 1.0};
    CHECK(state_embedding(confused) == std::array<double, 3>{0.0, 0.0, 1.0});
}

TEST_CASE("alignment: cosine cases and flagging") {
    HyperParams hp;

    SUBCASE("identical embeddings align perfectly") {
        Response r;
        r.is_correct = true;
        CognitiveState c{CognitiveLabel::Flow, 1.0, 0.0};
        // behavior (1,1,0) == state (1,1,0)
        auto rep = alignment(r, 1.0, c, hp);
        CHECK(rep.delta_align == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(!rep.flagged_low_confidence);
    }
    SUBCASE("orthogonal embeddings score zero and get flagged") {
        Response r;
        r.is_correct = false; // behavior (0, 0, 1)
        CognitiveState c{CognitiveLabel::Flow, 1.0, 0.0}; // state (1, 1, 0)
        auto rep = alignment(r, 0.0, c, hp);
        CHECK(rep.delta_align == doctest::Approx(0.0));
        CHECK(rep.flagged_low_confidence); // tau_align = 0.5 > 0
    }
    SUBCASE("dissonant low-p incorrect answer scores below the matched case") {
        CognitiveState confident{CognitiveLabel::Flow, 0.9, 0.1};
        Response wrong;
        wrong.is_correct = false;
        wrong.misconception_tag = "t";
        auto dissonant = alignment(wrong, 0.1, confident, hp);

        Response right;
        right.is_correct = true;
        auto matched = alignment(right, 0.9, confident, hp);

        // direct cosine oracle for the dissonant pair
        auto bv = behavior_embedding(wrong, 0.1);
        auto sv = state_embedding(confident);
        double dot = 0.0, nb = 0.0, ns = 0.0;
        for (size_t i = 0; i < 3; ++i) {
            dot += bv[i] * sv[i];
            nb += bv[i] * bv[i];
            ns += sv[i] * sv[i];
        }
        CHECK(dissonant.delta_align ==
              doctest::Approx(dot / (std::sqrt(nb) * std::sqrt(ns))).epsilon(1e-12));
        CHECK(dissonant.delta_align < matched.delta_align);
    }
    SUBCASE("flag is exactly the threshold comparison") {
        Response r;
        r.is_correct = true;
        CognitiveState c{CognitiveLabel::Stable, 0.6, 0.3};
        for (double tau = -1.0; tau <= 1.0; tau += 0.125) {
            hp.tau_align = tau;
            auto rep = alignment(r, 0.7, c, hp);
            CHECK(rep.flagged_low_confidence == (rep.delta_align < tau));
        }
    }
}

TEST_CASE("alignment is non-decreasing in confidence for a fixed confident correct response") {
    HyperParams hp;
    Response r;
    r.is_correct = true;
    double prev = -2.0;
    for (int i = 0; i <= 20; ++i) {
        CognitiveState c{CognitiveLabel::Stable, i / 20.0, 0.0};
        auto rep = alignment(r, 1.0, c, hp); // behavior pinned at (1,1,0)
        CHECK(rep.delta_align >= prev - 1e-12);
        prev = rep.delta_align;
    }
    CHECK(prev == doctest::Approx(1.0));
}
