#include "cdimpact/synthetic.hpp"

#include "cdimpact/diff.hpp"
#include "cdimpact/matching.hpp"
#include "cdimpact/model_text.hpp"

#include "doctest.h"
#include "support/oracles.hpp"

#include <algorithm>
#include <memory>

using namespace cdimpact;

namespace {

std::vector<ModelDifference> rediff(const Model& old_m, const Model& new_m) {
    auto op = std::make_shared<Model>(old_m);
    auto np = std::make_shared<Model>(new_m);
    Matching match = match_models(*op, *np);
    return compute_diff(op, np, match).entries();
}

}  // namespace

TEST_CASE("generated models are deterministic per seed") {
    Model a = generate_model(40, 7);
    Model b = generate_model(40, 7);
    CHECK(a == b);
    CHECK(serialize_model(a) == serialize_model(b));

    Model c = generate_model(40, 8);
    CHECK_FALSE(a == c);
}

TEST_CASE("generated models survive a text round-trip") {
    for (std::uint64_t seed : {1ULL, 2ULL, 99ULL}) {
        Model m = generate_model(30, seed);
        CHECK(static_cast<int>(m.class_entries().size()) == 30);
        Model back = parse_model(serialize_model(m));
        CHECK(back == m);
    }
}

TEST_CASE("class count is honored and attributes are present") {
    Model m = generate_model(25, 3);
    CHECK(m.class_entries().size() == 25);
    for (const ClassEntry& ce : m.class_entries()) {
        CHECK_FALSE(ce.decl->attributes.empty());
    }
    CHECK_FALSE(m.package_entries().empty());
}

TEST_CASE("mutation result equals the base with the edit script applied") {
    Model base = generate_model(30, 11);
    MutationResult r = mutate_model(base, 12, 11);
    Model replayed = apply_edit_script(base, r.edits);
    CHECK(replayed == r.model);
    CHECK(std::is_sorted(r.expected.begin(), r.expected.end(), canonical_diff_less));
}

TEST_CASE("the differ recovers every generated manifest exactly") {
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
        int classes = 10 + static_cast<int>(seed % 4) * 15;
        int edits = 5 + static_cast<int>(seed % 7);
        CAPTURE(seed);
        CAPTURE(classes);
        CAPTURE(edits);
        SyntheticResult r = generate_synthetic(classes, edits, seed);
        std::vector<ModelDifference> got = rediff(r.old_model, r.new_model);
        REQUIRE(got.size() == r.expected.size());
        for (std::size_t i = 0; i < got.size(); ++i) {
            CAPTURE(i);
            CHECK(got[i] == r.expected[i]);
        }
    }
}

TEST_CASE("synthetic generation is fully deterministic") {
    SyntheticResult a = generate_synthetic(35, 14, 123);
    SyntheticResult b = generate_synthetic(35, 14, 123);
    CHECK(a.old_model == b.old_model);
    CHECK(a.new_model == b.new_model);
    CHECK(a.expected == b.expected);
    CHECK(a.edits.size() == b.edits.size());
}

TEST_CASE("identical models diff to nothing for generated inputs") {
    for (std::uint64_t seed : {5ULL, 6ULL, 7ULL}) {
        Model m = generate_model(50, seed);
        CHECK(rediff(m, m).empty());
    }
}

TEST_CASE("zero edits produce identical models and an empty manifest") {
    SyntheticResult r = generate_synthetic(20, 0, 9);
    CHECK(r.old_model == r.new_model);
    CHECK(r.expected.empty());
    CHECK(r.edits.empty());
}
