#pragma once

#include <cstdint>
#include <vector>

#include "cdimpact/diff.hpp"
#include "cdimpact/edit_script.hpp"
#include "cdimpact/model.hpp"

namespace cdimpact {

// Deterministic synthetic model: `classes` classes spread over a package
// tree, each with attributes, plus associations. Names are unique across
// the model; attribute name sets of distinct classes are disjoint, so
// distinct classes never meet the similarity threshold.
Model generate_model(int classes, std::uint64_t seed);

struct MutationResult {
    Model model;                           // base with the edits applied
    std::vector<EditOp> edits;
    std::vector<ModelDifference> expected; // canonical order
};

// Applies `edits` random edit operations to base (adds, deletes, renames,
// moves, retypes, cardinality, stereotype, superclass, and association-end
// changes). Each element is touched at most once and new names are kept
// dissimilar to every name involved in an edit, so compute_diff over the
// default threshold recovers exactly the returned manifest.
MutationResult mutate_model(const Model& base, int edits, std::uint64_t seed);

struct SyntheticResult {
    Model old_model;
    Model new_model;
    std::vector<EditOp> edits;
    std::vector<ModelDifference> expected;
};

SyntheticResult generate_synthetic(int classes, int edits, std::uint64_t seed);

}  // namespace cdimpact
