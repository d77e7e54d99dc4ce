#pragma once

#include <cstddef>
#include <string_view>

#include "cdimpact/model.hpp"

namespace cdimpact {

std::size_t levenshtein_distance(std::string_view a, std::string_view b);

// 1 - levenshtein(a,b) / max(|a|,|b|); 1.0 when both strings are empty.
// Symmetric, range [0,1].
double name_similarity(std::string_view a, std::string_view b);

// Jaccard index of the attribute name sets; 1.0 when both classes have no
// attributes.
double structural_similarity(const ClassDecl& a, const ClassDecl& b);

}  // namespace cdimpact
