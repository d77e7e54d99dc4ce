#pragma once

#include <string>
#include <string_view>

#include "cdimpact/model.hpp"

namespace cdimpact {

// Parses the textual model format:
//
//   package de {
//     <<persistent>> class TroubleCd extends de.Base {
//       name: String [1]
//     }
//   }
//   association Owns [1] de.Customer -> [0..*] de.Account
//
// '//' starts a line comment. Throws ParseError with line/column on syntax
// errors, duplicate names, and unresolvable references.
Model parse_model(std::string_view text);

// Inverse of parse_model up to structural equality; ends with a newline.
// An empty model serializes to a single newline.
std::string serialize_model(const Model& m);

}  // namespace cdimpact
