#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cdimpact/model.hpp"
#include "cdimpact/rule_ast.hpp"

namespace cdimpact {

// Parses impact rule files (.ir):
//
//   impactRule "ORM file analysis" {
//     description = "..."
//     severity = critical          // minor | normal | critical
//     probability = high           // low | medium | high
//     relevantFor = "dbteam"
//     impact {
//       pc.addedPersistentClass() && addedActiveClass() => "Add entry..."
//     }
//   }
//
// Metadata keys may appear in any order, each at most once; description is
// mandatory. Operators: ! binds tighter than &&, which binds tighter than
// ||. A raw line break inside a string literal is treated as wrapping and
// collapses to a single space; real line breaks are written '\n'.
// Throws ParseError (duplicate rule names included).
RuleSet parse_rules(std::string_view text);

// Parses extension files (.irx) of 'define condition'/'define placeholder'
// declarations. Rejects duplicate names per kind and cyclic condition
// definitions.
std::vector<ExtensionDecl> parse_extensions(std::string_view text);

// Canonical pretty-printer; parse_rules(print_rules(rs)) reproduces rs.
std::string print_rules(const RuleSet& rs);
std::string print_extensions(const std::vector<ExtensionDecl>& exts);

enum class DiagnosticSeverity { Error, Warning };

struct Diagnostic {
    DiagnosticSeverity severity = DiagnosticSeverity::Error;
    std::string code;     // e.g. UNKNOWN_PREDEFINED, UNRESOLVED_CONDITION
    std::string message;

    bool is_error() const { return severity == DiagnosticSeverity::Error; }
};

struct PredefinedSignature {
    std::string name;
    int arity = 0;
};

// The fixed predefined-condition catalog: one zero-argument condition per
// difference kind, elementHasStereotype(s), elementNameMatches(regex), and
// the persistent-element shorthands.
const std::vector<PredefinedSignature>& predefined_catalog();
bool is_predefined_condition(std::string_view name);

// Checks rules and extensions against the predefined catalog plus the given
// registered names. Unknown predefined conditions and arity mismatches are
// errors; user conditions and placeholders that resolve neither to an
// extension nor to a registered name are warnings (UNRESOLVED_CONDITION /
// UNRESOLVED_PLACEHOLDER); placeholder declarations naming an unknown
// provider are errors.
std::vector<Diagnostic> validate(const RuleSet& rs, const std::vector<ExtensionDecl>& exts,
                                 const std::set<std::string>& registered_conditions = {},
                                 const std::set<std::string>& registered_placeholders = {});

}  // namespace cdimpact
