#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cdimpact/engine.hpp"

namespace cdimpact {

struct ChecklistSection {
    std::string rule_name;
    std::string description;
    std::optional<Severity> severity;
    std::optional<Probability> probability;
    std::optional<std::string> relevant_for;
    std::vector<ChecklistHint> hints;  // never empty

    bool operator==(const ChecklistSection&) const = default;
};

// Hints grouped into sections, one per rule that produced at least one
// hint, in RuleSet order.
struct Checklist {
    std::vector<ChecklistSection> sections;

    bool empty() const { return sections.empty(); }
    bool operator==(const Checklist&) const = default;
};

Checklist build_checklist(const RuleSet& rs, const std::vector<ChecklistHint>& hints);

enum class ChecklistMode { Short, Detailed };

// Text rendering. Short mode:
//
//   ORM file analysis:
//   =====
//   - Add entry to mapping file for new class. (Causing model change: Added class 'de.test.ECU')
//
// Detailed mode adds Description:/Severity:/Probability:/Relevant for:
// lines after the ===== line and an indented [unresolved] marker line after
// flagged hints. Sections are separated by one blank line. Deterministic,
// LF-only. An empty checklist renders to an empty string.
std::string render_text(const Checklist& cl, ChecklistMode mode);

// JSON export; parse_structured inverts it.
std::string render_structured(const Checklist& cl);
Checklist parse_structured(std::string_view json_text);

}  // namespace cdimpact
