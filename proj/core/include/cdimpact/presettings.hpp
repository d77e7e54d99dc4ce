#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cdimpact/model.hpp"

namespace cdimpact {

enum class PresetInstruction { Renamed, Moved };

// A user-provided matching override:
//   renamed "de.TroubleCd#name" to "newName";
//   moved "de.TroubleCd" to "de.codes";
// subject refers into the old model. For Renamed, target is the new simple
// name; for Moved, target is the new container's qualified name. Subjects
// without a '#' part parse as class refs; match_models falls back to a
// package of the same name when no class resolves.
struct Presetting {
    PresetInstruction instruction = PresetInstruction::Renamed;
    ElementRef subject;
    std::string target;

    bool operator==(const Presetting&) const = default;
};

struct PresettingSet {
    std::vector<Presetting> items;

    bool empty() const { return items.empty(); }
};

// Throws ParseError on syntax errors, malformed refs/targets, and duplicate
// subjects.
PresettingSet parse_presettings(std::string_view text);

// Canonical form; parse_presettings(print_presettings(ps)) reproduces ps.
std::string print_presettings(const PresettingSet& set);

}  // namespace cdimpact
