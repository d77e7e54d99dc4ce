#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cdimpact/builtin.hpp"
#include "cdimpact/checklist.hpp"
#include "cdimpact/engine.hpp"
#include "cdimpact/matching.hpp"

namespace cdimpact {

struct SyntheticRequest {
    int classes = 0;
    int edits = 0;
    std::uint64_t seed = 0;
};

struct RunConfig {
    std::string old_path;
    std::string new_path;
    std::optional<std::string> presettings_path;
    std::vector<std::string> rule_paths;          // concatenated in order
    std::optional<std::string> extensions_path;
    bool builtin_rules = false;
    ChecklistMode mode = ChecklistMode::Short;
    std::optional<std::string> out_path;          // checklist text; stdout if unset
    std::optional<std::string> json_out_path;     // structured checklist
    std::optional<std::string> diff_out_path;     // ".json" selects the tree format
    UnresolvedPolicy unresolved = UnresolvedPolicy::Flag;
    double threshold = kDefaultMatchThreshold;
    NamingConvention naming = NamingConvention::UpperSnake;
    std::optional<std::string> orm_file_path;
    std::optional<std::string> property_file_path;
    std::optional<std::string> sources_path;
    std::vector<std::string> scan_extensions;     // empty = defaults
    std::optional<std::string> relevant_for;
    std::optional<Severity> min_severity;
    std::optional<SyntheticRequest> generate;     // synthetic mode: writes old/new/manifest
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;  // unreadable input, parse or validation error
inline constexpr int kExitUnresolved = 2;  // unresolved names under the Fail policy

// Runs the whole pipeline described by cfg. Diagnostics go to err, the
// checklist to out or cfg.out_path. Returns one of the kExit* codes.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

// argv-level entry point used by the cdimpact binary.
int cli_main(int argc, const char* const* argv);

}  // namespace cdimpact
