#pragma once

#include <map>
#include <string>
#include <vector>

#include "cdimpact/model.hpp"
#include "cdimpact/presettings.hpp"

namespace cdimpact {

class MatchError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class MatchProvenance { Preset, Exact, Similarity };

std::string to_string(MatchProvenance p);

struct MatchPair {
    ElementRef old_ref;
    ElementRef new_ref;
    MatchProvenance provenance = MatchProvenance::Exact;
    double score = 1.0;  // similarity score; 1.0 for preset/exact pairs
};

// Injective partial mapping between old-model and new-model elements.
class Matching {
public:
    const std::vector<MatchPair>& pairs() const { return pairs_; }

    void add(MatchPair pair);  // throws MatchError if either side is already matched

    const MatchPair* find_by_old(const ElementRef& ref) const;
    const MatchPair* find_by_new(const ElementRef& ref) const;

    // Maps an old class qname to its new counterpart; identity if unmatched.
    std::string map_class(const std::string& old_qname) const;
    // Maps an old package qname through matched package pairs, rewriting the
    // longest matched prefix; identity if nothing applies.
    std::string map_package(const std::string& old_qname) const;

private:
    static std::string key(const ElementRef& ref);

    std::vector<MatchPair> pairs_;
    std::map<std::string, std::size_t> by_old_;
    std::map<std::string, std::size_t> by_new_;
    std::map<std::string, std::string> class_map_;
    std::map<std::string, std::string> package_map_;
};

inline constexpr double kDefaultMatchThreshold = 0.65;

// Matches elements of the two models in four stages: presettings as forced
// pairs, exact matching on (kind, container-mapped qualified name), greedy
// best-score similarity matching above `threshold`, and leftovers staying
// unmatched. Scores: classes 0.6*nameSim + 0.4*structSim; attributes (only
// within matched container pairs) 0.7*nameSim + 0.3*typeSim; associations
// by name, then nameSim. Packages match by qualified name only; package
// renames come from presettings. Throws MatchError when a presetting does
// not resolve.
Matching match_models(const Model& old_model, const Model& new_model,
                      const PresettingSet& presettings = {},
                      double threshold = kDefaultMatchThreshold);

}  // namespace cdimpact
