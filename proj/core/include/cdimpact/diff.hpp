#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cdimpact/matching.hpp"
#include "cdimpact/model.hpp"

namespace cdimpact {

// Closed catalog of difference kinds. Enum order is the canonical report
// order.
enum class DiffKind {
    AddedPackage,
    DeletedPackage,
    RenamedPackage,
    AddedClass,
    DeletedClass,
    RenamedClass,
    MovedClass,
    ChangedClassProperty,
    AddedAttribute,
    DeletedAttribute,
    RenamedAttribute,
    MovedAttribute,
    ChangedAttributeType,
    ChangedAttributeCardinality,
    AddedStereotype,
    RemovedStereotype,
    AddedAssociation,
    DeletedAssociation,
    ChangedAssociationEnd,
};

inline constexpr int kDiffKindCount = 19;

std::string to_string(DiffKind kind);
std::optional<DiffKind> diff_kind_from_string(std::string_view text);

// Which facet of the subject a Changed*/stereotype difference concerns.
// Distinguishes the several facets a ChangedAssociationEnd can report.
enum class ChangeFacet {
    None,
    Superclass,
    Type,
    Cardinality,
    Stereotype,
    Source,
    Target,
    SourceCardinality,
    TargetCardinality,
    Name,
};

std::string to_string(ChangeFacet facet);

// One atomic difference. subject is the old-side element for deletions and
// changes, the new-side element for additions; counterpart is the matched
// other-side element where one exists.
struct ModelDifference {
    DiffKind kind = DiffKind::AddedClass;
    ElementRef subject;
    ChangeFacet facet = ChangeFacet::None;
    std::optional<std::string> old_value;
    std::optional<std::string> new_value;
    std::optional<ElementRef> counterpart;

    bool operator==(const ModelDifference&) const = default;
};

// Human-readable one-line description, e.g.
//   Added class 'de.test.ECU'
//   Renamed attribute 'de.TroubleCd#name' to 'newName'
//   Moved class 'a.C' to 'b'
//   Changed type of 'de.TroubleCd#name' from 'String' to 'Text'
std::string describe_difference(const ModelDifference& d);

bool canonical_diff_less(const ModelDifference& a, const ModelDifference& b);

// An ordered set of differences between two models. Entries are kept in
// canonical order (kind enum order, then subject qname, then facet and
// values) with exact duplicates removed.
class DiffModel {
public:
    DiffModel(std::shared_ptr<const Model> old_model, std::shared_ptr<const Model> new_model,
              std::vector<ModelDifference> entries);

    const std::vector<ModelDifference>& entries() const { return entries_; }
    const Model& old_model() const { return *old_model_; }
    const Model& new_model() const { return *new_model_; }
    std::shared_ptr<const Model> old_model_ptr() const { return old_model_; }
    std::shared_ptr<const Model> new_model_ptr() const { return new_model_; }

    bool empty() const { return entries_.empty(); }

    // Line-oriented export: one tab-separated record per difference with
    // fields kind, subject, old, new, counterpart, description.
    std::string to_lines() const;
    // Structured export with the same fields as a JSON tree.
    std::string to_json() const;

private:
    std::shared_ptr<const Model> old_model_;
    std::shared_ptr<const Model> new_model_;
    std::vector<ModelDifference> entries_;
};

// Derives the differences implied by a matching: unmatched old elements are
// deletions, unmatched new elements are additions, and every matched pair
// contributes one difference per changed facet. Association ends and
// superclasses are compared through the matching so renames of referenced
// classes do not surface as end changes.
DiffModel compute_diff(std::shared_ptr<const Model> old_model,
                       std::shared_ptr<const Model> new_model, const Matching& matching);

}  // namespace cdimpact
