#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "cdimpact/model.hpp"

namespace cdimpact {

class EditError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class EditKind {
    AddPackage,
    DeletePackage,  // package must be empty
    RenamePackage,
    AddClass,
    DeleteClass,  // class must not be referenced by associations or subclasses
    RenameClass,
    MoveClass,
    SetSuperclass,
    AddAttribute,
    DeleteAttribute,
    RenameAttribute,
    MoveAttribute,
    SetAttributeType,
    SetAttributeCardinality,
    AddStereotype,
    RemoveStereotype,
    AddAssociation,
    DeleteAssociation,
    SetAssociationSource,
    SetAssociationTarget,
    SetAssociationSourceCardinality,
    SetAssociationTargetCardinality,
};

// One edit step. Field use depends on kind:
//   target        existing element: package/class qname, "class#attr", or
//                 association name; for Add{Package,Class,Attribute} the
//                 container ("" = top level for packages)
//   name          new simple name for Add*/Rename*
//   type_name     attribute type for AddAttribute/SetAttributeType
//   to            new container (Move*), new superclass ("" clears), or new
//                 association end class
//   cardinality   AddAttribute / SetAttributeCardinality / association
//                 cardinality edits
//   stereotype    Add/RemoveStereotype value
//   stereotypes   initial stereotypes for AddClass/AddAttribute
//   assoc_*       AddAssociation payload
struct EditOp {
    EditKind kind = EditKind::AddClass;
    std::string target;
    std::string name;
    std::string type_name;
    std::string to;
    Cardinality cardinality;
    std::string stereotype;
    std::vector<std::string> stereotypes;
    std::string assoc_source;
    std::string assoc_target;
    Cardinality assoc_source_card;
    Cardinality assoc_target_card;
};

// Applies the script in order and returns the resulting model. The input
// model is not modified. Renames and moves of packages/classes rewrite
// superclass and association references so the result stays well-formed;
// any other invariant violation raises EditError.
Model apply_edit_script(const Model& m, const std::vector<EditOp>& edits);

}  // namespace cdimpact
