#include "cdimpact/edit_script.hpp"

#include <algorithm>
#include <optional>
#include <utility>

namespace cdimpact {

namespace {

const char* edit_name(EditKind kind) {
    switch (kind) {
        case EditKind::AddPackage: return "AddPackage";
        case EditKind::DeletePackage: return "DeletePackage";
        case EditKind::RenamePackage: return "RenamePackage";
        case EditKind::AddClass: return "AddClass";
        case EditKind::DeleteClass: return "DeleteClass";
        case EditKind::RenameClass: return "RenameClass";
        case EditKind::MoveClass: return "MoveClass";
        case EditKind::SetSuperclass: return "SetSuperclass";
        case EditKind::AddAttribute: return "AddAttribute";
        case EditKind::DeleteAttribute: return "DeleteAttribute";
        case EditKind::RenameAttribute: return "RenameAttribute";
        case EditKind::MoveAttribute: return "MoveAttribute";
        case EditKind::SetAttributeType: return "SetAttributeType";
        case EditKind::SetAttributeCardinality: return "SetAttributeCardinality";
        case EditKind::AddStereotype: return "AddStereotype";
        case EditKind::RemoveStereotype: return "RemoveStereotype";
        case EditKind::AddAssociation: return "AddAssociation";
        case EditKind::DeleteAssociation: return "DeleteAssociation";
        case EditKind::SetAssociationSource: return "SetAssociationSource";
        case EditKind::SetAssociationTarget: return "SetAssociationTarget";
        case EditKind::SetAssociationSourceCardinality: return "SetAssociationSourceCardinality";
        case EditKind::SetAssociationTargetCardinality: return "SetAssociationTargetCardinality";
    }
    return "?";
}

[[noreturn]] void fail(const EditOp& op, const std::string& message) {
    throw EditError(std::string(edit_name(op.kind)) + " '" + op.target + "': " + message);
}

std::vector<std::string> split_qname(const std::string& qname) {
    std::vector<std::string> segments;
    std::size_t from = 0;
    while (true) {
        std::size_t dot = qname.find('.', from);
        if (dot == std::string::npos) {
            segments.push_back(qname.substr(from));
            return segments;
        }
        segments.push_back(qname.substr(from, dot - from));
        from = dot + 1;
    }
}

struct ClassLoc {
    Package* owner = nullptr;  // package holding the class
    std::size_t index = 0;
    std::string container;  // owner qname
    ClassDecl* decl = nullptr;
};

struct AttrLoc {
    ClassDecl* cls = nullptr;
    std::size_t index = 0;
    Attribute* decl = nullptr;
};

// Mutable working copy of a model's raw structure.
struct Workspace {
    std::vector<Package> packages;
    std::vector<Association> associations;

    std::vector<Package>* package_list(const std::string& container) {
        if (container.empty()) return &packages;
        Package* pkg = find_package(container);
        return pkg ? &pkg->packages : nullptr;
    }

    Package* find_package(const std::string& qname) {
        if (qname.empty()) return nullptr;
        std::vector<Package>* list = &packages;
        Package* found = nullptr;
        for (const std::string& segment : split_qname(qname)) {
            found = nullptr;
            for (Package& pkg : *list) {
                if (pkg.name == segment) {
                    found = &pkg;
                    break;
                }
            }
            if (!found) return nullptr;
            list = &found->packages;
        }
        return found;
    }

    std::optional<ClassLoc> find_class(const std::string& qname) {
        std::size_t dot = qname.rfind('.');
        if (dot == std::string::npos) return std::nullopt;
        std::string container = qname.substr(0, dot);
        std::string simple = qname.substr(dot + 1);
        Package* owner = find_package(container);
        if (!owner) return std::nullopt;
        for (std::size_t i = 0; i < owner->classes.size(); ++i) {
            if (owner->classes[i].name == simple)
                return ClassLoc{owner, i, container, &owner->classes[i]};
        }
        return std::nullopt;
    }

    std::optional<AttrLoc> find_attribute(const std::string& ref) {
        std::size_t hash = ref.find('#');
        if (hash == std::string::npos) return std::nullopt;
        auto cls = find_class(ref.substr(0, hash));
        if (!cls) return std::nullopt;
        std::string name = ref.substr(hash + 1);
        for (std::size_t i = 0; i < cls->decl->attributes.size(); ++i) {
            if (cls->decl->attributes[i].name == name)
                return AttrLoc{cls->decl, i, &cls->decl->attributes[i]};
        }
        return std::nullopt;
    }

    Association* find_association(const std::string& name) {
        for (Association& assoc : associations) {
            if (assoc.name == name) return &assoc;
        }
        return nullptr;
    }
};

void rewrite_qname(QualifiedName& q, const std::string& old_prefix, const std::string& new_prefix) {
    std::string s = q.str();
    if (s == old_prefix) {
        q = QualifiedName::parse(new_prefix);
    } else if (s.size() > old_prefix.size() && s.compare(0, old_prefix.size(), old_prefix) == 0 &&
               s[old_prefix.size()] == '.') {
        q = QualifiedName::parse(new_prefix + s.substr(old_prefix.size()));
    }
}

void rewrite_refs_in_package(Package& pkg, const std::string& old_prefix,
                             const std::string& new_prefix) {
    for (ClassDecl& cls : pkg.classes) {
        if (cls.superclass) rewrite_qname(*cls.superclass, old_prefix, new_prefix);
    }
    for (Package& sub : pkg.packages) rewrite_refs_in_package(sub, old_prefix, new_prefix);
}

// Keeps superclass and association references valid across renames/moves.
void rewrite_refs(Workspace& ws, const std::string& old_prefix, const std::string& new_prefix) {
    for (Package& pkg : ws.packages) rewrite_refs_in_package(pkg, old_prefix, new_prefix);
    for (Association& assoc : ws.associations) {
        rewrite_qname(assoc.source, old_prefix, new_prefix);
        rewrite_qname(assoc.target, old_prefix, new_prefix);
    }
}

bool class_is_referenced(Workspace& ws, const std::string& qname, const ClassDecl* self) {
    bool referenced = false;
    auto check_pkg = [&](auto&& self_fn, const Package& pkg) -> void {
        for (const ClassDecl& cls : pkg.classes) {
            if (&cls != self && cls.superclass && cls.superclass->str() == qname)
                referenced = true;
        }
        for (const Package& sub : pkg.packages) self_fn(self_fn, sub);
    };
    for (const Package& pkg : ws.packages) check_pkg(check_pkg, pkg);
    for (const Association& assoc : ws.associations) {
        if (assoc.source.str() == qname || assoc.target.str() == qname) referenced = true;
    }
    return referenced;
}

void require_identifier(const EditOp& op, const std::string& name, const char* what) {
    if (!is_identifier(name)) fail(op, std::string("invalid ") + what + " '" + name + "'");
}

void require_cardinality(const EditOp& op, const Cardinality& card) {
    if (card.upper && *card.upper < card.lower) fail(op, "invalid cardinality " + card.str());
}

void apply_one(Workspace& ws, const EditOp& op) {
    switch (op.kind) {
        case EditKind::AddPackage: {
            require_identifier(op, op.name, "package name");
            std::vector<Package>* list = ws.package_list(op.target);
            if (!list) fail(op, "no package '" + op.target + "'");
            std::string qname = op.target.empty() ? op.name : op.target + "." + op.name;
            if (ws.find_package(qname)) fail(op, "package '" + qname + "' already exists");
            list->push_back(Package{op.name, {}, {}});
            return;
        }
        case EditKind::DeletePackage: {
            std::size_t dot = op.target.rfind('.');
            std::string container = dot == std::string::npos ? "" : op.target.substr(0, dot);
            std::string simple = dot == std::string::npos ? op.target : op.target.substr(dot + 1);
            std::vector<Package>* list = ws.package_list(container);
            if (!list) fail(op, "no package '" + op.target + "'");
            auto it = std::find_if(list->begin(), list->end(),
                                   [&](const Package& p) { return p.name == simple; });
            if (it == list->end()) fail(op, "no package '" + op.target + "'");
            if (!it->packages.empty() || !it->classes.empty()) fail(op, "package is not empty");
            list->erase(it);
            return;
        }
        case EditKind::RenamePackage: {
            require_identifier(op, op.name, "package name");
            std::size_t dot = op.target.rfind('.');
            std::string container = dot == std::string::npos ? "" : op.target.substr(0, dot);
            std::vector<Package>* list = ws.package_list(container);
            if (!list) fail(op, "no package '" + op.target + "'");
            Package* pkg = nullptr;
            for (Package& p : *list) {
                if (p.name == (dot == std::string::npos ? op.target : op.target.substr(dot + 1)))
                    pkg = &p;
                else if (p.name == op.name)
                    fail(op, "package '" + op.name + "' already exists in the container");
            }
            if (!pkg) fail(op, "no package '" + op.target + "'");
            std::string new_qname = container.empty() ? op.name : container + "." + op.name;
            pkg->name = op.name;
            rewrite_refs(ws, op.target, new_qname);
            return;
        }
        case EditKind::AddClass: {
            require_identifier(op, op.name, "class name");
            Package* pkg = ws.find_package(op.target);
            if (!pkg) fail(op, "no package '" + op.target + "'");
            std::string qname = op.target + "." + op.name;
            if (ws.find_class(qname)) fail(op, "class '" + qname + "' already exists");
            ClassDecl cls;
            cls.name = op.name;
            cls.stereotypes = op.stereotypes;
            pkg->classes.push_back(std::move(cls));
            return;
        }
        case EditKind::DeleteClass: {
            auto loc = ws.find_class(op.target);
            if (!loc) fail(op, "no class '" + op.target + "'");
            if (class_is_referenced(ws, op.target, loc->decl))
                fail(op, "class is still referenced");
            loc->owner->classes.erase(loc->owner->classes.begin() +
                                      static_cast<std::ptrdiff_t>(loc->index));
            return;
        }
        case EditKind::RenameClass: {
            require_identifier(op, op.name, "class name");
            auto loc = ws.find_class(op.target);
            if (!loc) fail(op, "no class '" + op.target + "'");
            std::string new_qname = loc->container + "." + op.name;
            if (ws.find_class(new_qname)) fail(op, "class '" + new_qname + "' already exists");
            loc->decl->name = op.name;
            rewrite_refs(ws, op.target, new_qname);
            return;
        }
        case EditKind::MoveClass: {
            auto loc = ws.find_class(op.target);
            if (!loc) fail(op, "no class '" + op.target + "'");
            if (loc->container == op.to) fail(op, "class is already in package '" + op.to + "'");
            Package* dest = ws.find_package(op.to);
            if (!dest) fail(op, "no package '" + op.to + "'");
            std::string new_qname = op.to + "." + loc->decl->name;
            if (ws.find_class(new_qname)) fail(op, "class '" + new_qname + "' already exists");
            ClassDecl moved = std::move(*loc->decl);
            loc->owner->classes.erase(loc->owner->classes.begin() +
                                      static_cast<std::ptrdiff_t>(loc->index));
            dest->classes.push_back(std::move(moved));
            rewrite_refs(ws, op.target, new_qname);
            return;
        }
        case EditKind::SetSuperclass: {
            auto loc = ws.find_class(op.target);
            if (!loc) fail(op, "no class '" + op.target + "'");
            if (op.to.empty()) {
                loc->decl->superclass.reset();
                return;
            }
            if (op.to == op.target) fail(op, "class cannot extend itself");
            if (!ws.find_class(op.to)) fail(op, "no class '" + op.to + "'");
            loc->decl->superclass = QualifiedName::parse(op.to);
            return;
        }
        case EditKind::AddAttribute: {
            require_identifier(op, op.name, "attribute name");
            require_cardinality(op, op.cardinality);
            auto loc = ws.find_class(op.target);
            if (!loc) fail(op, "no class '" + op.target + "'");
            if (loc->decl->find_attribute(op.name))
                fail(op, "attribute '" + op.name + "' already exists");
            require_identifier(op, op.type_name, "type name");
            Attribute attr;
            attr.name = op.name;
            attr.type_name = op.type_name;
            attr.cardinality = op.cardinality;
            attr.stereotypes = op.stereotypes;
            loc->decl->attributes.push_back(std::move(attr));
            return;
        }
        case EditKind::DeleteAttribute: {
            auto loc = ws.find_attribute(op.target);
            if (!loc) fail(op, "no attribute '" + op.target + "'");
            loc->cls->attributes.erase(loc->cls->attributes.begin() +
                                       static_cast<std::ptrdiff_t>(loc->index));
            return;
        }
        case EditKind::RenameAttribute: {
            require_identifier(op, op.name, "attribute name");
            auto loc = ws.find_attribute(op.target);
            if (!loc) fail(op, "no attribute '" + op.target + "'");
            if (loc->cls->find_attribute(op.name))
                fail(op, "attribute '" + op.name + "' already exists");
            loc->decl->name = op.name;
            return;
        }
        case EditKind::MoveAttribute: {
            auto loc = ws.find_attribute(op.target);
            if (!loc) fail(op, "no attribute '" + op.target + "'");
            auto dest = ws.find_class(op.to);
            if (!dest) fail(op, "no class '" + op.to + "'");
            if (dest->decl == loc->cls) fail(op, "attribute is already in class '" + op.to + "'");
            if (dest->decl->find_attribute(loc->decl->name))
                fail(op, "attribute '" + loc->decl->name + "' already exists in '" + op.to + "'");
            Attribute moved = std::move(*loc->decl);
            loc->cls->attributes.erase(loc->cls->attributes.begin() +
                                       static_cast<std::ptrdiff_t>(loc->index));
            dest->decl->attributes.push_back(std::move(moved));
            return;
        }
        case EditKind::SetAttributeType: {
            require_identifier(op, op.type_name, "type name");
            auto loc = ws.find_attribute(op.target);
            if (!loc) fail(op, "no attribute '" + op.target + "'");
            loc->decl->type_name = op.type_name;
            return;
        }
        case EditKind::SetAttributeCardinality: {
            require_cardinality(op, op.cardinality);
            auto loc = ws.find_attribute(op.target);
            if (!loc) fail(op, "no attribute '" + op.target + "'");
            loc->decl->cardinality = op.cardinality;
            return;
        }
        case EditKind::AddStereotype:
        case EditKind::RemoveStereotype: {
            require_identifier(op, op.stereotype, "stereotype");
            std::vector<std::string>* stereos = nullptr;
            if (op.target.find('#') != std::string::npos) {
                auto loc = ws.find_attribute(op.target);
                if (!loc) fail(op, "no attribute '" + op.target + "'");
                stereos = &loc->decl->stereotypes;
            } else {
                auto loc = ws.find_class(op.target);
                if (!loc) fail(op, "no class '" + op.target + "'");
                stereos = &loc->decl->stereotypes;
            }
            auto it = std::find(stereos->begin(), stereos->end(), op.stereotype);
            if (op.kind == EditKind::AddStereotype) {
                if (it != stereos->end()) fail(op, "stereotype '" + op.stereotype + "' already present");
                stereos->push_back(op.stereotype);
            } else {
                if (it == stereos->end()) fail(op, "stereotype '" + op.stereotype + "' not present");
                stereos->erase(it);
            }
            return;
        }
        case EditKind::AddAssociation: {
            require_identifier(op, op.name, "association name");
            require_cardinality(op, op.assoc_source_card);
            require_cardinality(op, op.assoc_target_card);
            if (ws.find_association(op.name))
                fail(op, "association '" + op.name + "' already exists");
            if (!ws.find_class(op.assoc_source)) fail(op, "no class '" + op.assoc_source + "'");
            if (!ws.find_class(op.assoc_target)) fail(op, "no class '" + op.assoc_target + "'");
            Association assoc;
            assoc.name = op.name;
            assoc.source_card = op.assoc_source_card;
            assoc.source = QualifiedName::parse(op.assoc_source);
            assoc.target_card = op.assoc_target_card;
            assoc.target = QualifiedName::parse(op.assoc_target);
            ws.associations.push_back(std::move(assoc));
            return;
        }
        case EditKind::DeleteAssociation: {
            auto it = std::find_if(ws.associations.begin(), ws.associations.end(),
                                   [&](const Association& a) { return a.name == op.target; });
            if (it == ws.associations.end()) fail(op, "no association '" + op.target + "'");
            ws.associations.erase(it);
            return;
        }
        case EditKind::SetAssociationSource:
        case EditKind::SetAssociationTarget: {
            Association* assoc = ws.find_association(op.target);
            if (!assoc) fail(op, "no association '" + op.target + "'");
            if (!ws.find_class(op.to)) fail(op, "no class '" + op.to + "'");
            QualifiedName& end =
                op.kind == EditKind::SetAssociationSource ? assoc->source : assoc->target;
            end = QualifiedName::parse(op.to);
            return;
        }
        case EditKind::SetAssociationSourceCardinality:
        case EditKind::SetAssociationTargetCardinality: {
            require_cardinality(op, op.cardinality);
            Association* assoc = ws.find_association(op.target);
            if (!assoc) fail(op, "no association '" + op.target + "'");
            Cardinality& card = op.kind == EditKind::SetAssociationSourceCardinality
                                    ? assoc->source_card
                                    : assoc->target_card;
            card = op.cardinality;
            return;
        }
    }
    fail(op, "unknown edit kind");
}

}  // namespace

Model apply_edit_script(const Model& m, const std::vector<EditOp>& edits) {
    Workspace ws{m.packages(), m.associations()};
    for (const EditOp& op : edits) {
        try {
            apply_one(ws, op);
        } catch (const ModelError& e) {
            fail(op, e.what());
        }
    }
    try {
        return Model(std::move(ws.packages), std::move(ws.associations));
    } catch (const ModelError& e) {
        throw EditError(std::string("edit script produced an invalid model: ") + e.what());
    }
}

}  // namespace cdimpact
