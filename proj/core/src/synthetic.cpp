#include "cdimpact/synthetic.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <utility>

#include "cdimpact/similarity.hpp"

namespace cdimpact {

namespace {

using Rng = std::mt19937_64;

// Original names draw from one half of the alphabet, names introduced by a
// mutation from the other half, so an added element never resembles a
// deleted one. Renames append two new-half characters: distance 2 from the
// old name, far from everything else.
constexpr const char* kOldAlpha = "abcdefghijklm";
constexpr const char* kNewAlpha = "nopqrstuvwxyz";
constexpr std::size_t kAlphaLen = 13;
constexpr std::size_t kNameLen = 10;

// Attribute names within one class keep pairwise distance >= 6: a renamed
// attribute sits at distance 2 from its old name (score 0.883) while every
// cross pairing stays at distance >= 4 (score <= 0.767), so greedy matching
// always recovers the rename.
constexpr std::size_t kMinAttrDistance = 6;

std::size_t pick(Rng& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

bool chance(Rng& rng, unsigned percent) { return rng() % 100 < percent; }

std::string random_name(Rng& rng, const char* alphabet) {
    std::string out;
    for (std::size_t i = 0; i < kNameLen; ++i) out += alphabet[pick(rng, kAlphaLen)];
    return out;
}

std::string fresh_name(Rng& rng, const char* alphabet, std::set<std::string>& used) {
    while (true) {
        std::string cand = random_name(rng, alphabet);
        if (used.insert(cand).second) return cand;
    }
}

std::string fresh_far_name(Rng& rng, const char* alphabet, std::set<std::string>& used,
                           const std::vector<std::string>& neighbors) {
    for (int attempt = 0; attempt < 100000; ++attempt) {
        std::string cand = random_name(rng, alphabet);
        if (used.count(cand)) continue;
        bool far = true;
        for (const std::string& nb : neighbors) {
            if (levenshtein_distance(cand, nb) < kMinAttrDistance) {
                far = false;
                break;
            }
        }
        if (!far) continue;
        used.insert(cand);
        return cand;
    }
    throw EditError("unable to generate a dissimilar name");
}

std::string rename_of(Rng& rng, std::set<std::string>& used, const std::string& base) {
    for (int attempt = 0; attempt < 100000; ++attempt) {
        std::string cand = base;
        cand += kNewAlpha[pick(rng, kAlphaLen)];
        cand += kNewAlpha[pick(rng, kAlphaLen)];
        if (used.insert(cand).second) return cand;
    }
    throw EditError("unable to generate a rename target");
}

const std::vector<std::string>& type_pool() {
    static const std::vector<std::string> pool = {"String", "Int",   "Bool", "Date",
                                                  "Text",   "Float", "Blob", "Time"};
    return pool;
}

const std::vector<Cardinality>& card_pool() {
    static const std::vector<Cardinality> pool = {Cardinality{1, 1}, Cardinality{0, 1},
                                                  Cardinality{1, std::nullopt},
                                                  Cardinality{0, std::nullopt}, Cardinality{2, 5}};
    return pool;
}

const std::vector<std::string>& class_stereo_pool() {
    static const std::vector<std::string> pool = {"persistent", "active", "entity",
                                                  "service",    "view",   "cached"};
    return pool;
}

const std::vector<std::string>& attr_stereo_pool() {
    static const std::vector<std::string> pool = {"persistent", "transient", "derived", "key"};
    return pool;
}

ElementRef make_ref(RefKind kind, const std::string& qname) {
    if (kind == RefKind::Association) {
        ElementRef ref;
        ref.kind = kind;
        ref.qname.segments = {qname};
        return ref;
    }
    return ElementRef{kind, QualifiedName::parse(qname)};
}

ModelDifference simple_diff(DiffKind kind, ElementRef subject) {
    ModelDifference d;
    d.kind = kind;
    d.subject = std::move(subject);
    return d;
}

ModelDifference value_diff(DiffKind kind, ChangeFacet facet, ElementRef subject,
                           std::string old_value, std::string new_value, ElementRef counterpart) {
    ModelDifference d;
    d.kind = kind;
    d.facet = facet;
    d.subject = std::move(subject);
    d.old_value = std::move(old_value);
    d.new_value = std::move(new_value);
    d.counterpart = std::move(counterpart);
    return d;
}

// Bookkeeping mirrors the flags that keep every expected difference stable:
// edited blocks further edits of the element, shape_locked blocks attribute
// edits under a renamed/moved class, attrs_touched blocks renames/moves of a
// class whose attributes changed.
struct AttrRec {
    std::string base_name;
    std::string cur_name;
    bool added = false;
    bool edited = false;
    bool deleted = false;
};

struct ClsRec {
    std::string base_qname;
    std::string cur_qname;
    std::string container;
    bool added = false;
    bool edited = false;
    bool shape_locked = false;
    bool attrs_touched = false;
    bool deleted = false;
    std::vector<AttrRec> attrs;
};

struct PkgRec {
    std::string qname;
    bool added = false;
    bool used = false;
    bool deleted = false;
    bool base_empty = false;
};

struct AssocRec {
    std::string name;
    bool added = false;
    bool edited = false;
    bool deleted = false;
};

enum class EditChoice {
    AddPackage,
    DeletePackage,
    AddClass,
    DeleteClass,
    RenameClass,
    MoveClass,
    SetSuperclass,
    ClassAddStereo,
    ClassRemoveStereo,
    AddAttribute,
    DeleteAttribute,
    RenameAttribute,
    SetAttrType,
    SetAttrCard,
    AttrAddStereo,
    AttrRemoveStereo,
    AddAssociation,
    DeleteAssociation,
    SetAssocSource,
    SetAssocTarget,
    SetAssocSourceCard,
    SetAssocTargetCard,
};

struct WeightedChoice {
    EditChoice choice;
    unsigned weight;
};

constexpr WeightedChoice kChoiceTable[] = {
    {EditChoice::AddPackage, 2},    {EditChoice::DeletePackage, 1},
    {EditChoice::AddClass, 6},      {EditChoice::DeleteClass, 3},
    {EditChoice::RenameClass, 6},   {EditChoice::MoveClass, 4},
    {EditChoice::SetSuperclass, 3}, {EditChoice::ClassAddStereo, 3},
    {EditChoice::ClassRemoveStereo, 2}, {EditChoice::AddAttribute, 6},
    {EditChoice::DeleteAttribute, 3},   {EditChoice::RenameAttribute, 6},
    {EditChoice::SetAttrType, 4},   {EditChoice::SetAttrCard, 3},
    {EditChoice::AttrAddStereo, 2}, {EditChoice::AttrRemoveStereo, 2},
    {EditChoice::AddAssociation, 3},    {EditChoice::DeleteAssociation, 2},
    {EditChoice::SetAssocSource, 2},    {EditChoice::SetAssocTarget, 2},
    {EditChoice::SetAssocSourceCard, 2}, {EditChoice::SetAssocTargetCard, 2},
};

EditChoice weighted_choice(Rng& rng) {
    unsigned total = 0;
    for (const WeightedChoice& wc : kChoiceTable) total += wc.weight;
    unsigned roll = static_cast<unsigned>(rng() % total);
    for (const WeightedChoice& wc : kChoiceTable) {
        if (roll < wc.weight) return wc.choice;
        roll -= wc.weight;
    }
    return EditChoice::AddClass;
}

void collect_used_names(const Model& m, std::set<std::string>& used) {
    for (const PackageEntry& pe : m.package_entries()) used.insert(pe.decl->name);
    for (const ClassEntry& ce : m.class_entries()) used.insert(ce.decl->name);
    for (const AttributeEntry& ae : m.attribute_entries()) used.insert(ae.decl->name);
    for (const Association& a : m.associations()) used.insert(a.name);
}

}  // namespace

Model generate_model(int classes, std::uint64_t seed) {
    Rng rng(seed);
    std::set<std::string> used;

    const int pkg_count = std::max(1, classes / 10);
    struct PkgNode {
        int parent = -1;
        std::string qname;
        Package pkg;
    };
    std::vector<PkgNode> nodes(static_cast<std::size_t>(pkg_count));
    for (int i = 0; i < pkg_count; ++i) {
        PkgNode& node = nodes[static_cast<std::size_t>(i)];
        node.parent = i == 0 ? -1 : static_cast<int>(pick(rng, static_cast<std::size_t>(i) + 1)) - 1;
        node.pkg.name = fresh_name(rng, kOldAlpha, used);
        node.qname = node.parent < 0
                         ? node.pkg.name
                         : nodes[static_cast<std::size_t>(node.parent)].qname + "." + node.pkg.name;
    }

    std::vector<std::string> class_qnames;
    for (int c = 0; c < classes; ++c) {
        const std::size_t pkg = pick(rng, static_cast<std::size_t>(pkg_count));
        ClassDecl decl;
        decl.name = fresh_name(rng, kOldAlpha, used);
        if (chance(rng, 25)) decl.stereotypes.push_back("persistent");
        if (c > 0 && chance(rng, 15))
            decl.superclass = QualifiedName::parse(class_qnames[pick(rng, class_qnames.size())]);
        const std::size_t attr_count = 1 + pick(rng, 4);
        std::vector<std::string> attr_names;
        for (std::size_t a = 0; a < attr_count; ++a) {
            Attribute attr;
            attr.name = fresh_far_name(rng, kOldAlpha, used, attr_names);
            attr_names.push_back(attr.name);
            attr.type_name = type_pool()[pick(rng, type_pool().size())];
            attr.cardinality = card_pool()[pick(rng, card_pool().size())];
            if (chance(rng, 20)) attr.stereotypes.push_back("persistent");
            decl.attributes.push_back(std::move(attr));
        }
        class_qnames.push_back(nodes[pkg].qname + "." + decl.name);
        nodes[pkg].pkg.classes.push_back(std::move(decl));
    }

    std::vector<Association> associations;
    if (!class_qnames.empty()) {
        const int assoc_count = classes / 4;
        for (int a = 0; a < assoc_count; ++a) {
            Association assoc;
            assoc.name = fresh_name(rng, kOldAlpha, used);
            assoc.source_card = card_pool()[pick(rng, card_pool().size())];
            assoc.source = QualifiedName::parse(class_qnames[pick(rng, class_qnames.size())]);
            assoc.target_card = card_pool()[pick(rng, card_pool().size())];
            assoc.target = QualifiedName::parse(class_qnames[pick(rng, class_qnames.size())]);
            associations.push_back(std::move(assoc));
        }
    }

    // Children were generated after their parents, so folding in descending
    // index order moves every subtree exactly once.
    std::vector<Package> roots;
    for (int i = pkg_count - 1; i >= 1; --i) {
        PkgNode& node = nodes[static_cast<std::size_t>(i)];
        if (node.parent >= 0)
            nodes[static_cast<std::size_t>(node.parent)].pkg.packages.push_back(
                std::move(node.pkg));
    }
    for (int i = 0; i < pkg_count; ++i) {
        PkgNode& node = nodes[static_cast<std::size_t>(i)];
        if (node.parent < 0) roots.push_back(std::move(node.pkg));
    }

    return Model(std::move(roots), std::move(associations));
}

MutationResult mutate_model(const Model& base, int edits, std::uint64_t seed) {
    Rng rng(seed);
    std::set<std::string> used;
    collect_used_names(base, used);

    std::vector<PkgRec> pkgs;
    for (const PackageEntry& pe : base.package_entries()) {
        PkgRec rec;
        rec.qname = pe.qname;
        rec.base_empty = pe.decl->packages.empty() && pe.decl->classes.empty();
        pkgs.push_back(std::move(rec));
    }
    std::vector<ClsRec> classes;
    for (const ClassEntry& ce : base.class_entries()) {
        ClsRec rec;
        rec.base_qname = ce.qname;
        rec.cur_qname = ce.qname;
        rec.container = ce.container;
        for (const Attribute& attr : ce.decl->attributes) {
            AttrRec ar;
            ar.base_name = attr.name;
            ar.cur_name = attr.name;
            rec.attrs.push_back(std::move(ar));
        }
        classes.push_back(std::move(rec));
    }
    std::vector<AssocRec> assocs;
    for (const Association& a : base.associations()) assocs.push_back(AssocRec{a.name});

    Model working = base;
    std::vector<EditOp> script;
    std::vector<ModelDifference> expected;

    auto commit = [&](std::vector<EditOp> ops) {
        working = apply_edit_script(working, ops);
        for (EditOp& op : ops) script.push_back(std::move(op));
    };

    auto live_pkg_indices = [&]() {
        std::vector<std::size_t> v;
        for (std::size_t i = 0; i < pkgs.size(); ++i)
            if (!pkgs[i].deleted) v.push_back(i);
        return v;
    };
    auto mark_pkg_used = [&](const std::string& qname) {
        for (PkgRec& rec : pkgs)
            if (rec.qname == qname) rec.used = true;
    };
    auto live_cls_indices = [&]() {
        std::vector<std::size_t> v;
        for (std::size_t i = 0; i < classes.size(); ++i)
            if (!classes[i].deleted) v.push_back(i);
        return v;
    };
    // Classes whose shape is still their base shape: safe to rename, move,
    // or delete without invalidating an earlier expected difference.
    auto untouched_cls_indices = [&]() {
        std::vector<std::size_t> v;
        for (std::size_t i = 0; i < classes.size(); ++i) {
            const ClsRec& rec = classes[i];
            if (!rec.deleted && !rec.added && !rec.edited && !rec.attrs_touched) v.push_back(i);
        }
        return v;
    };
    auto attr_edit_pairs = [&]() {
        std::vector<std::pair<std::size_t, std::size_t>> v;
        for (std::size_t c = 0; c < classes.size(); ++c) {
            const ClsRec& owner = classes[c];
            if (owner.deleted || owner.added || owner.shape_locked) continue;
            for (std::size_t a = 0; a < owner.attrs.size(); ++a) {
                const AttrRec& attr = owner.attrs[a];
                if (!attr.deleted && !attr.added && !attr.edited) v.push_back({c, a});
            }
        }
        return v;
    };
    auto editable_assoc_indices = [&]() {
        std::vector<std::size_t> v;
        for (std::size_t i = 0; i < assocs.size(); ++i)
            if (!assocs[i].deleted && !assocs[i].added && !assocs[i].edited) v.push_back(i);
        return v;
    };
    auto pin_class = [&](const std::string& cur_qname) {
        for (ClsRec& rec : classes)
            if (!rec.deleted && rec.cur_qname == cur_qname) rec.edited = true;
    };

    auto try_edit = [&](EditChoice choice) -> bool {
        switch (choice) {
            case EditChoice::AddPackage: {
                std::vector<std::size_t> parents = live_pkg_indices();
                const std::size_t roll = pick(rng, parents.size() + 1);
                const std::string parent =
                    roll == parents.size() ? std::string() : pkgs[parents[roll]].qname;
                const std::string name = fresh_name(rng, kNewAlpha, used);
                const std::string qname = parent.empty() ? name : parent + "." + name;
                EditOp op;
                op.kind = EditKind::AddPackage;
                op.target = parent;
                op.name = name;
                commit({op});
                if (!parent.empty()) mark_pkg_used(parent);
                PkgRec rec;
                rec.qname = qname;
                rec.added = true;
                rec.base_empty = true;
                pkgs.push_back(std::move(rec));
                expected.push_back(simple_diff(DiffKind::AddedPackage,
                                               make_ref(RefKind::Package, qname)));
                return true;
            }
            case EditChoice::DeletePackage: {
                std::vector<std::size_t> cands;
                for (std::size_t i = 0; i < pkgs.size(); ++i) {
                    const PkgRec& rec = pkgs[i];
                    if (!rec.added && !rec.deleted && !rec.used && rec.base_empty)
                        cands.push_back(i);
                }
                if (cands.empty()) return false;
                PkgRec& rec = pkgs[cands[pick(rng, cands.size())]];
                EditOp op;
                op.kind = EditKind::DeletePackage;
                op.target = rec.qname;
                commit({op});
                rec.deleted = true;
                expected.push_back(simple_diff(DiffKind::DeletedPackage,
                                               make_ref(RefKind::Package, rec.qname)));
                return true;
            }
            case EditChoice::AddClass: {
                std::vector<std::size_t> containers = live_pkg_indices();
                if (containers.empty()) return false;
                const std::string container = pkgs[containers[pick(rng, containers.size())]].qname;
                const std::string name = fresh_name(rng, kNewAlpha, used);
                const std::string qname = container + "." + name;
                std::vector<EditOp> ops;
                EditOp add;
                add.kind = EditKind::AddClass;
                add.target = container;
                add.name = name;
                if (chance(rng, 25)) add.stereotypes.push_back("persistent");
                ops.push_back(add);
                ClsRec rec;
                rec.base_qname = "";
                rec.cur_qname = qname;
                rec.container = container;
                rec.added = true;
                const std::size_t attr_count = 1 + pick(rng, 4);
                std::vector<ModelDifference> diffs;
                diffs.push_back(simple_diff(DiffKind::AddedClass, make_ref(RefKind::Class, qname)));
                for (std::size_t a = 0; a < attr_count; ++a) {
                    EditOp attr;
                    attr.kind = EditKind::AddAttribute;
                    attr.target = qname;
                    attr.name = fresh_name(rng, kNewAlpha, used);
                    attr.type_name = type_pool()[pick(rng, type_pool().size())];
                    attr.cardinality = card_pool()[pick(rng, card_pool().size())];
                    if (chance(rng, 20)) attr.stereotypes.push_back("persistent");
                    AttrRec ar;
                    ar.base_name = "";
                    ar.cur_name = attr.name;
                    ar.added = true;
                    rec.attrs.push_back(std::move(ar));
                    diffs.push_back(simple_diff(DiffKind::AddedAttribute,
                                                make_ref(RefKind::Attribute,
                                                         qname + "#" + attr.name)));
                    ops.push_back(std::move(attr));
                }
                commit(std::move(ops));
                mark_pkg_used(container);
                classes.push_back(std::move(rec));
                for (ModelDifference& d : diffs) expected.push_back(std::move(d));
                return true;
            }
            case EditChoice::DeleteClass: {
                std::set<std::string> referenced;
                for (const ClassEntry& ce : working.class_entries())
                    if (ce.decl->superclass) referenced.insert(ce.decl->superclass->str());
                for (const Association& a : working.associations()) {
                    referenced.insert(a.source.str());
                    referenced.insert(a.target.str());
                }
                std::vector<std::size_t> cands;
                for (std::size_t i : untouched_cls_indices())
                    if (!referenced.count(classes[i].cur_qname)) cands.push_back(i);
                if (cands.empty()) return false;
                ClsRec& rec = classes[cands[pick(rng, cands.size())]];
                EditOp op;
                op.kind = EditKind::DeleteClass;
                op.target = rec.cur_qname;
                commit({op});
                rec.deleted = true;
                expected.push_back(simple_diff(DiffKind::DeletedClass,
                                               make_ref(RefKind::Class, rec.base_qname)));
                for (AttrRec& attr : rec.attrs) {
                    attr.deleted = true;
                    expected.push_back(simple_diff(
                        DiffKind::DeletedAttribute,
                        make_ref(RefKind::Attribute, rec.base_qname + "#" + attr.base_name)));
                }
                return true;
            }
            case EditChoice::RenameClass: {
                std::vector<std::size_t> cands = untouched_cls_indices();
                if (cands.empty()) return false;
                ClsRec& rec = classes[cands[pick(rng, cands.size())]];
                const std::string old_simple = rec.base_qname.substr(rec.container.size() + 1);
                const std::string new_simple = rename_of(rng, used, old_simple);
                EditOp op;
                op.kind = EditKind::RenameClass;
                op.target = rec.cur_qname;
                op.name = new_simple;
                commit({op});
                const std::string new_qname = rec.container + "." + new_simple;
                expected.push_back(value_diff(DiffKind::RenamedClass, ChangeFacet::None,
                                              make_ref(RefKind::Class, rec.base_qname), old_simple,
                                              new_simple, make_ref(RefKind::Class, new_qname)));
                rec.cur_qname = new_qname;
                rec.edited = true;
                rec.shape_locked = true;
                return true;
            }
            case EditChoice::MoveClass: {
                std::vector<std::size_t> cands = untouched_cls_indices();
                if (cands.empty()) return false;
                ClsRec& rec = classes[cands[pick(rng, cands.size())]];
                std::vector<std::size_t> dests;
                for (std::size_t i : live_pkg_indices())
                    if (pkgs[i].qname != rec.container) dests.push_back(i);
                if (dests.empty()) return false;
                PkgRec& dest = pkgs[dests[pick(rng, dests.size())]];
                EditOp op;
                op.kind = EditKind::MoveClass;
                op.target = rec.cur_qname;
                op.to = dest.qname;
                commit({op});
                const std::string simple = rec.base_qname.substr(rec.container.size() + 1);
                const std::string new_qname = dest.qname + "." + simple;
                expected.push_back(value_diff(DiffKind::MovedClass, ChangeFacet::None,
                                              make_ref(RefKind::Class, rec.base_qname),
                                              rec.container, dest.qname,
                                              make_ref(RefKind::Class, new_qname)));
                dest.used = true;
                rec.cur_qname = new_qname;
                rec.container = dest.qname;
                rec.edited = true;
                rec.shape_locked = true;
                return true;
            }
            case EditChoice::SetSuperclass: {
                std::vector<std::size_t> cands;
                for (std::size_t i = 0; i < classes.size(); ++i) {
                    const ClsRec& rec = classes[i];
                    if (!rec.deleted && !rec.added && !rec.edited) cands.push_back(i);
                }
                if (cands.empty()) return false;
                ClsRec& rec = classes[cands[pick(rng, cands.size())]];
                const ClassDecl* base_decl = base.find_class(rec.base_qname);
                const std::string old_super =
                    base_decl->superclass ? base_decl->superclass->str() : "";
                const ClassEntry* cur_entry = working.find_class_entry(rec.cur_qname);
                const std::string cur_super =
                    cur_entry->decl->superclass ? cur_entry->decl->superclass->str() : "";
                std::string new_super;
                if (!old_super.empty() && chance(rng, 33)) {
                    new_super = "";
                } else {
                    std::vector<std::size_t> targets;
                    for (std::size_t i : live_cls_indices()) {
                        const ClsRec& t = classes[i];
                        if (t.cur_qname != rec.cur_qname && t.cur_qname != cur_super)
                            targets.push_back(i);
                    }
                    if (targets.empty()) return false;
                    new_super = classes[targets[pick(rng, targets.size())]].cur_qname;
                }
                EditOp op;
                op.kind = EditKind::SetSuperclass;
                op.target = rec.cur_qname;
                op.to = new_super;
                commit({op});
                if (!new_super.empty()) pin_class(new_super);
                rec.edited = true;
                expected.push_back(value_diff(DiffKind::ChangedClassProperty,
                                              ChangeFacet::Superclass,
                                              make_ref(RefKind::Class, rec.base_qname), old_super,
                                              new_super, make_ref(RefKind::Class, rec.cur_qname)));
                return true;
            }
            case EditChoice::ClassAddStereo:
            case EditChoice::ClassRemoveStereo: {
                const bool adding = choice == EditChoice::ClassAddStereo;
                std::vector<std::size_t> cands;
                for (std::size_t i = 0; i < classes.size(); ++i) {
                    const ClsRec& rec = classes[i];
                    if (rec.deleted || rec.added || rec.edited) continue;
                    const ClassDecl* decl = base.find_class(rec.base_qname);
                    if (adding ? decl->stereotypes.size() < class_stereo_pool().size()
                               : !decl->stereotypes.empty())
                        cands.push_back(i);
                }
                if (cands.empty()) return false;
                ClsRec& rec = classes[cands[pick(rng, cands.size())]];
                const ClassDecl* decl = base.find_class(rec.base_qname);
                std::string stereo;
                if (adding) {
                    std::vector<std::string> options;
                    for (const std::string& s : class_stereo_pool())
                        if (!decl->has_stereotype(s)) options.push_back(s);
                    stereo = options[pick(rng, options.size())];
                } else {
                    stereo = decl->stereotypes[pick(rng, decl->stereotypes.size())];
                }
                EditOp op;
                op.kind = adding ? EditKind::AddStereotype : EditKind::RemoveStereotype;
                op.target = rec.cur_qname;
                op.stereotype = stereo;
                commit({op});
                rec.edited = true;
                ModelDifference d;
                d.facet = ChangeFacet::Stereotype;
                if (adding) {
                    d.kind = DiffKind::AddedStereotype;
                    d.subject = make_ref(RefKind::Class, rec.cur_qname);
                    d.new_value = stereo;
                    d.counterpart = make_ref(RefKind::Class, rec.base_qname);
                } else {
                    d.kind = DiffKind::RemovedStereotype;
                    d.subject = make_ref(RefKind::Class, rec.base_qname);
                    d.old_value = stereo;
                    d.counterpart = make_ref(RefKind::Class, rec.cur_qname);
                }
                expected.push_back(std::move(d));
                return true;
            }
            case EditChoice::AddAttribute: {
                std::vector<std::size_t> cands;
                for (std::size_t i = 0; i < classes.size(); ++i) {
                    const ClsRec& rec = classes[i];
                    if (!rec.deleted && !rec.added && !rec.shape_locked) cands.push_back(i);
                }
                if (cands.empty()) return false;
                ClsRec& rec = classes[cands[pick(rng, cands.size())]];
                EditOp op;
                op.kind = EditKind::AddAttribute;
                op.target = rec.cur_qname;
                op.name = fresh_name(rng, kNewAlpha, used);
                op.type_name = type_pool()[pick(rng, type_pool().size())];
                op.cardinality = card_pool()[pick(rng, card_pool().size())];
                if (chance(rng, 20)) op.stereotypes.push_back("persistent");
                commit({op});
                AttrRec ar;
                ar.base_name = "";
                ar.cur_name = op.name;
                ar.added = true;
                expected.push_back(simple_diff(
                    DiffKind::AddedAttribute,
                    make_ref(RefKind::Attribute, rec.cur_qname + "#" + op.name)));
                rec.attrs.push_back(std::move(ar));
                rec.attrs_touched = true;
                return true;
            }
            case EditChoice::DeleteAttribute: {
                std::vector<std::pair<std::size_t, std::size_t>> cands;
                for (const auto& [c, a] : attr_edit_pairs()) {
                    std::size_t live = 0;
                    for (const AttrRec& ar : classes[c].attrs)
                        if (!ar.deleted) ++live;
                    if (live >= 2) cands.push_back({c, a});
                }
                if (cands.empty()) return false;
                const auto [c, a] = cands[pick(rng, cands.size())];
                ClsRec& owner = classes[c];
                AttrRec& attr = owner.attrs[a];
                EditOp op;
                op.kind = EditKind::DeleteAttribute;
                op.target = owner.cur_qname + "#" + attr.cur_name;
                commit({op});
                attr.deleted = true;
                owner.attrs_touched = true;
                expected.push_back(simple_diff(
                    DiffKind::DeletedAttribute,
                    make_ref(RefKind::Attribute, owner.base_qname + "#" + attr.base_name)));
                return true;
            }
            case EditChoice::RenameAttribute: {
                std::vector<std::pair<std::size_t, std::size_t>> cands = attr_edit_pairs();
                if (cands.empty()) return false;
                const auto [c, a] = cands[pick(rng, cands.size())];
                ClsRec& owner = classes[c];
                AttrRec& attr = owner.attrs[a];
                const std::string new_name = rename_of(rng, used, attr.base_name);
                EditOp op;
                op.kind = EditKind::RenameAttribute;
                op.target = owner.cur_qname + "#" + attr.cur_name;
                op.name = new_name;
                commit({op});
                expected.push_back(value_diff(
                    DiffKind::RenamedAttribute, ChangeFacet::None,
                    make_ref(RefKind::Attribute, owner.base_qname + "#" + attr.base_name),
                    attr.base_name, new_name,
                    make_ref(RefKind::Attribute, owner.cur_qname + "#" + new_name)));
                attr.cur_name = new_name;
                attr.edited = true;
                owner.attrs_touched = true;
                return true;
            }
            case EditChoice::SetAttrType: {
                std::vector<std::pair<std::size_t, std::size_t>> cands = attr_edit_pairs();
                if (cands.empty()) return false;
                const auto [c, a] = cands[pick(rng, cands.size())];
                ClsRec& owner = classes[c];
                AttrRec& attr = owner.attrs[a];
                const Attribute* decl = base.find_attribute(owner.base_qname, attr.base_name);
                std::vector<std::string> options;
                for (const std::string& t : type_pool())
                    if (t != decl->type_name) options.push_back(t);
                const std::string new_type = options[pick(rng, options.size())];
                EditOp op;
                op.kind = EditKind::SetAttributeType;
                op.target = owner.cur_qname + "#" + attr.cur_name;
                op.type_name = new_type;
                commit({op});
                expected.push_back(value_diff(
                    DiffKind::ChangedAttributeType, ChangeFacet::Type,
                    make_ref(RefKind::Attribute, owner.base_qname + "#" + attr.base_name),
                    decl->type_name, new_type,
                    make_ref(RefKind::Attribute, owner.cur_qname + "#" + attr.cur_name)));
                attr.edited = true;
                owner.attrs_touched = true;
                return true;
            }
            case EditChoice::SetAttrCard: {
                std::vector<std::pair<std::size_t, std::size_t>> cands = attr_edit_pairs();
                if (cands.empty()) return false;
                const auto [c, a] = cands[pick(rng, cands.size())];
                ClsRec& owner = classes[c];
                AttrRec& attr = owner.attrs[a];
                const Attribute* decl = base.find_attribute(owner.base_qname, attr.base_name);
                std::vector<Cardinality> options;
                for (const Cardinality& card : card_pool())
                    if (!(card == decl->cardinality)) options.push_back(card);
                const Cardinality new_card = options[pick(rng, options.size())];
                EditOp op;
                op.kind = EditKind::SetAttributeCardinality;
                op.target = owner.cur_qname + "#" + attr.cur_name;
                op.cardinality = new_card;
                commit({op});
                expected.push_back(value_diff(
                    DiffKind::ChangedAttributeCardinality, ChangeFacet::Cardinality,
                    make_ref(RefKind::Attribute, owner.base_qname + "#" + attr.base_name),
                    decl->cardinality.str(), new_card.str(),
                    make_ref(RefKind::Attribute, owner.cur_qname + "#" + attr.cur_name)));
                attr.edited = true;
                owner.attrs_touched = true;
                return true;
            }
            case EditChoice::AttrAddStereo:
            case EditChoice::AttrRemoveStereo: {
                const bool adding = choice == EditChoice::AttrAddStereo;
                std::vector<std::pair<std::size_t, std::size_t>> cands;
                for (const auto& [c, a] : attr_edit_pairs()) {
                    const Attribute* decl =
                        base.find_attribute(classes[c].base_qname, classes[c].attrs[a].base_name);
                    if (adding ? decl->stereotypes.size() < attr_stereo_pool().size()
                               : !decl->stereotypes.empty())
                        cands.push_back({c, a});
                }
                if (cands.empty()) return false;
                const auto [c, a] = cands[pick(rng, cands.size())];
                ClsRec& owner = classes[c];
                AttrRec& attr = owner.attrs[a];
                const Attribute* decl = base.find_attribute(owner.base_qname, attr.base_name);
                std::string stereo;
                if (adding) {
                    std::vector<std::string> options;
                    for (const std::string& s : attr_stereo_pool())
                        if (!decl->has_stereotype(s)) options.push_back(s);
                    stereo = options[pick(rng, options.size())];
                } else {
                    stereo = decl->stereotypes[pick(rng, decl->stereotypes.size())];
                }
                EditOp op;
                op.kind = adding ? EditKind::AddStereotype : EditKind::RemoveStereotype;
                op.target = owner.cur_qname + "#" + attr.cur_name;
                op.stereotype = stereo;
                commit({op});
                const std::string ref = owner.base_qname + "#" + attr.base_name;
                ModelDifference d;
                d.facet = ChangeFacet::Stereotype;
                if (adding) {
                    d.kind = DiffKind::AddedStereotype;
                    d.subject = make_ref(RefKind::Attribute, ref);
                    d.new_value = stereo;
                    d.counterpart = make_ref(RefKind::Attribute, ref);
                } else {
                    d.kind = DiffKind::RemovedStereotype;
                    d.subject = make_ref(RefKind::Attribute, ref);
                    d.old_value = stereo;
                    d.counterpart = make_ref(RefKind::Attribute, ref);
                }
                expected.push_back(std::move(d));
                attr.edited = true;
                owner.attrs_touched = true;
                return true;
            }
            case EditChoice::AddAssociation: {
                std::vector<std::size_t> live = live_cls_indices();
                if (live.empty()) return false;
                EditOp op;
                op.kind = EditKind::AddAssociation;
                op.name = fresh_name(rng, kNewAlpha, used);
                op.assoc_source = classes[live[pick(rng, live.size())]].cur_qname;
                op.assoc_target = classes[live[pick(rng, live.size())]].cur_qname;
                op.assoc_source_card = card_pool()[pick(rng, card_pool().size())];
                op.assoc_target_card = card_pool()[pick(rng, card_pool().size())];
                commit({op});
                assocs.push_back(AssocRec{op.name, true, false, false});
                expected.push_back(simple_diff(DiffKind::AddedAssociation,
                                               make_ref(RefKind::Association, op.name)));
                return true;
            }
            case EditChoice::DeleteAssociation: {
                std::vector<std::size_t> cands = editable_assoc_indices();
                if (cands.empty()) return false;
                AssocRec& rec = assocs[cands[pick(rng, cands.size())]];
                EditOp op;
                op.kind = EditKind::DeleteAssociation;
                op.target = rec.name;
                commit({op});
                rec.deleted = true;
                expected.push_back(simple_diff(DiffKind::DeletedAssociation,
                                               make_ref(RefKind::Association, rec.name)));
                return true;
            }
            case EditChoice::SetAssocSource:
            case EditChoice::SetAssocTarget: {
                const bool source = choice == EditChoice::SetAssocSource;
                std::vector<std::size_t> cands = editable_assoc_indices();
                if (cands.empty()) return false;
                AssocRec& rec = assocs[cands[pick(rng, cands.size())]];
                const Association* cur = working.find_association(rec.name);
                const std::string cur_end = source ? cur->source.str() : cur->target.str();
                std::vector<std::size_t> targets;
                for (std::size_t i : live_cls_indices())
                    if (classes[i].cur_qname != cur_end) targets.push_back(i);
                if (targets.empty()) return false;
                const std::string new_end = classes[targets[pick(rng, targets.size())]].cur_qname;
                const Association* base_assoc = base.find_association(rec.name);
                const std::string old_end =
                    source ? base_assoc->source.str() : base_assoc->target.str();
                EditOp op;
                op.kind = source ? EditKind::SetAssociationSource : EditKind::SetAssociationTarget;
                op.target = rec.name;
                op.to = new_end;
                commit({op});
                pin_class(new_end);
                rec.edited = true;
                expected.push_back(value_diff(
                    DiffKind::ChangedAssociationEnd,
                    source ? ChangeFacet::Source : ChangeFacet::Target,
                    make_ref(RefKind::Association, rec.name), old_end, new_end,
                    make_ref(RefKind::Association, rec.name)));
                return true;
            }
            case EditChoice::SetAssocSourceCard:
            case EditChoice::SetAssocTargetCard: {
                const bool source = choice == EditChoice::SetAssocSourceCard;
                std::vector<std::size_t> cands = editable_assoc_indices();
                if (cands.empty()) return false;
                AssocRec& rec = assocs[cands[pick(rng, cands.size())]];
                const Association* base_assoc = base.find_association(rec.name);
                const Cardinality old_card =
                    source ? base_assoc->source_card : base_assoc->target_card;
                std::vector<Cardinality> options;
                for (const Cardinality& card : card_pool())
                    if (!(card == old_card)) options.push_back(card);
                const Cardinality new_card = options[pick(rng, options.size())];
                EditOp op;
                op.kind = source ? EditKind::SetAssociationSourceCardinality
                                 : EditKind::SetAssociationTargetCardinality;
                op.target = rec.name;
                op.cardinality = new_card;
                commit({op});
                rec.edited = true;
                expected.push_back(value_diff(
                    DiffKind::ChangedAssociationEnd,
                    source ? ChangeFacet::SourceCardinality : ChangeFacet::TargetCardinality,
                    make_ref(RefKind::Association, rec.name), old_card.str(), new_card.str(),
                    make_ref(RefKind::Association, rec.name)));
                return true;
            }
        }
        return false;
    };

    for (int i = 0; i < edits; ++i) {
        bool done = false;
        for (int attempt = 0; attempt < 200 && !done; ++attempt) done = try_edit(weighted_choice(rng));
        if (!done) throw EditError("unable to construct edit script");
    }

    std::sort(expected.begin(), expected.end(), canonical_diff_less);
    return MutationResult{std::move(working), std::move(script), std::move(expected)};
}

SyntheticResult generate_synthetic(int classes, int edits, std::uint64_t seed) {
    Model base = generate_model(classes, seed);
    MutationResult mut = mutate_model(base, edits, seed ^ 0x6d757461746f72ULL);
    return SyntheticResult{std::move(base), std::move(mut.model), std::move(mut.edits),
                           std::move(mut.expected)};
}

}  // namespace cdimpact
