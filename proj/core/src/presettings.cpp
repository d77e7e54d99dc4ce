#include "cdimpact/presettings.hpp"

#include <set>

#include "lexer.hpp"

namespace cdimpact {

PresettingSet parse_presettings(std::string_view text) {
    detail::Lexer lx(text);
    PresettingSet set;
    std::set<std::string> subjects;
    while (!lx.at_end()) {
        Presetting item;
        if (lx.is_keyword("renamed")) {
            item.instruction = PresetInstruction::Renamed;
        } else if (lx.is_keyword("moved")) {
            item.instruction = PresetInstruction::Moved;
        } else {
            lx.fail("expected 'renamed' or 'moved'");
        }
        lx.next();
        detail::Token subject = lx.expect_string("subject");
        lx.expect_keyword("to");
        detail::Token target = lx.expect_string("target");
        lx.expect_punct(";");

        QualifiedName qname;
        try {
            qname = QualifiedName::parse(subject.text);
        } catch (const ModelError& e) {
            throw ParseError(e.what(), subject.loc);
        }
        item.subject.kind = qname.has_attribute() ? RefKind::Attribute : RefKind::Class;
        item.subject.qname = qname;

        if (item.instruction == PresetInstruction::Renamed) {
            if (!is_identifier(target.text))
                throw ParseError("rename target must be a simple name, got '" + target.text + "'",
                                 target.loc);
        } else {
            QualifiedName container;
            try {
                container = QualifiedName::parse(target.text);
            } catch (const ModelError& e) {
                throw ParseError(e.what(), target.loc);
            }
            if (container.has_attribute())
                throw ParseError("move target must be a container name, got '" + target.text + "'",
                                 target.loc);
        }
        item.target = target.text;

        if (!subjects.insert(item.subject.str()).second)
            throw ParseError("duplicate presetting for '" + item.subject.str() + "'", subject.loc);
        set.items.push_back(std::move(item));
    }
    return set;
}

std::string print_presettings(const PresettingSet& set) {
    std::string out;
    for (const Presetting& item : set.items) {
        out += item.instruction == PresetInstruction::Renamed ? "renamed" : "moved";
        out += " \"" + item.subject.str() + "\" to \"" + item.target + "\";\n";
    }
    return out;
}

}  // namespace cdimpact
