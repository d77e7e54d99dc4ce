#include "cdimpact/model_text.hpp"

#include <map>
#include <sstream>
#include <utility>
#include <vector>

#include "lexer.hpp"

namespace cdimpact {

namespace {

using detail::Lexer;
using detail::TokKind;
using detail::Token;

class ModelParser {
public:
    explicit ModelParser(std::string_view text) : lx_(text) {}

    Model parse() {
        std::vector<Package> packages;
        std::vector<Association> associations;
        while (lx_.is_keyword("package")) packages.push_back(parse_package());
        while (lx_.is_keyword("association")) associations.push_back(parse_association());
        if (!lx_.at_end()) lx_.fail("expected 'package' or 'association'");
        try {
            return Model(std::move(packages), std::move(associations));
        } catch (const ModelError& e) {
            // Map the structural error back to the closest declaration site.
            throw ParseError(e.what(), location_of(e.what()));
        }
    }

private:
    Package parse_package() {
        lx_.expect_keyword("package");
        Token name = lx_.expect_ident("package name");
        Package pkg;
        pkg.name = name.text;
        note_location(name);
        lx_.expect_punct("{");
        while (!lx_.is_punct("}")) {
            if (lx_.is_keyword("package")) {
                pkg.packages.push_back(parse_package());
            } else {
                pkg.classes.push_back(parse_class());
            }
        }
        lx_.expect_punct("}");
        return pkg;
    }

    ClassDecl parse_class() {
        ClassDecl cls;
        cls.stereotypes = parse_stereotypes();
        lx_.expect_keyword("class");
        Token name = lx_.expect_ident("class name");
        cls.name = name.text;
        note_location(name);
        if (lx_.is_keyword("extends")) {
            lx_.next();
            cls.superclass = parse_qname();
        }
        lx_.expect_punct("{");
        while (!lx_.is_punct("}")) cls.attributes.push_back(parse_attribute());
        lx_.expect_punct("}");
        return cls;
    }

    Attribute parse_attribute() {
        Attribute attr;
        attr.stereotypes = parse_stereotypes();
        Token name = lx_.expect_ident("attribute name");
        attr.name = name.text;
        note_location(name);
        lx_.expect_punct(":");
        attr.type_name = lx_.expect_ident("type name").text;
        if (lx_.is_punct("[")) attr.cardinality = parse_cardinality();
        return attr;
    }

    Association parse_association() {
        lx_.expect_keyword("association");
        Token name = lx_.expect_ident("association name");
        Association assoc;
        assoc.name = name.text;
        note_location(name);
        assoc.source_card = parse_cardinality();
        assoc.source = parse_qname();
        lx_.expect_punct("->");
        assoc.target_card = parse_cardinality();
        assoc.target = parse_qname();
        return assoc;
    }

    std::vector<std::string> parse_stereotypes() {
        std::vector<std::string> stereos;
        while (lx_.is_punct("<<")) {
            lx_.next();
            stereos.push_back(lx_.expect_ident("stereotype name").text);
            lx_.expect_punct(">>");
        }
        return stereos;
    }

    Cardinality parse_cardinality() {
        Token open = lx_.expect_punct("[");
        Cardinality card;
        card.lower = parse_int();
        card.upper = card.lower;
        if (lx_.is_punct("..")) {
            lx_.next();
            if (lx_.is_punct("*")) {
                lx_.next();
                card.upper.reset();
            } else {
                card.upper = parse_int();
            }
        }
        lx_.expect_punct("]");
        if (card.upper && *card.upper < card.lower)
            throw ParseError("invalid cardinality " + card.str(), open.loc);
        return card;
    }

    unsigned parse_int() {
        Token t = lx_.expect_int();
        try {
            unsigned long value = std::stoul(t.text);
            if (value > 1000000) throw std::out_of_range("cardinality bound");
            return static_cast<unsigned>(value);
        } catch (const std::exception&) {
            throw ParseError("integer out of range", t.loc);
        }
    }

    QualifiedName parse_qname() {
        Token first = lx_.expect_ident("qualified name");
        QualifiedName q;
        q.segments.push_back(first.text);
        while (lx_.is_punct(".")) {
            lx_.next();
            q.segments.push_back(lx_.expect_ident("name segment").text);
        }
        return q;
    }

    // Declaration sites by simple name, last occurrence wins so duplicate
    // reports point at the second declaration.
    void note_location(const Token& t) { locations_[t.text] = t.loc; }

    SourceLocation location_of(const std::string& message) const {
        // Structural errors quote the offending name: find the innermost
        // quoted segment that we saw declared.
        std::size_t from = 0;
        SourceLocation best{1, 1};
        while (true) {
            std::size_t open = message.find('\'', from);
            if (open == std::string::npos) break;
            std::size_t close = message.find('\'', open + 1);
            if (close == std::string::npos) break;
            std::string quoted = message.substr(open + 1, close - open - 1);
            std::size_t tail = quoted.find_last_of(".#");
            std::string simple = tail == std::string::npos ? quoted : quoted.substr(tail + 1);
            auto it = locations_.find(simple);
            if (it != locations_.end()) best = it->second;
            from = close + 1;
        }
        return best;
    }

    Lexer lx_;
    std::map<std::string, SourceLocation> locations_;
};

void write_cardinality(std::ostream& os, const Cardinality& card) { os << card.str(); }

void write_attribute(std::ostream& os, const Attribute& attr, const std::string& indent) {
    os << indent;
    for (const std::string& s : attr.stereotypes) os << "<<" << s << ">> ";
    os << attr.name << ": " << attr.type_name;
    if (!(attr.cardinality == Cardinality{})) {
        os << ' ';
        write_cardinality(os, attr.cardinality);
    }
    os << '\n';
}

void write_class(std::ostream& os, const ClassDecl& cls, const std::string& indent) {
    os << indent;
    for (const std::string& s : cls.stereotypes) os << "<<" << s << ">> ";
    os << "class " << cls.name;
    if (cls.superclass) os << " extends " << cls.superclass->str();
    if (cls.attributes.empty()) {
        os << " {}\n";
        return;
    }
    os << " {\n";
    for (const Attribute& attr : cls.attributes) write_attribute(os, attr, indent + "  ");
    os << indent << "}\n";
}

void write_package(std::ostream& os, const Package& pkg, const std::string& indent) {
    os << indent << "package " << pkg.name;
    if (pkg.packages.empty() && pkg.classes.empty()) {
        os << " {}\n";
        return;
    }
    os << " {\n";
    for (const Package& sub : pkg.packages) write_package(os, sub, indent + "  ");
    for (const ClassDecl& cls : pkg.classes) write_class(os, cls, indent + "  ");
    os << indent << "}\n";
}

}  // namespace

Model parse_model(std::string_view text) { return ModelParser(text).parse(); }

std::string serialize_model(const Model& model) {
    std::ostringstream os;
    for (const Package& pkg : model.packages()) write_package(os, pkg, "");
    for (const Association& assoc : model.associations()) {
        os << "association " << assoc.name << ' ';
        write_cardinality(os, assoc.source_card);
        os << ' ' << assoc.source.str() << " -> ";
        write_cardinality(os, assoc.target_card);
        os << ' ' << assoc.target.str() << '\n';
    }
    std::string text = os.str();
    if (text.empty()) text = "\n";
    return text;
}

}  // namespace cdimpact
