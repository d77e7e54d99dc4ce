#include "cdimpact/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "cdimpact/model_text.hpp"
#include "cdimpact/presettings.hpp"
#include "cdimpact/synthetic.hpp"

namespace cdimpact {

namespace {

std::optional<std::string> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

bool write_file(const std::string& path, const std::string& content, std::ostream& err) {
    std::ofstream out(path, std::ios::binary);
    if (out) out << content;
    if (!out) {
        err << "error: cannot write '" << path << "'\n";
        return false;
    }
    return true;
}

bool ends_with(const std::string& text, const std::string& suffix) {
    return text.size() >= suffix.size() &&
           text.compare(text.size() - suffix.size(), suffix.size(), suffix) == 0;
}

int run_generate(const RunConfig& cfg, std::ostream& err) {
    if (!cfg.diff_out_path) {
        err << "error: --gen-synthetic requires --diff-out for the manifest\n";
        return kExitInputError;
    }
    if (cfg.old_path.empty() || cfg.new_path.empty()) {
        err << "error: --gen-synthetic requires --old and --new output paths\n";
        return kExitInputError;
    }
    SyntheticResult result =
        generate_synthetic(cfg.generate->classes, cfg.generate->edits, cfg.generate->seed);
    if (!write_file(cfg.old_path, serialize_model(result.old_model), err)) return kExitInputError;
    if (!write_file(cfg.new_path, serialize_model(result.new_model), err)) return kExitInputError;
    auto old_ptr = std::make_shared<const Model>(std::move(result.old_model));
    auto new_ptr = std::make_shared<const Model>(std::move(result.new_model));
    DiffModel manifest(old_ptr, new_ptr, std::move(result.expected));
    const std::string text =
        ends_with(*cfg.diff_out_path, ".json") ? manifest.to_json() : manifest.to_lines();
    if (!write_file(*cfg.diff_out_path, text, err)) return kExitInputError;
    return kExitOk;
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    if (cfg.generate) {
        try {
            return run_generate(cfg, err);
        } catch (const EditError& e) {
            err << "error: " << e.what() << "\n";
            return kExitInputError;
        }
    }

    if (cfg.old_path.empty() || cfg.new_path.empty()) {
        err << "error: --old and --new are required\n";
        return kExitInputError;
    }

    // Reads and parses one input file; failures are reported with the path.
    auto load = [&err](const std::string& path, auto parse)
        -> std::optional<decltype(parse(std::string_view()))> {
        std::optional<std::string> text = read_file(path);
        if (!text) {
            err << "error: cannot read '" << path << "'\n";
            return std::nullopt;
        }
        try {
            return parse(std::string_view(*text));
        } catch (const ParseError& e) {
            err << "error: " << path << ": " << e.what() << "\n";
        } catch (const ModelError& e) {
            err << "error: " << path << ": " << e.what() << "\n";
        }
        return std::nullopt;
    };

    auto old_parsed = load(cfg.old_path, [](std::string_view t) { return parse_model(t); });
    if (!old_parsed) return kExitInputError;
    auto new_parsed = load(cfg.new_path, [](std::string_view t) { return parse_model(t); });
    if (!new_parsed) return kExitInputError;
    auto old_model = std::make_shared<const Model>(std::move(*old_parsed));
    auto new_model = std::make_shared<const Model>(std::move(*new_parsed));

    PresettingSet presettings;
    if (cfg.presettings_path) {
        auto parsed = load(*cfg.presettings_path,
                           [](std::string_view t) { return parse_presettings(t); });
        if (!parsed) return kExitInputError;
        presettings = std::move(*parsed);
    }

    RuleSet rules;
    if (cfg.builtin_rules) rules = parse_builtin_rules();
    for (const std::string& path : cfg.rule_paths) {
        auto parsed = load(path, [](std::string_view t) { return parse_rules(t); });
        if (!parsed) return kExitInputError;
        for (ImpactRuleDecl& rule : parsed->rules) {
            if (rules.find(rule.name)) {
                err << "error: " << path << ": duplicate rule name '" << rule.name << "'\n";
                return kExitInputError;
            }
            rules.rules.push_back(std::move(rule));
        }
    }

    std::vector<ExtensionDecl> extensions;
    if (cfg.builtin_rules) extensions = parse_builtin_extensions();
    if (cfg.extensions_path) {
        auto parsed = load(*cfg.extensions_path,
                           [](std::string_view t) { return parse_extensions(t); });
        if (!parsed) return kExitInputError;
        for (ExtensionDecl& decl : *parsed) extensions.push_back(std::move(decl));
    }

    ExtensionRegistry registry;
    register_builtin_providers(registry);
    try {
        registry.add_extensions(extensions);
    } catch (const EvalError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    }

    bool has_errors = false;
    for (const Diagnostic& d : validate(rules, extensions, registry.condition_names(),
                                        registry.placeholder_names())) {
        err << (d.is_error() ? "error: " : "warning: ") << d.message << "\n";
        has_errors = has_errors || d.is_error();
    }
    if (has_errors) return kExitInputError;

    std::optional<DiffModel> dm_opt;
    try {
        Matching matching = match_models(*old_model, *new_model, presettings, cfg.threshold);
        dm_opt = compute_diff(old_model, new_model, matching);
    } catch (const MatchError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    DiffModel& dm = *dm_opt;

    if (cfg.diff_out_path) {
        const std::string text =
            ends_with(*cfg.diff_out_path, ".json") ? dm.to_json() : dm.to_lines();
        if (!write_file(*cfg.diff_out_path, text, err)) return kExitInputError;
    }

    EngineConfig engine_config;
    engine_config.naming = cfg.naming;
    if (cfg.orm_file_path) {
        auto parsed = load(*cfg.orm_file_path,
                           [](std::string_view t) { return parse_orm_file(t); });
        if (!parsed) return kExitInputError;
        engine_config.orm_file = std::move(*parsed);
    }
    if (cfg.property_file_path) {
        auto parsed = load(*cfg.property_file_path,
                           [](std::string_view t) { return parse_property_file(t); });
        if (!parsed) return kExitInputError;
        engine_config.property_file = std::move(*parsed);
        engine_config.property_file_name =
            std::filesystem::path(*cfg.property_file_path).filename().string();
    }
    if (cfg.sources_path) {
        try {
            engine_config.sources = build_scan_index(
                *cfg.sources_path,
                cfg.scan_extensions.empty() ? default_scan_extensions() : cfg.scan_extensions);
        } catch (const std::filesystem::filesystem_error& e) {
            err << "error: cannot scan '" << *cfg.sources_path << "': " << e.what() << "\n";
            return kExitInputError;
        }
    }

    HintFilter filter;
    filter.relevant_for = cfg.relevant_for;
    filter.min_severity = cfg.min_severity;

    std::vector<ChecklistHint> hints;
    try {
        hints = evaluate_all(rules, dm, registry, engine_config, cfg.unresolved, filter);
    } catch (const EvalError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUnresolved;
    }

    Checklist checklist = build_checklist(rules, hints);
    const std::string text = render_text(checklist, cfg.mode);
    if (cfg.out_path) {
        if (!write_file(*cfg.out_path, text, err)) return kExitInputError;
    } else {
        out << text;
    }
    if (cfg.json_out_path) {
        if (!write_file(*cfg.json_out_path, render_structured(checklist), err))
            return kExitInputError;
    }
    return kExitOk;
}

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"Class diagram differencing and change impact analysis"};
    app.name("cdimpact");

    RunConfig cfg;
    std::string presettings_path, extensions_path, out_path, json_out_path, diff_out_path;
    std::string orm_file_path, property_file_path, sources_path, relevant_for;
    std::string mode = "short", unresolved = "flag", naming = "upper_snake", min_severity;
    std::string gen_spec;

    app.add_option("--old", cfg.old_path,
                   "Old model file; with --gen-synthetic the path the old model is written to");
    app.add_option("--new", cfg.new_path,
                   "New model file; with --gen-synthetic the path the new model is written to");
    app.add_option("--presettings", presettings_path,
                   "Presettings file overriding the similarity matching");
    app.add_option("--rules", cfg.rule_paths, "Impact rule file, repeatable");
    app.add_option("--extensions", extensions_path, "Declarative extensions file");
    app.add_flag("--builtin-rules", cfg.builtin_rules,
                 "Evaluate the builtin analysis rules in addition to --rules");
    app.add_option("--mode", mode, "Checklist rendering mode")
        ->check(CLI::IsMember({"short", "detailed"}));
    app.add_option("--out", out_path, "Write the checklist here instead of stdout");
    app.add_option("--json-out", json_out_path, "Write the structured checklist here");
    app.add_option("--diff-out", diff_out_path,
                   "Write the differences here; a .json suffix selects the tree format");
    app.add_option("--unresolved", unresolved,
                   "How to treat unresolved conditions and placeholders")
        ->check(CLI::IsMember({"fail", "false", "flag"}));
    app.add_option("--threshold", cfg.threshold, "Similarity matching threshold");
    app.add_option("--naming", naming, "Table and column naming convention")
        ->check(CLI::IsMember({"upper_snake", "as_is", "lower_snake"}));
    app.add_option("--orm-file", orm_file_path, "Object-relational mapping file");
    app.add_option("--property-file", property_file_path, "Property file with UI keys");
    app.add_option("--sources", sources_path, "Directory scanned for SQL identifier usages");
    app.add_option("--scan-ext", cfg.scan_extensions,
                   "File extension to scan under --sources (with dot), repeatable");
    app.add_option("--relevant-for", relevant_for, "Keep only hints tagged with this value");
    app.add_option("--min-severity", min_severity, "Keep only hints at or above this severity")
        ->check(CLI::IsMember({"minor", "normal", "critical"}));
    app.add_option("--gen-synthetic", gen_spec,
                   "Generate a synthetic model pair: classes,edits,seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInputError;
    }

    if (!presettings_path.empty()) cfg.presettings_path = presettings_path;
    if (!extensions_path.empty()) cfg.extensions_path = extensions_path;
    if (!out_path.empty()) cfg.out_path = out_path;
    if (!json_out_path.empty()) cfg.json_out_path = json_out_path;
    if (!diff_out_path.empty()) cfg.diff_out_path = diff_out_path;
    if (!orm_file_path.empty()) cfg.orm_file_path = orm_file_path;
    if (!property_file_path.empty()) cfg.property_file_path = property_file_path;
    if (!sources_path.empty()) cfg.sources_path = sources_path;
    if (!relevant_for.empty()) cfg.relevant_for = relevant_for;
    if (!min_severity.empty()) cfg.min_severity = severity_from_string(min_severity);

    cfg.mode = mode == "detailed" ? ChecklistMode::Detailed : ChecklistMode::Short;
    if (unresolved == "fail")
        cfg.unresolved = UnresolvedPolicy::Fail;
    else if (unresolved == "false")
        cfg.unresolved = UnresolvedPolicy::False;
    else
        cfg.unresolved = UnresolvedPolicy::Flag;
    if (naming == "as_is")
        cfg.naming = NamingConvention::AsIs;
    else if (naming == "lower_snake")
        cfg.naming = NamingConvention::LowerSnake;
    else
        cfg.naming = NamingConvention::UpperSnake;

    if (!gen_spec.empty()) {
        SyntheticRequest request;
        char extra = 0;
        long long classes = 0, edits = 0;
        unsigned long long seed = 0;
        std::istringstream iss(gen_spec);
        char c1 = 0, c2 = 0;
        if (!(iss >> classes >> c1 >> edits >> c2 >> seed) || c1 != ',' || c2 != ',' ||
            (iss >> extra) || classes < 0 || edits < 0) {
            std::cerr << "error: --gen-synthetic expects classes,edits,seed\n";
            return kExitInputError;
        }
        request.classes = static_cast<int>(classes);
        request.edits = static_cast<int>(edits);
        request.seed = static_cast<std::uint64_t>(seed);
        cfg.generate = request;
    }

    return run(cfg, std::cout, std::cerr);
}

}  // namespace cdimpact
