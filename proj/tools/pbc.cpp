// Command-line front end: validation, Segal and Weiss suites, mapping spaces,
// zig-zag composition, homology and DOT export for spec files.
#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "pbc/cli.hpp"

namespace {

int emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
    } else {
        pbc::write_file(out_path, text);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Partial Brown categories: zig-zag composition and the Weiss bicategory"};
    app.require_subcommand(1);
    app.fallthrough();

    pbc::SuiteOptions options;
    std::string format = "text";
    std::string out_path;
    std::string file;
    std::string target = "carrier";
    app.add_option("--budget", options.budget, "search budget (default from PBC_BUDGET or 1000000)");
    app.add_option("--format", format, "report format")->check(CLI::IsMember({"json", "text"}));
    app.add_option("--out", out_path, "write the report here instead of stdout");
    app.add_flag("--timing", options.timing, "include wall-clock timing in the report");

    auto add = [&](const std::string& name, const std::string& help) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("file", file, "spec file")->required()->check(CLI::ExistingFile);
        return sub;
    };
    add("validate", "check the category, relative category and PBC axioms");
    auto* segal = add("segal", "Segal maps of C(M)");
    segal->add_option("--max-n", options.max_n, "largest degree")->check(CLI::Range(2, 6));
    auto* weiss = add("weiss", "the Weiss bicategory W(M)");
    weiss->add_option("--max-dim", options.max_dim, "largest level")->check(CLI::Range(0, 5));
    auto* map = add("map-space", "the mapping category between two objects");
    map->add_option("--from", options.from, "source object")->required();
    map->add_option("--to", options.to, "target object")->required();
    map->add_option("--dim", options.max_dim, "nerve truncation")->check(CLI::Range(0, 5));
    auto* compose = add("compose", "compose two zig-zags, given as objects of C_1");
    compose->add_option("--z1", options.z1, "first zig-zag")->required();
    compose->add_option("--z2", options.z2, "second zig-zag")->required();
    auto* homology = add("homology", "integral homology of M, C_0 and C_1");
    homology->add_option("--dim", options.dim, "top degree")->check(CLI::Range(0, 5));
    auto* main_theorem = add("main-theorem", "evidence relating N^R(M) and W(M)");
    main_theorem->add_option("--max-dim", options.max_dim, "largest level")->check(CLI::Range(0, 5));
    auto* dot = add("export-dot", "write a DOT graph");
    dot->add_option("--target", target, "carrier | level:N | cn:N:OBJECT | map:X,Y");

    CLI11_PARSE(app, argc, argv);

    try {
        auto bytes = pbc::read_file(file);
        auto spec = pbc::parse_spec_text(bytes);
        if (spec.name.empty()) spec.name = std::filesystem::path(file).stem().string();
        auto* sub = app.get_subcommands().front();
        if (sub == dot) return emit(pbc::export_dot(spec, target, options), out_path);
        auto report = pbc::run_suite(spec, sub->get_name(), options);
        report.fixture_hash = pbc::hash_hex(pbc::fnv1a64(bytes));
        emit(pbc::emit_report(report, format), out_path);
        return pbc::exit_code(report);
    } catch (const pbc::BudgetExceeded& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return 3;
    } catch (const pbc::InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
