// SPDX-License-Identifier: Apache-2.0
// Command-line front end: polyref <command> --scene <path> [options]

#include "polyref/cli/run.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

enum Exit { Ok = 0, Usage = 1, Parse = 2, Invariant = 3, Computation = 4 };

bool write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    f << text;
    return static_cast<bool>(f);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reflection-principle toolkit for polyhedral scatterers"};
    app.set_version_flag("--version", polyref::version_string);
    std::string command, scene_path, out_path, svg_path;
    polyref::RunFlags flags;
    double resolution = 0.0, tolerance = 0.0;

    app.add_option("command", command, "certify | certify-obstacle | reflect-check | group | trace | faces | render")
        ->required()
        ->check(CLI::IsMember(polyref::commands()));
    app.add_option("--scene", scene_path, "Scene JSON file")->required();
    app.add_option("--out", out_path, "Write the report here instead of stdout");
    app.add_option("--svg", svg_path, "Write an SVG drawing here (trace, render)");
    app.add_option("--seed", flags.seed, "Seed for sampling oracles")->capture_default_str();
    app.add_option("--grid-density", flags.grid_density, "Oracle points per great circle (>= 64)")
        ->capture_default_str();
    app.add_option("--max-iters", flags.max_iters, "Trace iteration cap")->capture_default_str();
    auto* res_opt = app.add_option("--resolution", resolution, "Trace flood-fill resolution (default: automatic)");
    auto* tol_opt = app.add_option("--tolerance", tolerance, "reflect-check pass threshold (default 1e-8)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? Ok : Usage;
    }
    if (res_opt->count()) flags.resolution = resolution;
    if (tol_opt->count()) flags.tolerance = tolerance;
    flags.want_svg = !svg_path.empty();
    if (command == "render" && svg_path.empty()) {
        std::cerr << "polyref: render requires --svg <path>\n";
        return Usage;
    }

    std::ifstream in(scene_path, std::ios::binary);
    if (!in) {
        std::cerr << "polyref: cannot read scene file '" << scene_path << "'\n";
        return Usage;
    }
    std::stringstream buf;
    buf << in.rdbuf();

    try {
        const polyref::Scene scene = polyref::parse_scene(buf.str());
        const polyref::RunOutcome outcome = polyref::run(command, scene, flags);
        const std::string report = outcome.report.dump(2) + "\n";
        if (out_path.empty()) {
            std::cout << report;
        } else if (!write_file(out_path, report)) {
            std::cerr << "polyref: cannot write '" << out_path << "'\n";
            return Usage;
        }
        if (outcome.svg && !svg_path.empty() && !write_file(svg_path, *outcome.svg)) {
            std::cerr << "polyref: cannot write '" << svg_path << "'\n";
            return Usage;
        }
        if (outcome.exit_code != 0) std::cerr << "polyref: " << outcome.diagnostic << "\n";
        return outcome.exit_code;
    } catch (const polyref::ParseError& e) {
        std::cerr << "polyref: parse error: " << e.what() << "\n";
        return Parse;
    } catch (const polyref::InvariantError& e) {
        std::cerr << "polyref: invariant violated: " << e.what() << "\n";
        return Invariant;
    } catch (const polyref::PreconditionError& e) {
        std::cerr << "polyref: precondition failed: " << e.what() << "\n";
        return Invariant;
    } catch (const polyref::ComputationError& e) {
        std::cerr << "polyref: computation failed: " << e.what() << "\n";
        return Computation;
    } catch (const std::exception& e) {
        std::cerr << "polyref: " << e.what() << "\n";
        return Computation;
    }
}
