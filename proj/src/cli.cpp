#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "annlab/io.hpp"
#include "annlab/levelset.hpp"
#include "annlab/scenario.hpp"

namespace annlab {
namespace {

bool file_exists(const std::string& path) {
    std::ifstream in(path);
    return in.good();
}

int fail_config(const std::string& msg) {
    std::cerr << "config error: " << msg << "\n";
    return 2;
}

bool parse_grid_arg(const std::string& text, int& nr, int& na) {
    auto x = text.find('x');
    if (x == std::string::npos || x == 0 || x + 1 >= text.size()) return false;
    try {
        std::size_t used = 0;
        nr = std::stoi(text.substr(0, x), &used);
        if (used != x) return false;
        na = std::stoi(text.substr(x + 1), &used);
        if (used != text.size() - x - 1) return false;
    } catch (...) {
        return false;
    }
    return nr > 0 && na > 0;
}

bool write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    return bool(out);
}

bool is_builtin(const std::string& name) {
    for (const auto& e : catalog())
        if (e.name == name) return true;
    return false;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"level-set laboratory for harmonic fields on a punctured annulus"};
    app.require_subcommand(1);

    auto* list_cmd = app.add_subcommand("list", "list the builtin scenarios");

    std::string scenario_arg, out_path, svg_path, csv_path, mesh_path, grid_arg;
    double level = 0.0;
    std::uint64_t seed = 0;
    bool quiet = false;
    auto* run_cmd = app.add_subcommand("run", "run one scenario and write its report");
    run_cmd->add_option("--scenario", scenario_arg, "scenario JSON file or builtin name")
        ->required();
    run_cmd->add_option("--out", out_path, "report path (default: stdout)");
    run_cmd->add_option("--svg", svg_path, "also write a level-set plot");
    run_cmd->add_option("--csv", csv_path, "also write the arc vertex table");
    run_cmd->add_option("--mesh", mesh_path, "also write the immersed mesh (surface data only)");
    run_cmd->add_option("--grid", grid_arg, "resolution override, NRxNA");
    auto* level_opt = run_cmd->add_option("--level", level, "level / plane offset override");
    auto* seed_opt = run_cmd->add_option("--seed", seed, "walker seed override");
    run_cmd->add_flag("--quiet", quiet, "suppress the summary lines");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (list_cmd->parsed()) {
        for (const auto& e : catalog())
            std::printf("%-22s %s\n", e.name.c_str(), e.summary.c_str());
        return 0;
    }

    Scenario sc;
    try {
        if (file_exists(scenario_arg)) {
            std::ifstream in(scenario_arg, std::ios::binary);
            std::stringstream ss;
            ss << in.rdbuf();
            sc = parse_scenario(ss.str());
        } else if (is_builtin(scenario_arg)) {
            sc = builtin_scenario(scenario_arg);
        } else {
            return fail_config("'" + scenario_arg + "' is neither a file nor a builtin");
        }
        if (!grid_arg.empty()) {
            int nr = 0, na = 0;
            if (!parse_grid_arg(grid_arg, nr, na))
                return fail_config("--grid wants NRxNA, e.g. 129x256");
            sc.n_radial = nr;
            sc.n_angular = na;
        }
        if (level_opt->count() > 0) sc.level = level;
        if (seed_opt->count() > 0) sc.seed = seed;
        sc.grid();  // revalidate after overrides
        if (!mesh_path.empty() && sc.kind != FieldKind::Weierstrass)
            return fail_config("--mesh needs a scenario with weierstrass data");
    } catch (const Error& e) {
        return fail_config(e.what());
    }

    try {
        RunReport rep = run_scenario(sc);
        std::string text = rep.document.dump(2) + "\n";
        if (out_path.empty()) {
            std::fwrite(text.data(), 1, text.size(), stdout);
        } else {
            if (!write_file(out_path, text)) {
                std::cerr << "cannot write " << out_path << "\n";
                return 4;
            }
            if (!quiet) std::printf("report: %s\n", out_path.c_str());
        }

        // side files ride along; their failure never changes the exit code
        if (!svg_path.empty() || !csv_path.empty()) {
            try {
                TraceOptions topts;
                auto f_tol = sc.tolerances.find("trace_f_tol_rel");
                auto g_tol = sc.tolerances.find("trace_g_tol_rel");
                if (f_tol != sc.tolerances.end()) topts.f_tol_rel = f_tol->second;
                if (g_tol != sc.tolerances.end()) topts.g_tol_rel = g_tol->second;
                LevelSetComplex c = trace_level(scenario_field(sc), sc.level, sc.grid(), topts);
                if (!svg_path.empty() && write_file(svg_path, render_svg(c)) && !quiet)
                    std::printf("svg: %s\n", svg_path.c_str());
                if (!csv_path.empty() && write_file(csv_path, arc_csv(c)) && !quiet)
                    std::printf("csv: %s\n", csv_path.c_str());
            } catch (const Error& e) {
                std::cerr << "plot skipped: " << e.what() << "\n";
            }
        }
        if (!mesh_path.empty()) {
            try {
                MinimalImmersion imm = immerse(scenario_surface(sc), sc.grid());
                if (write_file(mesh_path, mesh_text(imm)) && !quiet)
                    std::printf("mesh: %s\n", mesh_path.c_str());
            } catch (const Error& e) {
                std::cerr << "mesh skipped: " << e.what() << "\n";
            }
        }

        if (!quiet) {
            int failed = 0;
            for (const auto& [key, val] : rep.document.at("results").items())
                failed += val.contains("error") ? 1 : 0;
            std::printf("%s: %d analysis(es), %d failed, %d warning(s)\n", sc.name.c_str(),
                        int(sc.analyses.size()), failed,
                        int(rep.document.at("warnings").size()));
        }
        return rep.nonconvergence ? 3 : 0;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    }
}

}  // namespace annlab
