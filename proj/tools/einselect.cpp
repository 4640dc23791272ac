// einselect <subcommand> --config <path> [--out <dir>]
// einselect plot --csv <path> --kind <kind> --svg <path>

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "einselect/commands.hpp"
#include "einselect/error.hpp"
#include "einselect/plot.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Particle / scalar-field master equations and the predictability sieve"};
    app.require_subcommand(1);

    std::string config, out;
    const char* blurbs[] = {
        "tabulate the retarded and symmetric bath kernels",
        "build the time-dependent QBM coefficients",
        "evolve one initial state with the configured engine",
        "secular decoherence rates gamma^2_nm",
        "rank candidate pointer states by entropy production",
        "perturbative scaling check against exact few-mode evolution",
    };
    for (std::size_t i = 0; i < einselect::subcommands().size(); ++i) {
        auto* sc = app.add_subcommand(einselect::subcommands()[i], blurbs[i]);
        sc->add_option("--config", config, "scenario file")->required()->check(CLI::ExistingFile);
        sc->add_option("--out", out, std::string("output directory (overrides $") + einselect::kOutDirEnv +
                                         " and output.dir)");
    }

    std::string csv, kind, svg;
    auto* plot = app.add_subcommand("plot", "render an SVG from a CSV artifact");
    plot->add_option("--csv", csv, "input CSV")->required()->check(CLI::ExistingFile);
    plot->add_option("--kind", kind, "entropy_curves | offdiag_decay | coefficient_traces")->required();
    plot->add_option("--svg", svg, "output SVG")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : static_cast<int>(einselect::ErrorCategory::config);
    }

    if (plot->parsed()) {
        try {
            einselect::emit_plot(csv, einselect::parse_plot_kind(kind), svg);
        } catch (const einselect::Error& e) {
            std::cerr << "einselect: " << einselect::category_name(e.category()) << ": " << e.what() << '\n';
            return e.exit_code();
        } catch (const std::exception& e) {
            std::cerr << "einselect: " << e.what() << '\n';
            return 1;
        }
        std::cout << svg << '\n';
        return 0;
    }

    const std::string sub = app.get_subcommands().front()->get_name();
    const auto rep = einselect::run_from_config(sub, config, out);
    if (rep.exit_code != 0) {
        std::cerr << "einselect " << sub << ": " << rep.message << '\n';
        return rep.exit_code;
    }
    for (const auto& f : rep.files) std::cout << rep.output_dir << '/' << f << '\n';
    std::cerr << "einselect " << sub << ": ok (" << rep.wall_time_seconds << " s)\n";
    return 0;
}
