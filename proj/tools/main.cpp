#include <iostream>

#include <CLI11.hpp>

#include "cli.hpp"
#include "nnls/errors.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"Long-time asymptotics and direct simulation for the defocusing nonlocal NLS with step data"};
    app.require_subcommand(1);

    std::string config_path, out_dir, xi_grid, t_list;
    std::vector<std::string> overrides;
    unsigned threads = 0;
    nnls::cli::Flags flags;
    bool show_defaults = false;

    app.add_option("--config", config_path, "key = value configuration file")->check(CLI::ExistingFile);
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    app.add_flag("--kink", flags.kink, "also tabulate (predict) or compare (compare) kink profiles");
    app.add_option("--xi-grid", xi_grid, "direction grid a:b:n");
    app.add_option("--t-list", t_list, "comma-separated times");
    app.add_option("--set", overrides, "override a config key, key=value (repeatable)");
    app.add_flag("--defaults", show_defaults, "print all config keys with their defaults and exit");

    for (const char* name : {"scatter", "zeros", "predict", "simulate", "compare", "report"})
        app.add_subcommand(name)->fallthrough();
    app.get_subcommand("scatter")->description("spectral functions on a real k grid");
    app.get_subcommand("zeros")->description("zeros of a1, thresholds and assumption report");
    app.get_subcommand("predict")->description("sector, plateau and correction terms on the xi grid");
    app.get_subcommand("simulate")->description("direct PDE simulation snapshots");
    app.get_subcommand("compare")->description("simulation versus asymptotic prediction");
    app.get_subcommand("report")->description("summary of the outputs present in --out");

    if (argc >= 2 && std::string(argv[1]) == "--defaults") {
        std::cout << nnls::default_config_text();
        return 0;
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : int(nnls::ErrorClass::Config);
    }

    try {
        nnls::ExperimentConfig cfg = config_path.empty() ? nnls::ExperimentConfig{} : nnls::load_config(config_path);
        for (const auto& kv : overrides) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) throw nnls::Error(nnls::ErrorKind::Config, "--set expects key=value");
            nnls::apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
        }
        if (!out_dir.empty()) cfg.out = out_dir;
        if (threads > 0) cfg.threads = threads;
        if (!xi_grid.empty()) cfg.xi_grid = nnls::parse_grid(xi_grid);
        if (!t_list.empty()) cfg.t_list = nnls::parse_list(t_list);
        return nnls::cli::run(app.get_subcommands().front()->get_name(), cfg, flags, std::cout);
    } catch (const nnls::Error& e) {
        std::cerr << "error [" << nnls::to_string(e.kind()) << "]: " << e.what() << "\n";
        return int(e.error_class());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return int(nnls::ErrorClass::Numeric);
    }
}
