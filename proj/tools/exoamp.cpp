#include "exoamp/pipeline.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

namespace {

struct Options {
    std::string config_path;
    std::string out_dir = ".";
    std::string format = "json";
    uint64_t seed = 0;
    bool seed_set = false;
    int subjects_override = 0;
};

exoamp::RunConfig load_config(const Options& opt)
{
    exoamp::RunConfig cfg;
    if (!opt.config_path.empty())
        cfg = exoamp::load_run_config(opt.config_path);
    if (opt.seed_set)
        cfg.seed = opt.seed;
    if (opt.subjects_override > 0) {
        if (!cfg.synth)
            cfg.synth = exoamp::RunConfig::Synth{};
        cfg.synth->n_subjects = opt.subjects_override;
    }
    return cfg;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"exoamp: human-joint complex-stiffness identification and "
                 "fractional-order amplification design"};
    app.require_subcommand(1);

    Options opt;
    app.add_option("--config", opt.config_path, "JSON run configuration")
        ->check(CLI::ExistingFile);
    app.add_option("--out", opt.out_dir, "pipeline directory (default: .)");
    app.add_option("--format", opt.format, "report table format: json|csv")
        ->check(CLI::IsMember({"json", "csv"}));
    auto* seed_opt = app.add_option("--seed", opt.seed, "RNG seed (overrides config)");
    app.add_option("--subjects", opt.subjects_override,
                   "synthetic cohort size (overrides config)");

    const char* verbs[] = {"synth", "identify", "ftest", "powerlaw", "design", "analyze",
                           "report"};
    const char* helps[] = {
        "generate the nine-experiment synthetic protocol (CSV + markers + manifest)",
        "extract frequency samples and fit M1/M2/M3 per experiment",
        "aggregate RSS and run the M1/M2-vs-M3 F-tests",
        "fit per-subject and cohort power laws from the M2 fits",
        "synthesize the amplification controller and lag cascade",
        "margins, stiffness sweep, marginal-f search, amplification predictions",
        "collate phase/parameter/F-test/power-law/design/amplification tables"};
    for (int i = 0; i < 7; ++i)
        app.add_subcommand(verbs[i], helps[i])->fallthrough();

    CLI11_PARSE(app, argc, argv);
    opt.seed_set = seed_opt->count() > 0;

    try {
        const exoamp::RunConfig cfg = load_config(opt);
        const std::filesystem::path out = opt.out_dir;
        std::filesystem::create_directories(out);
        const std::string verb = app.get_subcommands().front()->get_name();
        if (verb == "synth")
            exoamp::verb_synth(cfg, out);
        else if (verb == "identify")
            exoamp::verb_identify(cfg, out);
        else if (verb == "ftest")
            exoamp::verb_ftest(cfg, out);
        else if (verb == "powerlaw")
            exoamp::verb_powerlaw(cfg, out);
        else if (verb == "design") {
            exoamp::verb_design(cfg, out);
            std::cout << exoamp::io::load_json_file(out / "design" / "design.json").dump(2)
                      << '\n';
        }
        else if (verb == "analyze")
            exoamp::verb_analyze(cfg, out);
        else if (verb == "report")
            exoamp::verb_report(cfg, out, opt.format == "csv");
        std::cout << verb << ": ok (" << out.string() << ")\n";
        return 0;
    } catch (const exoamp::InfeasibleError& e) {
        std::cerr << "infeasible design: " << e.what() << '\n';
        return 4;
    } catch (const exoamp::NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return 3;
    } catch (const exoamp::Error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
