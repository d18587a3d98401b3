#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include <modfold/modfold.hpp>

namespace {

struct SubArgs {
    std::string config;
    std::string out;
    std::uint64_t seed = 0;
    bool dry_run = false;
};

const char* kind_blurb(modfold::ExperimentKind k) {
    using K = modfold::ExperimentKind;
    switch (k) {
        case K::decay_curve: return "binomial residual decay curve (CSV + plot data)";
        case K::prolate_spectrum: return "prolate matrix eigenvalue spectrum";
        case K::svp_compare: return "bruteforce vs LLL shortest-vector residuals";
        case K::witness: return "small-fold / unit-energy witness search";
        case K::unfold_demo: return "fold + peak-removal unfolding round trip";
        case K::density_scan: return "counting-rate scan of a sampling set";
    }
    return "";
}

}

int main(int argc, char** argv) {
    CLI::App app{"folded-sampling experiments: certificates, witnesses, unfolding"};
    app.set_version_flag("--version", modfold::version());
    app.require_subcommand(1);

    std::map<std::string, SubArgs> args;
    for (modfold::ExperimentKind k : modfold::all_kinds()) {
        const char* name = modfold::kind_name(k);
        CLI::App* sub = app.add_subcommand(name, kind_blurb(k));
        SubArgs& a = args[name];
        sub->add_option("--config", a.config, "JSON config file")->required();
        sub->add_option("--out", a.out, "output directory (default runs/<kind>)");
        sub->add_option("--seed", a.seed, "override the config seed");
        sub->add_flag("--dry-run", a.dry_run, "validate config and list stages only");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        CLI::App* sub = app.get_subcommands().at(0);
        const std::string name = sub->get_name();
        SubArgs& a = args[name];

        std::ifstream in(a.config);
        if (!in) throw modfold::usage_error("cannot open config: " + a.config);
        modfold::json doc = modfold::json::parse(in);
        modfold::ExperimentConfig cfg = modfold::parse_config(doc);
        if (std::string(modfold::kind_name(cfg.kind)) != name)
            throw modfold::usage_error("config.kind \"" +
                                       std::string(modfold::kind_name(cfg.kind)) +
                                       "\" does not match subcommand \"" + name + "\"");
        if (sub->count("--seed")) cfg.seed = a.seed;

        if (a.dry_run) {
            std::cout << "dry run: " << name << " (seed " << cfg.seed << ")\n";
            for (const std::string& stage : modfold::planned_stages(cfg.kind))
                std::cout << "  - " << stage << "\n";
            return 0;
        }

        std::string out = a.out.empty() ? "runs/" + name : a.out;
        modfold::RunManifest man = modfold::run(cfg, out);
        std::cout << name << " done -> " << out << "\n";
        for (const modfold::OutputRecord& o : man.outputs)
            std::cout << "  " << o.path << " (" << o.bytes << " bytes)\n";
        return 0;
    } catch (const modfold::usage_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const modfold::domain_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const modfold::json::parse_error& e) {
        std::cerr << "usage error: config is not valid JSON: " << e.what() << "\n";
        return 2;
    } catch (const modfold::numerical_error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
}
