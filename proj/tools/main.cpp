#include <iostream>

#include "CLI11.hpp"
#include "rt/driver.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Relative torsion checks on scenario files"};
    app.require_subcommand(1);

    rt::RunOptions opt;
    std::uint64_t seed = 0;

    for (const std::string& name : rt::subcommands()) {
        CLI::App* sub = app.add_subcommand(name, "run the " + name + " checks");
        sub->add_option("scenario", opt.scenario_path, "scenario JSON file")->required();
        sub->add_option("--seed", seed, "override the scenario seed");
        sub->add_option("--tolerance-scale", opt.tolerance_scale, "multiply every tolerance")
            ->check(CLI::PositiveNumber);
        sub->add_option("--threads", opt.threads, "worker threads for sweeps")->check(CLI::Range(1, 256));
        sub->add_option("--out-dir", opt.out_dir, "directory for reports");
        sub->add_flag("--strict", opt.strict, "reject inputs that are only accepted leniently");
        sub->callback([&opt, &seed, sub, name] {
            opt.subcommand = name;
            if (sub->count("--seed")) opt.seed = seed;
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    return rt::run(opt, std::cout, std::cerr);
}
