#include "mellin/cli/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    using namespace mellin::cli;

    CLI::App app{"Mellin-transform pricer for basket options under exponential Levy models"};
    app.require_subcommand(1);

    Invocation inv;
    std::string format;
    int threads = 0;
    std::uint64_t seed = 0;

    for (const char* name : {"price", "validate", "converge", "boundary"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("config", inv.config_path, "run configuration (JSON)")->required();
        sub->add_option("--out", inv.out, "write the report to PATH");
        sub->add_option("--format", format, "table, csv or json")->check(CLI::IsMember({"table", "csv", "json"}));
        sub->add_option("--threads", threads, "worker thread cap")->check(CLI::PositiveNumber);
        sub->add_option("--seed", seed, "Monte Carlo seed");
    }
    app.get_subcommand("price")->description("price the configured option");
    app.get_subcommand("validate")->description("compare the pricer with the independent oracles");
    app.get_subcommand("converge")->description("refine one numerical parameter and report the price sequence");
    app.get_subcommand("boundary")->description("critical price curve of the American put");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    for (auto* sub : app.get_subcommands()) {
        inv.command = sub->get_name();
        if (sub->count("--format")) inv.format = parse_format(format);
        if (sub->count("--threads")) inv.threads = threads;
        if (sub->count("--seed")) inv.seed = seed;
    }
    return run(inv, std::cout, std::cerr);
}
