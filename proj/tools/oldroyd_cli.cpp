#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "oldroyd/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Fourier-Galerkin simulator for generalized Oldroyd-B flows on the 2D torus"};
    app.require_subcommand(1);

    std::string config, out_dir = "out", levels = "8,16,32,64";
    std::optional<double> t_end, r_split;
    std::size_t samples = 10000;
    double radius = 10.0;

    auto* run = app.add_subcommand("run", "integrate a configuration and write ledger, tails and snapshots");
    run->add_option("--config", config, "configuration file")->required();
    run->add_option("--out", out_dir, "output directory");
    run->add_option("--t-end", t_end, "override [run] t_end");

    auto* verify = app.add_subcommand("verify-hypotheses", "sample the growth, monotonicity and coercivity of f");
    verify->add_option("--config", config, "configuration file")->required();
    verify->add_option("--samples", samples, "number of samples")->check(CLI::PositiveNumber);
    verify->add_option("--radius", radius, "largest sampled |A|")->check(CLI::PositiveNumber);

    auto* conv = app.add_subcommand("converge", "compare final states across grid sizes");
    conv->add_option("--config", config, "configuration file")->required();
    conv->add_option("--levels", levels, "comma separated grid sizes, increasing");

    auto* dec = app.add_subcommand("decompose", "carry the stress decomposition and check its bounds");
    dec->add_option("--config", config, "configuration file")->required();
    dec->add_option("--R-split", r_split, "split level for the initial stress");
    dec->add_option("--out", out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : oldroyd::exit_code::usage;
    }

    try {
        if (*run) return oldroyd::cmd_run(config, out_dir, t_end, std::cout, std::cerr);
        if (*verify) return oldroyd::cmd_verify_hypotheses(config, samples, radius, std::cout, std::cerr);
        if (*conv) return oldroyd::cmd_converge(config, levels, std::cout, std::cerr);
        if (*dec) return oldroyd::cmd_decompose(config, r_split, out_dir, std::cout, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return oldroyd::exit_code::usage;
    }
    return oldroyd::exit_code::usage;
}
