// Command-line front end: hjvisc <task> --in doc.json [options]

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hjvisc/cli.hpp"

int main(int argc, char** argv) {
    using namespace hjvisc;

    CLI::App app{"Interval-valued functions and viscosity solutions of 1-D Hamilton-Jacobi equations"};
    app.set_help_flag("-h,--help", "Print this help message and exit");

    cli::Options opts;
    std::string in_path;
    std::uint64_t seed = 0;
    std::string phi, lower, upper;
    std::size_t nodes = 0, max_iters = 0;
    double residual_tol = 0.0;

    app.add_option("task", opts.task, "Task to run")->required()->check(CLI::IsMember(cli::task_names()));
    app.add_option("--in", in_path, "Problem document (JSON)");
    app.add_option("--out", opts.out_path, "Write the JSON report here");
    app.add_option("--csv", opts.csv_path, "Write graph segments (or solved grid values) as CSV");
    app.add_option("--svg", opts.svg_path, "Write an SVG plot");
    auto* seed_opt = app.add_option("--seed", seed, "Seed for the random check points");
    auto* phi_opt = app.add_option("--phi", phi, "Hamiltonian expression in x, u, p (overrides the document)");
    auto* lower_opt = app.add_option("--lower", lower, "solve: file holding the subsolution u1")->check(CLI::ExistingFile);
    auto* upper_opt = app.add_option("--upper", upper, "solve: file holding the supersolution u2")->check(CLI::ExistingFile);
    auto* nodes_opt = app.add_option("--nodes", nodes, "solve: number of grid nodes");
    auto* tol_opt = app.add_option("--residual-tol", residual_tol, "solve: residual tolerance");
    auto* iters_opt = app.add_option("--max-iters", max_iters, "solve: iteration limit");
    app.add_option("--trace", opts.trace_path, "solve: write the iteration trace (JSON)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : cli::kInputError;
    }

    if (*seed_opt) opts.seed = seed;
    if (*phi_opt) opts.phi = phi;
    if (*lower_opt) opts.lower_path = lower;
    if (*upper_opt) opts.upper_path = upper;
    if (*nodes_opt) opts.nodes = nodes;
    if (*tol_opt) opts.residual_tol = residual_tol;
    if (*iters_opt) opts.max_iters = max_iters;

    if (!in_path.empty()) {
        try {
            opts.doc = io::read_json_file(in_path);
            opts.source = in_path;
        } catch (const io::InputError& e) {
            std::cerr << "input error: " << e.what() << '\n';
            return cli::kInputError;
        }
    } else if (opts.task != "solve") {
        std::cerr << "error: --in is required for task " << opts.task << '\n';
        return cli::kInputError;
    }

    return cli::run(opts, std::cout, std::cerr);
}
