// Command line front end.
//
// Exit codes: 0 success, 1 usage/config/format problems, 2 numeric failures
// (divergence, non-finite values), 3 filesystem problems.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "signet/signet.hpp"

namespace {

void print_or_write(const signet::Json& j, const std::string& out_path) {
    const std::string text = j.dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw signet::IoError("cannot open for writing: " + out_path);
    out << text;
    if (!out) throw signet::IoError("write failed: " + out_path);
}

void report_run(const signet::RunManifest& m) {
    std::cout << m.command << ": seed " << m.seed << ", " << m.outputs.size()
              << " files in " << m.wall_seconds << " s\n";
    if (m.warning) std::cout << "  warning: " << *m.warning << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"signed-network synchronization and weight identification toolkit"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out", out_file, traj_path, graph_path;
    std::uint64_t seed = 1;
    std::uint64_t rep_seed = signet::kBenchmarkSeed;
    int sweep = 1;

    auto* sim = app.add_subcommand("simulate", "run a config file end to end");
    sim->add_option("config", config_path, "TOML run configuration")->required();
    sim->add_option("--out", out_dir, "output directory (default: out)");
    sim->add_option("--sweep", sweep, "run this many seeds in parallel, base seed from config");

    auto* rep = app.add_subcommand("reproduce", "run the built-in 12-node benchmark");
    rep->add_option("--out", out_dir, "output directory (default: out)");
    rep->add_option("--seed", rep_seed, "magnitude/init seed (default: 9)");

    signet::CheckPeOptions pe_opts;
    std::string gram_name = "state";
    auto* pe = app.add_subcommand("check-pe", "windowed excitation analysis of a trajectory");
    pe->add_option("trajectory", traj_path, "trajectory.csv from a run")->required();
    pe->add_option("--delta", pe_opts.delta, "qualifying norm floor (default: 0.1)");
    pe->add_option("--window", pe_opts.window, "window length in seconds (default: 2)");
    pe->add_option("--stride", pe_opts.stride, "window start spacing in samples (default: 100)");
    pe->add_option("--gram", gram_name, "gram form: state or edge (default: state)");
    pe->add_option("--out", out_file, "write the JSON report here instead of stdout");

    auto* eig = app.add_subcommand("eigen", "Laplacian spectrum and gain thresholds of a graph");
    eig->add_option("graph", graph_path, "graph TOML file")->required();
    eig->add_option("--out", out_file, "write the JSON report here instead of stdout");

    int gg_n = 8;
    double gg_density = 0.5, gg_negative = 0.3;
    bool gg_normalized = false;
    std::string gg_out;
    auto* gg = app.add_subcommand("gen-graph", "generate a random signed graph file");
    gg->add_option("--n", gg_n, "node count (default: 8)");
    gg->add_option("--density", gg_density, "edge keep probability (default: 0.5)");
    gg->add_option("--negative-fraction", gg_negative,
                   "probability a kept edge is antagonistic (default: 0.3)");
    gg->add_option("--seed", seed, "generator seed (default: 1)");
    gg->add_flag("--normalized", gg_normalized, "mark and validate |w| <= 1");
    gg->add_option("--out", gg_out, "output graph file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) {
            if (sweep < 1) throw std::invalid_argument("--sweep must be >= 1");
            if (sweep == 1) {
                report_run(signet::cmd_simulate(config_path, out_dir));
            } else {
                for (const auto& m : signet::cmd_sweep(config_path, out_dir, sweep))
                    report_run(m);
            }
        } else if (rep->parsed()) {
            report_run(signet::cmd_reproduce(out_dir, rep_seed));
        } else if (pe->parsed()) {
            if (gram_name == "state") {
                pe_opts.gram = signet::GramForm::state;
            } else if (gram_name == "edge") {
                pe_opts.gram = signet::GramForm::edge;
            } else {
                throw std::invalid_argument("--gram must be state or edge");
            }
            print_or_write(signet::cmd_check_pe(traj_path, pe_opts), out_file);
        } else if (eig->parsed()) {
            print_or_write(signet::cmd_eigen(graph_path), out_file);
        } else if (gg->parsed()) {
            signet::cmd_gen_graph(gg_n, gg_density, gg_negative, seed, gg_normalized, gg_out);
            std::cout << "wrote " << gg_out << "\n";
        }
    } catch (const signet::DivergenceError& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    } catch (const signet::NumericError& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    } catch (const signet::IoError& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 3;
    } catch (const std::filesystem::filesystem_error& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 3;
    } catch (const std::exception& ex) {
        // ParseError, FormatError, GenerationError, invalid_argument, out_of_range.
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 0;
}
