#include "resolab/harness.hpp"
#include "resolab/potential.hpp"
#include "resolab/zeros.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

int run(const std::string& cmd, const std::string& config, const std::string& out, double R, double eps, double p,
        double Q)
{
    using namespace resolab;
    if (cmd == "bound" && config.empty()) {
        std::cout << cmd_bound(R, eps, p, Q);
        return 0;
    }
    SweepConfig cfg = load_config(config);
    if (!out.empty()) cfg.out_dir = out;

    std::vector<std::string> written;
    if (cmd == "forward") {
        written = cmd_forward(cfg);
    } else if (cmd == "zeros") {
        written = cmd_zeros(cfg);
    } else if (cmd == "kernels") {
        written = cmd_kernels(cfg);
    } else if (cmd == "reconstruct") {
        written = cmd_reconstruct(cfg);
    } else if (cmd == "sweep") {
        written = cmd_sweep(cfg);
    } else {
        const double q = cfg.q_budget > 0.0 ? cfg.q_budget : l1_norm(load_potential(cfg.potential_ref));
        const std::vector<double> eps_list = cfg.eps_list.empty() ? std::vector<double>{0.0} : cfg.eps_list;
        for (double r : cfg.R_list)
            for (double e : eps_list) std::cout << cmd_bound(r, e, cfg.p, q) << '\n';
    }
    for (const auto& w : written) std::cout << w << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"resolab: resonances, Jost functions and stability of inverse resonance problems"};
    app.require_subcommand(1, 1);

    std::string config, out;
    double R = 120.0, eps = 0.0, p = 2.0, Q = 1.0;
    const std::vector<std::pair<std::string, std::string>> subs = {
        {"forward", "compute the zero set of the true potential in the largest disc"},
        {"zeros", "write restricted and perturbed zero sets for every (R, eps)"},
        {"kernels", "write the transformation kernel K and its inverse kernel L"},
        {"reconstruct", "reconstruct the tail integral from a zero file"},
        {"sweep", "stability sweep over (R, eps)"},
        {"bound", "print envelope values"},
    };
    for (const auto& [name, help] : subs) {
        CLI::App* sc = app.add_subcommand(name, help);
        if (name == "bound") {
            sc->add_option("--config", config, "configuration file")->check(CLI::ExistingFile);
            sc->add_option("--R", R, "disc radius");
            sc->add_option("--eps", eps, "perturbation level");
            sc->add_option("--p", p, "Lp exponent");
            sc->add_option("--Q", Q, "L1 budget");
        } else {
            sc->add_option("--config", config, "configuration file")->required();
        }
        sc->add_option("--out", out, "output directory (overrides out_dir)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    const std::string cmd = app.get_subcommands().front()->get_name();
    try {
        return run(cmd, config, out, R, eps, p, Q);
    } catch (const resolab::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const resolab::PreconditionError& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return 2;
    } catch (const resolab::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
