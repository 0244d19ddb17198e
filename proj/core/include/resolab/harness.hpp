#pragma once

#include "resolab/potential.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace resolab {

struct SweepConfig {
    std::string potential_ref;
    std::optional<std::string> potential_true;
    std::vector<double> R_list;
    std::vector<double> eps_list;
    double p = 2.0;
    double h = 1.0 / 64.0;
    std::uint64_t seed = 1;
    std::string out_dir = ".";
    double tol = 1e-10;
    bool refine = false;
    std::optional<std::string> zeros_file;
    double q_budget = 0.0;
};

// Line-oriented `key = value`; '#' starts a comment; lists are comma-separated.
// Relative paths are resolved against base_dir.
SweepConfig parse_config(const std::string& text, const std::string& base_dir = ".");
SweepConfig load_config(const std::string& path);

struct StabilityRow {
    double R = 0.0;
    double eps = 0.0;
    double empirical_sup_error = 0.0;
    double envelope = 0.0;
    double fitted_C = 0.0;
    std::string status = "ok";
};

struct StabilityReport {
    SweepConfig config;
    std::vector<StabilityRow> rows;
    double fit_residual = 0.0;
    double fit_relative_residual = 0.0;
};

std::string format_stability_report(const StabilityReport& report);

// Each command writes into cfg.out_dir and returns the paths written.
std::vector<std::string> cmd_forward(const SweepConfig& cfg);
std::vector<std::string> cmd_zeros(const SweepConfig& cfg);
std::vector<std::string> cmd_kernels(const SweepConfig& cfg);
std::vector<std::string> cmd_reconstruct(const SweepConfig& cfg);
StabilityReport run_sweep(const SweepConfig& cfg);
std::vector<std::string> cmd_sweep(const SweepConfig& cfg);
// Envelope values as text, one line per quantity.
std::string cmd_bound(double R, double eps, double p, double Q = 1.0);

} // namespace resolab
