#include "resolab/harness.hpp"

#include "resolab/bounds.hpp"
#include "resolab/jost.hpp"
#include "resolab/kernels.hpp"
#include "resolab/reconstruction.hpp"
#include "resolab/zeros.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

namespace fs = std::filesystem;

namespace resolab {

namespace {

std::string trim(const std::string& s)
{
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_real(const std::string& key, const std::string& v)
{
    try {
        size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: " + key + " expects a number, got '" + v + "'");
    }
}

std::vector<double> parse_list(const std::string& key, const std::string& v)
{
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        out.push_back(parse_real(key, item));
    }
    return out;
}

bool parse_bool(const std::string& key, const std::string& v)
{
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("config: " + key + " expects true/false, got '" + v + "'");
}

std::string resolve(const std::string& base, const std::string& p)
{
    const fs::path path(p);
    if (path.is_absolute() || base.empty()) return path.string();
    return (fs::path(base) / path).lexically_normal().string();
}

std::string fmt_num(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

std::string fmt_full(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string out_path(const SweepConfig& cfg, const std::string& name)
{
    fs::create_directories(cfg.out_dir);
    return (fs::path(cfg.out_dir) / name).string();
}

void write_text(const std::string& path, const std::string& text)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot write " + path);
    f << text;
}

Potential true_or_ref(const SweepConfig& cfg)
{
    return load_potential(cfg.potential_true ? *cfg.potential_true : cfg.potential_ref);
}

double max_R(const SweepConfig& cfg)
{
    if (cfg.R_list.empty()) throw ConfigError("config: R_list is empty");
    return cfg.R_list.back();
}

ZeroSet restrict_disc(const ZeroSet& zs, double R)
{
    ZeroSet out = zs;
    out.R = R;
    out.zeros.clear();
    for (const auto& z : zs.zeros)
        if (std::abs(z.z - zs.center) < R) out.zeros.push_back(z);
    return out;
}

ZeroSet zeros_at_max_R(const SweepConfig& cfg, const Potential& q)
{
    return find_zeros(ForwardJost(q), max_R(cfg), cfg.tol);
}

ZeroSet load_or_compute_zeros(const SweepConfig& cfg)
{
    if (cfg.zeros_file) return load_zeroset(*cfg.zeros_file);
    return zeros_at_max_R(cfg, true_or_ref(cfg));
}

ReconstructionOptions recon_options(const SweepConfig& cfg, const std::optional<Potential>& q_true)
{
    ReconstructionOptions opt;
    opt.refine = cfg.refine;
    opt.q_budget = cfg.q_budget;
    opt.q_true = q_true;
    return opt;
}

ReconstructionResult reconstruct_cell(const SweepConfig& cfg, const ZeroSet& zs_max, const Potential& q_ref,
                                      const std::optional<Potential>& q_true, double R, double eps)
{
    ZeroSet zs = restrict_disc(zs_max, R);
    if (eps > 0.0) zs = perturb_zeros(zs, eps, cfg.seed);
    zs.eps = eps;
    return reconstruct_from_zeros(zs, q_ref, cfg.p, cfg.h, recon_options(cfg, q_true));
}

std::string cell_name(const char* stem, double R, double eps, const char* ext)
{
    return std::string(stem) + "_R" + fmt_num(R) + "_eps" + fmt_num(eps) + ext;
}

} // namespace

SweepConfig parse_config(const std::string& text, const std::string& base_dir)
{
    SweepConfig cfg;
    bool have_ref = false;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string v = trim(line.substr(eq + 1));
        if (key == "potential_ref") {
            cfg.potential_ref = resolve(base_dir, v);
            have_ref = true;
        } else if (key == "potential_true") {
            if (!v.empty()) cfg.potential_true = resolve(base_dir, v);
        } else if (key == "R_list") {
            cfg.R_list = parse_list(key, v);
        } else if (key == "eps_list") {
            cfg.eps_list = parse_list(key, v);
        } else if (key == "p") {
            cfg.p = parse_real(key, v);
        } else if (key == "h") {
            cfg.h = parse_real(key, v);
        } else if (key == "seed") {
            const double s = parse_real(key, v);
            if (s < 0 || s != std::floor(s)) throw ConfigError("config: seed must be a nonnegative integer");
            cfg.seed = static_cast<std::uint64_t>(s);
        } else if (key == "out_dir") {
            cfg.out_dir = resolve(base_dir, v);
        } else if (key == "tol") {
            cfg.tol = parse_real(key, v);
        } else if (key == "refine") {
            cfg.refine = parse_bool(key, v);
        } else if (key == "zeros_file") {
            if (!v.empty()) cfg.zeros_file = resolve(base_dir, v);
        } else if (key == "q_budget") {
            cfg.q_budget = parse_real(key, v);
        } else {
            throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        }
    }
    if (!have_ref) throw ConfigError("config: potential_ref is required");
    if (!std::is_sorted(cfg.R_list.begin(), cfg.R_list.end()))
        throw ConfigError("config: R_list must be ascending");
    for (double e : cfg.eps_list)
        if (!(e >= 0.0 && e < 0.75)) throw ConfigError("config: eps values must lie in [0, 0.75)");
    if (!(cfg.p > 1.0 && cfg.p <= 2.0)) throw ConfigError("config: p must lie in (1, 2]");
    try {
        mesh_size(cfg.h);
    } catch (const PreconditionError& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return cfg;
}

SweepConfig load_config(const std::string& path)
{
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot read config " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str(), fs::path(path).parent_path().string());
}

std::string format_stability_report(const StabilityReport& report)
{
    const auto& c = report.config;
    std::ostringstream os;
    os << "# stability_report potential_ref=" << c.potential_ref
       << " potential_true=" << (c.potential_true ? *c.potential_true : std::string("none")) << " p=" << fmt_full(c.p)
       << " h=" << fmt_full(c.h) << " seed=" << c.seed << " refine=" << (c.refine ? 1 : 0)
       << " fit_residual=" << fmt_full(report.fit_residual)
       << " fit_relative_residual=" << fmt_full(report.fit_relative_residual) << '\n';
    os << "R,eps,empirical_sup_error,envelope,fitted_C,status\n";
    for (const auto& r : report.rows) {
        os << fmt_full(r.R) << ',' << fmt_full(r.eps) << ',' << fmt_full(r.empirical_sup_error) << ','
           << fmt_full(r.envelope) << ',' << fmt_full(r.fitted_C) << ',' << r.status << '\n';
    }
    return os.str();
}

std::vector<std::string> cmd_forward(const SweepConfig& cfg)
{
    const ZeroSet zs = zeros_at_max_R(cfg, true_or_ref(cfg));
    const std::string path = out_path(cfg, "zeros.txt");
    save_zeroset(zs, path);
    return {path};
}

std::vector<std::string> cmd_zeros(const SweepConfig& cfg)
{
    const ZeroSet zs_max = load_or_compute_zeros(cfg);
    std::vector<std::string> written;
    const std::vector<double> eps = cfg.eps_list.empty() ? std::vector<double>{0.0} : cfg.eps_list;
    for (double R : cfg.R_list) {
        for (double e : eps) {
            ZeroSet zs = restrict_disc(zs_max, R);
            if (e > 0.0) zs = perturb_zeros(zs, e, cfg.seed);
            zs.eps = e;
            const std::string path = out_path(cfg, cell_name("zeros", R, e, ".txt"));
            save_zeroset(zs, path);
            written.push_back(path);
        }
    }
    return written;
}

std::vector<std::string> cmd_kernels(const SweepConfig& cfg)
{
    const Potential q_ref = load_potential(cfg.potential_ref);
    const Potential q2 = cfg.potential_true ? load_potential(*cfg.potential_true) : q_ref;
    const Potential q1 = cfg.potential_true ? q_ref : Potential();
    const TriangularKernelGrid K = k_kernel(q1, q2, cfg.h);
    const TriangularKernelGrid L = l_kernel(K);
    const std::string pk = out_path(cfg, "kernel_K.txt"), pl = out_path(cfg, "kernel_L.txt");
    save_kernel_grid(K, pk);
    save_kernel_grid(L, pl);
    return {pk, pl};
}

std::vector<std::string> cmd_reconstruct(const SweepConfig& cfg)
{
    const std::string zpath = cfg.zeros_file ? *cfg.zeros_file : (fs::path(cfg.out_dir) / "zeros.txt").string();
    if (!fs::exists(zpath)) throw ConfigError("zero file not found: " + zpath + " (run `forward` first)");
    const ZeroSet zs = load_zeroset(zpath);
    const Potential q_ref = load_potential(cfg.potential_ref);
    std::optional<Potential> q_true;
    if (cfg.potential_true) q_true = load_potential(*cfg.potential_true);
    const double R = cfg.R_list.empty() ? zs.R : std::min(zs.R, cfg.R_list.back());
    const double eps = cfg.eps_list.empty() ? 0.0 : cfg.eps_list.front();
    const ReconstructionResult r = reconstruct_cell(cfg, zs, q_ref, q_true, R, eps);
    const std::string path = out_path(cfg, cell_name("reconstruction", R, eps, ".csv"));
    save_reconstruction_csv(r, path);
    return {path};
}

StabilityReport run_sweep(const SweepConfig& cfg)
{
    StabilityReport report;
    report.config = cfg;
    if (cfg.R_list.empty() || cfg.eps_list.empty()) return report;
    if (!cfg.potential_true) throw ConfigError("sweep needs potential_true: the empirical error requires a known truth");
    const Potential q_ref = load_potential(cfg.potential_ref);
    const std::optional<Potential> q_true = load_potential(*cfg.potential_true);

    ZeroSet zs_max;
    std::string zeros_failure;
    try {
        zs_max = cfg.zeros_file ? load_zeroset(*cfg.zeros_file) : zeros_at_max_R(cfg, *q_true);
    } catch (const NumericalError& e) {
        zeros_failure = e.what();
    }

    std::vector<double> eps = cfg.eps_list;
    std::sort(eps.begin(), eps.end());
    for (double R : cfg.R_list) {
        for (double e : eps) {
            StabilityRow row;
            row.R = R;
            row.eps = e;
            row.envelope = stability_envelope(R, e, cfg.p);
            if (!zeros_failure.empty()) {
                row.status = "failed: " + zeros_failure;
            } else {
                try {
                    const ReconstructionResult r = reconstruct_cell(cfg, zs_max, q_ref, q_true, R, e);
                    row.empirical_sup_error = r.diagnostics.truth_error;
                    if (r.diagnostics.diverged) row.status = "ok (refinement diverged)";
                } catch (const std::exception& ex) {
                    row.status = std::string("failed: ") + ex.what();
                }
            }
            std::replace(row.status.begin(), row.status.end(), ',', ';');
            std::replace(row.status.begin(), row.status.end(), '\n', ' ');
            report.rows.push_back(row);
        }
    }

    std::vector<std::pair<double, double>> pairs;
    for (const auto& r : report.rows)
        if (r.status.rfind("ok", 0) == 0) pairs.emplace_back(r.envelope, r.empirical_sup_error);
    if (pairs.size() < 3) {
        for (auto& r : report.rows) r.fitted_C = std::numeric_limits<double>::quiet_NaN();
        report.fit_residual = report.fit_relative_residual = std::numeric_limits<double>::quiet_NaN();
    } else {
        const ConstantFit fit = fit_constant(pairs);
        for (auto& r : report.rows) r.fitted_C = fit.C;
        report.fit_residual = fit.residual;
        report.fit_relative_residual = fit.relative_residual;
    }
    return report;
}

std::vector<std::string> cmd_sweep(const SweepConfig& cfg)
{
    const StabilityReport report = run_sweep(cfg);
    const std::string path = out_path(cfg, "stability_report.csv");
    write_text(path, format_stability_report(report));
    return {path};
}

std::string cmd_bound(double R, double eps, double p, double Q)
{
    std::ostringstream os;
    const BoundParams b = BoundParams::make(Q, Q, p, R, eps);
    os << "R = " << fmt_full(R) << "\n";
    os << "eps = " << fmt_full(eps) << "\n";
    os << "p = " << fmt_full(p) << "\n";
    os << "Q = " << fmt_full(Q) << "\n";
    os << "kappa = " << fmt_full(b.kappa) << "\n";
    os << "nu = " << fmt_full(b.nu) << "\n";
    os << "gamma = " << fmt_full(b.gamma) << "\n";
    os << "factorization_envelope = " << fmt_full(factorization_envelope(R)) << "\n";
    os << "stability_term = " << fmt_full(stability_shape(R, p)) << "\n";
    os << "perturbation_term = " << fmt_full(perturbation_shape(R, eps)) << "\n";
    os << "stability_envelope = " << fmt_full(stability_envelope(R, eps, p)) << "\n";
    os << "log_W_bound = " << fmt_full(log_w_bound(R, eps)) << "\n";
    return os.str();
}

} // namespace resolab
