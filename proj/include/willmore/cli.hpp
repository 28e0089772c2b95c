#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace willmore::cli {

enum ExitCode { ok = 0, config_error = 2, numerical_failure = 3, infeasible = 4 };

struct RunConfig {
    std::string command;
    std::string fixture = "round_sphere";
    std::map<std::string, double> params;
    int n_t = 128;
    int n_theta = 128;
    std::vector<double> family{0.2, 0.1, 0.05};
    double annulus_lo = 1.5;  // neck annulus [lo T, hi T]
    double annulus_hi = 2.0;
    double tau_group = 1e-9;
    double tau_null = 1e-6;
    double certificate_tol = 1e-6;
    double lambda = 0.0;  // <= 0: total area of the range
    int J = 1;
    std::string out_dir = ".";
};

// Throws willmore::Error(config) on malformed input.
RunConfig parse_config(const std::string& text, const std::string& command);

// Entry point behind the executable; returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Individual commands write their files into cfg.out_dir and return the JSON text.
std::string cmd_energy(const RunConfig& cfg);
std::string cmd_neck_report(const RunConfig& cfg);
std::string cmd_index_bound(const RunConfig& cfg);

}  // namespace willmore::cli
