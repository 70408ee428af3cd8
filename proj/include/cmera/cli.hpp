// Command-line driver: one reproducible batch job per command, fed by a
// validated configuration (defaults, config file, then flag overrides).
// Every artifact is deterministic -- identical configuration yields
// byte-identical files, with run metadata kept out of the data files in a
// separate manifest.
#pragma once

#include <string>
#include <vector>

namespace cmera {

// Full configuration of a run.  Momentum values are in units of lambda,
// separations in units of 1/lambda (i.e. tables are parameterized by
// lambda*x), so the defaults describe every cutoff choice equally well.
struct run_config {
    double lambda = 1.0;        // UV cutoff
    int precision_digits = 16;  // 17..50 switches evaluation to extended precision
                                // where supported (profile tables)

    // quadrature budget for correlator integrals
    double quad_kmax_mult = 40.0;  // integration upper limit, units of lambda
    double quad_tol = 1e-10;       // absolute panel tolerance

    // real-space grid (values of lambda*x, log-spaced)
    double x_min = 0.2;
    double x_max = 12.0;
    int x_count = 49;

    // momentum grid (units of lambda, log-spaced)
    double k_min = 1e-3;
    double k_max = 50.0;
    int k_count = 400;

    // long-distance fit windows (values of lambda*x) for conformal data
    double fit_lo = 20.0;
    double fit_hi = 100.0;
    int fit_count = 7;
    double vertex_fit_lo = 20.0;
    double vertex_fit_hi = 200.0;
    int vertex_fit_count = 6;

    double ir_cutoff = 1e-4;  // vertex regulator k_IR, units of lambda
    double s_ir = -3.0;       // flow depth for the flow command

    // tolerances the conformal-data and check reports grade against
    double tol_delta = 0.01;
    double tol_ope = 0.01;
    double tol_central_charge = 0.02;
    double tol_vertex = 0.02;
    double tol_vertex_shift = 0.005;
    double tol_spin = 0.01;

    std::string variant = "analytic";  // constraint profile: analytic | sharp
    std::string output_dir = "out";
    std::string format = "csv";  // table format: csv | json
};

// Checks every field and returns one message per violation (empty = valid);
// nothing is computed until the whole configuration is clean.
std::vector<std::string> validate(const run_config& cfg);

// The driver behind the cmera executable.  Commands: profile | kernel |
// correlators | conformal-data | generators | flow.  Exit codes: 0 success,
// 2 configuration error, 3 numerical-tolerance failure, 4 internal error.
int run_cli(int argc, const char* const* argv);

}  // namespace cmera
