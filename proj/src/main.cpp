#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hcv/errors.hpp"
#include "hcv/pipeline.hpp"

namespace {

// "r,t;r,t;..." with multiplicity by repetition
std::vector<std::pair<double, double>> parse_vortices(const std::string& s) {
    std::vector<std::pair<double, double>> pts;
    std::size_t pos = 0;
    while (pos < s.size()) {
        std::size_t semi = s.find(';', pos);
        if (semi == std::string::npos) semi = s.size();
        const std::string item = s.substr(pos, semi - pos);
        const std::size_t comma = item.find(',');
        if (comma == std::string::npos)
            throw hcv::ValidationError("--vortices: expected r,t pairs separated by ';'");
        try {
            std::size_t n1 = 0, n2 = 0;
            const double r = std::stod(item.substr(0, comma), &n1);
            const double t = std::stod(item.substr(comma + 1), &n2);
            if (n1 != comma || n2 != item.size() - comma - 1)
                throw hcv::ValidationError("--vortices: trailing characters in '" + item + "'");
            pts.emplace_back(r, t);
        } catch (const std::logic_error&) {
            throw hcv::ValidationError("--vortices: cannot parse '" + item + "'");
        }
        pos = semi + 1;
    }
    if (pts.empty()) throw hcv::ValidationError("--vortices: empty list");
    return pts;
}

void error_record(const char* kind, const std::string& what) {
    // one machine-readable line on stderr; keep stdout clean for the summary
    std::string msg;
    for (char c : what) {
        if (c == '"' || c == '\\') msg += '\\';
        if (c == '\n') {
            msg += "\\n";
            continue;
        }
        msg += c;
    }
    std::fprintf(stderr, "{\"error\":\"%s\",\"message\":\"%s\"}\n", kind, msg.c_str());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Self-dual vortex fields on the hyperbolic caloron strip"};
    app.get_formatter()->column_width(28);

    hcv::RunConfig cfg;
    int charge = -1;
    std::string vortices, dump = "fields";
    bool serial = false;

    app.set_config("--config", "", "line-oriented key = value file; flags override");
    app.add_option("--S", cfg.params.S, "curvature scale of H^3")->capture_default_str();
    app.add_option("--beta", cfg.params.beta, "temporal period")->capture_default_str();
    auto* oc = app.add_option("--charge", charge, "N evenly placed simple vortices (0 = vacuum)");
    auto* ov = app.add_option("--vortices", vortices,
                              "explicit list \"r,t;r,t;...\" (repeat a point for multiplicity)");
    oc->excludes(ov);
    app.add_option("--nr", cfg.Nr, "radial intervals")->capture_default_str();
    app.add_option("--nt", cfg.Nt, "temporal intervals")->capture_default_str();
    app.add_option("--rmax", cfg.rmax, "truncation radius (default 2 r_hi + 3 S)");
    app.add_option("--tol", cfg.solver.tol, "nonlinear residual tolerance")
        ->capture_default_str();
    app.add_option("--out", cfg.out_dir, "output directory (unset: print summary only)");
    app.add_option("--dump", dump, "fields|none")->check(CLI::IsMember({"fields", "none"}))
        ->capture_default_str();
    app.add_option("--threads", cfg.solver.threads, "worker threads")->capture_default_str();
    app.add_flag("--serial", serial, "reference mode, forces --threads 1");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        if (code == 0) return 0;  // --help / --version
        error_record("ValidationError", e.what());
        return 2;
    }

    try {
        if (oc->count() > 0) cfg.charge = charge;
        if (!vortices.empty()) cfg.vortices = parse_vortices(vortices);
        cfg.dump_fields = dump == "fields";
        if (serial) cfg.solver.threads = 1;

        const hcv::RunResult res = hcv::run(cfg);
        std::cout << hcv::summary_line(res) << "\n";
        if (res.exit_code != 0) error_record("DiagnosticError", res.failure);
        return res.exit_code;
    } catch (const hcv::ValidationError& e) {
        error_record("ValidationError", e.what());
        return 2;
    } catch (const hcv::SolverError& e) {
        error_record("SolverError", e.what());
        return 3;
    } catch (const hcv::DiagnosticError& e) {
        error_record("DiagnosticError", e.what());
        return 4;
    } catch (const std::exception& e) {
        error_record("InternalError", e.what());
        return 1;
    }
}
