#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hcv/pipeline.hpp"

namespace py = pybind11;

namespace {

py::array_t<double> field_array(const hcv::ScalarField& f) {
    py::array_t<double> a({f.grid.Nr + 1, f.grid.Nt});
    std::copy(f.a.begin(), f.a.end(), a.mutable_data());
    return a;
}

hcv::SourceData make_sources(double S, double beta,
                             const std::vector<std::pair<double, double>>& vortices) {
    hcv::PhysicalParams p{S, beta};
    p.validate();
    hcv::VortexConfig vc{vortices};
    vc.validate(p);
    return hcv::SourceData(p, vc, hcv::CutoffSpec::defaults_for(vc, p));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "charge-N self-dual vortex fields on the hyperbolic caloron strip";

    m.def(
        "run",
        [](std::optional<int> charge, std::vector<std::pair<double, double>> vortices,
           double S, double beta, int nr, int nt, double rmax, double tol, int threads,
           std::string out, bool dump_fields, bool return_fields) {
            hcv::RunConfig cfg;
            cfg.params = {S, beta};
            cfg.charge = charge;
            cfg.vortices = std::move(vortices);
            cfg.Nr = nr;
            cfg.Nt = nt;
            cfg.rmax = rmax;
            cfg.solver.tol = tol;
            cfg.solver.threads = threads;
            cfg.out_dir = std::move(out);
            cfg.dump_fields = dump_fields;
            const hcv::RunResult res = hcv::run(cfg);

            py::dict d;
            d["flux"] = res.flux_value;
            d["charge"] = res.charge_estimate;
            d["action_density"] = res.action_density;
            d["action_flux"] = res.action_flux;
            d["residual_sd1"] = res.residuals.r1;
            d["residual_sd2"] = res.residuals.r2;
            d["energy_identity"] = res.residuals.energy_identity;
            d["windings"] = res.winding;
            d["converged"] = res.solve_report.converged;
            d["iterations"] = res.solve_report.iterations;
            d["exit_code"] = res.exit_code;
            d["summary"] = hcv::summary_line(res);
            d["report"] = hcv::report_json(cfg, res);
            if (return_fields) {
                d["v"] = field_array(res.v);
                d["u"] = field_array(res.u);
                d["phi2"] = field_array(res.phi2);
                d["F_tr"] = field_array(res.gauge.F_tr);
                std::vector<double> rn(res.setup.grid.Nr + 1), tn(res.setup.grid.Nt);
                for (int i = 0; i <= res.setup.grid.Nr; ++i) rn[i] = res.setup.grid.r(i);
                for (int k = 0; k < res.setup.grid.Nt; ++k) tn[k] = res.setup.grid.t(k);
                d["r"] = py::array_t<double>(py::ssize_t(rn.size()), rn.data());
                d["t"] = py::array_t<double>(py::ssize_t(tn.size()), tn.data());
            }
            return d;
        },
        py::arg("charge") = py::none(),
        py::arg("vortices") = std::vector<std::pair<double, double>>{}, py::arg("S") = 2.0,
        py::arg("beta") = 2.0, py::arg("nr") = 1024, py::arg("nt") = 256,
        py::arg("rmax") = 0.0, py::arg("tol") = 1e-10, py::arg("threads") = 1,
        py::arg("out") = std::string(), py::arg("dump_fields") = true,
        py::arg("return_fields") = false,
        "Solve one configuration and return the observable/diagnostic summary.");

    m.def(
        "g_integral",
        [](std::vector<std::pair<double, double>> vortices, double S, double beta,
           double r_upper) {
            const hcv::SourceData src = make_sources(S, beta, vortices);
            if (r_upper <= 0.0) r_upper = 2.0 * src.cutoff().r_hi + 3.0 * S;
            return src.g_integral(r_upper);
        },
        py::arg("vortices"), py::arg("S") = 2.0, py::arg("beta") = 2.0,
        py::arg("r_upper") = 0.0,
        "Panel quadrature of the compensating source over the strip (= 4 pi N).");

    m.def(
        "expu0",
        [](double r, double t, std::vector<std::pair<double, double>> vortices, double S,
           double beta) { return make_sources(S, beta, vortices).eval_expu0(r, t); },
        py::arg("r"), py::arg("t"), py::arg("vortices"), py::arg("S") = 2.0,
        py::arg("beta") = 2.0,
        "Regularized background e^{u0}; exactly 0 at a vortex point, 1 outside the cutoff.");

    py::register_exception<hcv::ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<hcv::SolverError>(m, "SolverError", PyExc_RuntimeError);
    py::register_exception<hcv::DiagnosticError>(m, "DiagnosticError", PyExc_RuntimeError);
}
