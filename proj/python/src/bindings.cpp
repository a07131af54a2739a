#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "clusterperf/approx_init.hpp"
#include "clusterperf/des.hpp"
#include "clusterperf/exact_oracle.hpp"
#include "clusterperf/experiment.hpp"
#include "clusterperf/iterative_solver.hpp"
#include "clusterperf/model.hpp"

namespace py = pybind11;
namespace cp = clusterperf;

namespace {

// Field layout for Python: [plane, i - min_operative(plane), j].
py::array_t<double> to_array(const cp::ProbabilityField& f) {
    const auto& space = f.space();
    const auto S = static_cast<py::ssize_t>(space.servers());
    const auto W = static_cast<py::ssize_t>(space.capacity() + 1);
    py::array_t<double> out({py::ssize_t{2}, S, W});
    auto view = out.mutable_unchecked<3>();
    for (cp::Plane n : {cp::Plane::HeadDown, cp::Plane::HeadUp}) {
        const auto lo = cp::StateSpace::min_operative(n);
        for (int i = lo; i <= space.max_operative(n); ++i) {
            for (int j = 0; j <= space.capacity(); ++j) {
                view(static_cast<py::ssize_t>(n), i - lo, j) = f[cp::StateIndex{n, i, j}];
            }
        }
    }
    return out;
}

cp::ProbabilityField from_array(const py::array_t<double, py::array::c_style | py::array::forcecast>& a,
                                const cp::SystemParams& p) {
    const cp::StateSpace space(p);
    if (a.ndim() != 3 || a.shape(0) != 2 || a.shape(1) != p.servers || a.shape(2) != p.capacity + 1) {
        throw py::value_error("field must have shape (2, S, L+1)");
    }
    auto view = a.unchecked<3>();
    cp::ProbabilityField f(space);
    for (cp::Plane n : {cp::Plane::HeadDown, cp::Plane::HeadUp}) {
        const auto lo = cp::StateSpace::min_operative(n);
        for (int i = lo; i <= space.max_operative(n); ++i) {
            for (int j = 0; j <= space.capacity(); ++j) {
                f[cp::StateIndex{n, i, j}] = view(static_cast<py::ssize_t>(n), i - lo, j);
            }
        }
    }
    return f;
}

py::dict estimate(const cp::Estimate& e) {
    py::dict d;
    d["mean"] = e.mean;
    d["half_width"] = e.half_width;
    return d;
}

py::dict row_dict(const cp::SweepRow& r) {
    py::dict d;
    d["method"] = std::string(cp::to_string(r.method));
    d["params"] = r.params;
    d["metrics"] = r.metrics;
    d["wall_ms"] = r.wall_ms;
    d["iterations"] = r.iterations;
    d["converged"] = r.converged;
    d["residual"] = r.residual;
    d["ci_mql"] = r.ci_mql;
    d["ci_thrp"] = r.ci_thrp;
    d["ci_mrt"] = r.ci_mrt;
    d["error"] = r.failure == cp::FailureKind::None ? py::none() : py::cast(r.error);
    return d;
}

}  // namespace

PYBIND11_MODULE(_clusterperf, m) {
    m.doc() = "Performability engine for head-node / computing-node clusters.";

    py::register_exception<cp::ParameterError>(m, "ParameterError", PyExc_ValueError);
    py::register_exception<cp::OracleCapExceeded>(m, "OracleCapExceeded", PyExc_MemoryError);
    py::register_exception<cp::SolverError>(m, "SolverError", PyExc_ArithmeticError);

    py::enum_<cp::FailureSemantics>(m, "FailureSemantics")
        .value("PAPER_LITERAL", cp::FailureSemantics::PaperLiteral)
        .value("PER_COMPUTING_NODE", cp::FailureSemantics::PerComputingNode);

    py::class_<cp::SystemParams>(m, "SystemParams")
        .def(py::init([](int S, int L, double lambda_, double mu, std::optional<double> mu_h, double xi, double xi_h,
                         double eta, double eta_h, cp::FailureSemantics semantics) {
                 cp::SystemParams p;
                 p.servers = S;
                 p.capacity = L;
                 p.lambda = lambda_;
                 p.mu = mu;
                 p.mu_h = mu_h.value_or(mu);
                 p.xi = xi;
                 p.xi_h = xi_h;
                 p.eta = eta;
                 p.eta_h = eta_h;
                 p.semantics = semantics;
                 return cp::validate_params(p);
             }),
             py::kw_only(), py::arg("S"), py::arg("L"), py::arg("lambda_"), py::arg("mu"),
             py::arg("mu_h") = py::none(), py::arg("xi"), py::arg("xi_h"), py::arg("eta"), py::arg("eta_h"),
             py::arg("semantics") = cp::FailureSemantics::PaperLiteral)
        .def_readwrite("S", &cp::SystemParams::servers)
        .def_readwrite("L", &cp::SystemParams::capacity)
        .def_readwrite("lambda_", &cp::SystemParams::lambda)
        .def_readwrite("mu", &cp::SystemParams::mu)
        .def_readwrite("mu_h", &cp::SystemParams::mu_h)
        .def_readwrite("xi", &cp::SystemParams::xi)
        .def_readwrite("xi_h", &cp::SystemParams::xi_h)
        .def_readwrite("eta", &cp::SystemParams::eta)
        .def_readwrite("eta_h", &cp::SystemParams::eta_h)
        .def_readwrite("semantics", &cp::SystemParams::semantics)
        .def("validate", &cp::validate_params)
        .def("__repr__", [](const cp::SystemParams& p) {
            return "SystemParams(S=" + std::to_string(p.servers) + ", L=" + std::to_string(p.capacity) +
                   ", lambda_=" + std::to_string(p.lambda) + ")";
        });

    py::class_<cp::SolverConfig>(m, "SolverConfig")
        .def(py::init([](double delta, std::int64_t max_iterations, double residual_target) {
                 return cp::SolverConfig{delta, max_iterations, residual_target};
             }),
             py::kw_only(), py::arg("delta") = 0.001, py::arg("max_iterations") = std::int64_t{1} << 18,
             py::arg("residual_target") = 0.0)
        .def_readwrite("delta", &cp::SolverConfig::delta)
        .def_readwrite("max_iterations", &cp::SolverConfig::max_iterations)
        .def_readwrite("residual_target", &cp::SolverConfig::residual_target);

    py::class_<cp::SimConfig>(m, "SimConfig")
        .def(py::init([](std::uint64_t seed, double horizon, double warmup, int replications, double confidence) {
                 cp::SimConfig c;
                 c.seed = seed;
                 c.horizon = horizon;
                 c.warmup = warmup;
                 c.replications = replications;
                 c.confidence = confidence;
                 return cp::validate_sim_config(c);
             }),
             py::kw_only(), py::arg("seed") = 1, py::arg("horizon") = 1e5, py::arg("warmup") = -1.0,
             py::arg("replications") = 10, py::arg("confidence") = 0.95)
        .def_readwrite("seed", &cp::SimConfig::seed)
        .def_readwrite("horizon", &cp::SimConfig::horizon)
        .def_readwrite("warmup", &cp::SimConfig::warmup)
        .def_readwrite("replications", &cp::SimConfig::replications)
        .def_readwrite("confidence", &cp::SimConfig::confidence);

    py::class_<cp::Metrics>(m, "Metrics")
        .def_readonly("mql", &cp::Metrics::mql)
        .def_readonly("thrp", &cp::Metrics::thrp)
        .def_readonly("mrt", &cp::Metrics::mrt)
        .def_readonly("availability", &cp::Metrics::availability)
        .def_readonly("p_block", &cp::Metrics::p_block)
        .def("__repr__", [](const cp::Metrics& x) {
            return "Metrics(mql=" + std::to_string(x.mql) + ", thrp=" + std::to_string(x.thrp) + ")";
        });

    m.def(
        "transitions",
        [](const cp::SystemParams& p, int plane, int i, int j) {
            std::vector<py::tuple> out;
            for (const auto& t : cp::transitions_from({static_cast<cp::Plane>(plane), i, j}, p)) {
                out.push_back(py::make_tuple(static_cast<int>(t.to.plane), t.to.operative, t.to.tasks, t.rate));
            }
            return out;
        },
        py::arg("params"), py::arg("plane"), py::arg("i"), py::arg("j"),
        "Outgoing (plane, i, j, rate) transitions of state (plane, i, j).");

    m.def(
        "metrics",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& field, const cp::SystemParams& p) {
            return cp::metrics_from(from_array(field, p), p);
        },
        py::arg("field"), py::arg("params"));

    m.def(
        "initial_field", [](const cp::SystemParams& p) { return to_array(cp::initial_field(p)); }, py::arg("params"));

    m.def(
        "solve",
        [](const cp::SystemParams& p, const cp::SolverConfig& cfg) {
            cp::SolveResult r = [&] {
                py::gil_scoped_release release;
                return cp::solve(cp::validate_params(p), cfg);
            }();
            py::dict report;
            report["iterations"] = r.report.iterations;
            report["converged"] = r.report.converged;
            report["final_mql_delta"] = r.report.final_mql_delta;
            report["residual"] = r.report.final_residual;
            report["wall_time"] = r.report.wall_time.count();
            return py::make_tuple(to_array(r.field), r.metrics, report);
        },
        py::arg("params"), py::arg("config") = cp::SolverConfig{},
        "Iterative solve. Returns (field, metrics, report); field has shape (2, S, L+1).");

    m.def(
        "exact",
        [](const cp::SystemParams& p, std::size_t max_states) {
            cp::OracleLimits limits;
            limits.max_states = max_states;
            cp::ProbabilityField pi = [&] {
                py::gil_scoped_release release;
                return cp::stationary(cp::build_generator(cp::validate_params(p), limits), limits);
            }();
            return py::make_tuple(to_array(pi), cp::metrics_from(pi, p));
        },
        py::arg("params"), py::arg("max_states") = cp::OracleLimits{}.max_states,
        "Direct elimination solve. Returns (field, metrics).");

    m.def(
        "simulate",
        [](const cp::SystemParams& p, const cp::SimConfig& cfg) {
            cp::SimResult r = [&] {
                py::gil_scoped_release release;
                return cp::simulate(p, cfg);
            }();
            py::dict d;
            d["mql"] = estimate(r.mql);
            d["thrp"] = estimate(r.thrp);
            d["mrt"] = r.mrt ? py::object(estimate(*r.mrt)) : py::none();
            d["availability"] = estimate(r.availability);
            d["p_block"] = estimate(r.p_block);
            d["events"] = r.events;
            d["wall_time"] = r.wall_time.count();
            return d;
        },
        py::arg("params"), py::arg("config") = cp::SimConfig{});

    m.def(
        "compare",
        [](const cp::SystemParams& p, const std::vector<std::string>& methods, const cp::SolverConfig& solver,
           const cp::SimConfig& sim, double threshold) {
            std::vector<cp::Method> parsed;
            for (const auto& name : methods) {
                parsed.push_back(cp::parse_method(name));
            }
            cp::MethodConfigs cfg;
            cfg.solver = solver;
            cfg.sim = sim;
            cp::ComparisonReport r = [&] {
                py::gil_scoped_release release;
                return cp::compare(p, parsed, cfg, threshold);
            }();
            py::list rows;
            for (const auto& row : r.rows) {
                rows.append(row_dict(row));
            }
            py::list disc;
            for (const auto& d : r.discrepancies) {
                py::dict x;
                x["method_a"] = std::string(cp::to_string(d.a));
                x["method_b"] = std::string(cp::to_string(d.b));
                x["metric"] = d.metric;
                x["value_a"] = d.value_a;
                x["value_b"] = d.value_b;
                x["relative"] = d.relative;
                x["pass"] = d.pass;
                disc.append(x);
            }
            py::dict out;
            out["rows"] = rows;
            out["discrepancies"] = disc;
            out["all_pass"] = r.all_pass();
            return out;
        },
        py::arg("params"), py::arg("methods") = std::vector<std::string>{"iterative", "exact"},
        py::arg("solver") = cp::SolverConfig{}, py::arg("sim") = cp::SimConfig{}, py::arg("threshold") = 0.05);
}
