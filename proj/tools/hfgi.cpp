#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hfgi/reconstruct.hpp"
#include "hfgi/verify.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace hfgi;

namespace {

enum Exit { kOk = 0, kThreshold = 1, kConfig = 2, kStage = 3 };

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Tolerances {
    double quadrature = 1e-13;
    double ode = 1e-12;
    double theta = 1e-16;
    double residual = 1e-4;
};

struct RunConfig {
    std::vector<cplx> branch_points;
    int genus = 0;
    int m = 1;
    std::vector<SurfacePoint> mu;
    cplx w0 = 0.2;
    cplx u0 = 1.0;
    int nx = 101, nt = 21;
    double x0 = 0, t0 = 0;
    std::optional<double> x1, t1;
    Tolerances tol;
    std::string out = "hfgi_out";
    bool cache = false;
};

/// Genus-1 demo: a small spectrum whose default 101 x 21 grid resolves the m = 1, 2 fields.
RunConfig demo_config() {
    RunConfig cfg;
    cfg.branch_points = {-0.05, -0.0375, 0.075, 0.0875};
    cfg.genus = 1;
    cfg.mu = {{cplx(0.0125, 0.0375), 1}, {cplx(0.0375, -0.04375), -1}};
    cfg.w0 = 0.2;
    cfg.u0 = cplx(1.0, 0.5);
    return cfg;
}

// ---------------------------------------------------------------- config parsing

cplx parse_complex(const json &j, const std::string &field) {
    if (j.is_number()) return j.get<double>();
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    throw ConfigError(field + ": expected a number or [re, im]");
}

double positive(const json &j, const std::string &field) {
    if (!j.is_number() || !(j.get<double>() > 0)) throw ConfigError(field + ": must be a positive number");
    return j.get<double>();
}

int integer(const json &j, const std::string &field, int lo, int hi) {
    if (!j.is_number_integer() || j.get<int>() < lo || j.get<int>() > hi)
        throw ConfigError(field + ": expected an integer in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return j.get<int>();
}

RunConfig parse_config(const json &j) {
    RunConfig cfg;
    if (!j.is_object()) throw ConfigError("config: expected a JSON object");
    if (!j.contains("branch_points") || !j["branch_points"].is_array())
        throw ConfigError("branch_points: missing or not a list");
    for (std::size_t i = 0; i < j["branch_points"].size(); ++i)
        cfg.branch_points.push_back(parse_complex(j["branch_points"][i], "branch_points[" + std::to_string(i) + "]"));
    const int count = static_cast<int>(cfg.branch_points.size());
    if (count < 4 || count % 2) throw ConfigError("branch_points: need an even count >= 4, got " + std::to_string(count));
    cfg.genus = count / 2 - 1;
    if (j.contains("genus") && integer(j["genus"], "genus", 1, 64) != cfg.genus)
        throw ConfigError("genus: " + std::to_string(j["genus"].get<int>()) + " does not match " + std::to_string(count) +
                          " branch points");
    if (j.contains("m")) cfg.m = integer(j["m"], "m", 0, 3);

    if (!j.contains("divisor") || !j["divisor"].is_object()) throw ConfigError("divisor: missing or not an object");
    const json &d = j["divisor"];
    if (!d.contains("mu") || !d["mu"].is_array()) throw ConfigError("divisor.mu: missing or not a list");
    if (static_cast<int>(d["mu"].size()) != cfg.genus + 1)
        throw ConfigError("divisor.mu: need genus + 1 = " + std::to_string(cfg.genus + 1) + " points, got " +
                          std::to_string(d["mu"].size()));
    for (std::size_t i = 0; i < d["mu"].size(); ++i) {
        const json &p = d["mu"][i];
        const std::string f = "divisor.mu[" + std::to_string(i) + "]";
        if (!p.is_object() || !p.contains("lambda")) throw ConfigError(f + ": expected {\"lambda\": ..., \"sheet\": +-1}");
        const int sheet = p.contains("sheet") ? p["sheet"].get<int>() : 1;
        if (sheet != 1 && sheet != -1) throw ConfigError(f + ".sheet: must be 1 or -1");
        cfg.mu.push_back({parse_complex(p["lambda"], f + ".lambda"), sheet});
    }
    if (d.contains("w0")) cfg.w0 = parse_complex(d["w0"], "divisor.w0");
    if (j.contains("u0")) cfg.u0 = parse_complex(j["u0"], "u0");
    if (cfg.u0 == 0.0) throw ConfigError("u0: must be nonzero");

    if (j.contains("grid")) {
        const json &g = j["grid"];
        if (g.contains("nx")) cfg.nx = integer(g["nx"], "grid.nx", 5, 100000);
        if (g.contains("nt")) cfg.nt = integer(g["nt"], "grid.nt", 3, 100000);
        if (g.contains("x0")) cfg.x0 = g["x0"].get<double>();
        if (g.contains("t0")) cfg.t0 = g["t0"].get<double>();
        if (g.contains("x1")) cfg.x1 = g["x1"].get<double>();
        if (g.contains("t1")) cfg.t1 = g["t1"].get<double>();
        if (cfg.x1 && *cfg.x1 <= cfg.x0) throw ConfigError("grid.x1: must exceed grid.x0");
        if (cfg.t1 && *cfg.t1 <= cfg.t0) throw ConfigError("grid.t1: must exceed grid.t0");
    }
    if (j.contains("tolerances")) {
        const json &t = j["tolerances"];
        if (t.contains("quadrature")) cfg.tol.quadrature = positive(t["quadrature"], "tolerances.quadrature");
        if (t.contains("ode")) cfg.tol.ode = positive(t["ode"], "tolerances.ode");
        if (t.contains("theta")) cfg.tol.theta = positive(t["theta"], "tolerances.theta");
        if (t.contains("residual")) cfg.tol.residual = positive(t["residual"], "tolerances.residual");
    }
    if (j.contains("output")) cfg.out = j["output"].get<std::string>();
    if (j.contains("cache")) cfg.cache = j["cache"].get<bool>();
    return cfg;
}

// ---------------------------------------------------------------- JSON helpers

json cjson(cplx z) { return json::array({z.real(), z.imag()}); }

json vjson(const VectorXc &v) {
    json a = json::array();
    for (int i = 0; i < v.size(); ++i) a.push_back(cjson(v[i]));
    return a;
}

json mjson(const MatrixXc &m) {
    json a = json::array();
    for (int i = 0; i < m.rows(); ++i) a.push_back(vjson(m.row(i).transpose()));
    return a;
}

json config_json(const RunConfig &cfg) {
    json j;
    json bp = json::array();
    for (cplx z : cfg.branch_points) bp.push_back(cjson(z));
    j["branch_points"] = bp;
    j["genus"] = cfg.genus;
    j["m"] = cfg.m;
    json mu = json::array();
    for (const SurfacePoint &p : cfg.mu) mu.push_back({{"lambda", cjson(p.lambda)}, {"sheet", p.sheet}});
    j["divisor"] = {{"mu", mu}, {"w0", cjson(cfg.w0)}};
    j["u0"] = cjson(cfg.u0);
    j["tolerances"] = {{"quadrature", cfg.tol.quadrature},
                       {"ode", cfg.tol.ode},
                       {"theta", cfg.tol.theta},
                       {"residual", cfg.tol.residual}};
    return j;
}

json items_json(const std::vector<CheckItem> &items) {
    json a = json::array();
    for (const CheckItem &it : items) a.push_back({{"name", it.name}, {"pass", it.pass}, {"detail", it.detail}});
    return a;
}

std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}

CheckItem below(std::string name, double value, double limit) {
    return {std::move(name), value < limit, sci(value) + " < " + sci(limit)};
}

// ---------------------------------------------------------------- run state

struct Run {
    RunConfig cfg;
    double tolerance_scale = 1;
    fs::path out;
    json manifest;
    std::vector<CheckItem> checks;

    std::optional<Curve> curve;
    PeriodData pd;
    std::optional<ThetaContext> ctx;
    RiemannConstants K;
    LenardChain lc{4};

    void write_manifest(const std::string &status) {
        manifest["status"] = status;
        manifest["verification"] = {{"passed", all_passed()}, {"checks", items_json(checks)}};
        std::ofstream(out / "manifest.json") << manifest.dump(2) << '\n';
    }

    bool all_passed() const {
        for (const CheckItem &c : checks) {
            if (!c.pass) return false;
        }
        return true;
    }

    std::ofstream open(const std::string &name) const {
        std::ofstream f(out / name);
        if (!f) throw std::runtime_error("cannot write " + (out / name).string());
        return f;
    }
};

// ---------------------------------------------------------------- stages

void stage_derive(Run &run) {
    const int m = run.cfg.m;
    std::ofstream f = run.open("derive_report.txt");
    f << "Lenard members (c, b, a)\n";
    for (int j = -1; j <= std::max(m, 1); ++j) {
        const LenardTriple &L = run.lc.L(j);
        f << "L_" << j << ".c = " << to_string(L.c) << "\nL_" << j << ".b = " << to_string(L.b) << "\nL_" << j
          << ".a = " << to_string(L.a) << "\n";
    }
    f << "\nHierarchy members\n";
    for (int k = 1; k <= std::max(m, 1); ++k) {
        const auto [ut, vt] = hierarchy_rhs(run.lc, k);
        f << "u_t" << k << " = " << to_string(ut) << "\nv_t" << k << " = " << to_string(vt) << "\n";
        f << "latex u_t" << k << " = " << to_latex(ut) << "\nlatex v_t" << k << " = " << to_latex(vt) << "\n";
    }
    f << "\nHamiltonians\n";
    for (int n = 1; n <= std::max(m, 1); ++n) f << "H_" << n << " = " << to_string(hamiltonian(run.lc, n)) << "\n";

    f << "\nVerdicts\n";
    for (const CheckResult &r : {check_symbolic(), check_hamiltonian(), check_homogeneous(), check_series()}) {
        for (const CheckItem &it : r.items) {
            f << (it.pass ? "pass  " : "FAIL  ") << it.name << "\n";
            run.checks.push_back({"derive: " + it.name, it.pass, it.detail});
            if (!it.pass) std::cerr << "derive: identity failed: " << it.name << "\n";
        }
    }
}

void write_period_cache(const fs::path &p, const RunConfig &cfg, const PeriodData &pd) {
    std::ofstream f(p);
    f << std::setprecision(17) << "branch_points " << cfg.branch_points.size();
    for (cplx z : cfg.branch_points) f << ' ' << z.real() << ' ' << z.imag();
    f << '\n';
    write_period_data(f, pd);
}

std::optional<PeriodData> read_period_cache(const fs::path &p, const RunConfig &cfg, const Curve &c) {
    std::ifstream f(p);
    if (!f) return std::nullopt;
    std::string tag;
    std::size_t count = 0;
    f >> tag >> count;
    if (tag != "branch_points" || count != cfg.branch_points.size()) return std::nullopt;
    for (cplx z : cfg.branch_points) {
        double re = 0, im = 0;
        f >> re >> im;
        if (re != z.real() || im != z.imag()) return std::nullopt;
    }
    try {
        return read_period_data(f, c);
    } catch (const CurveError &) {
        return std::nullopt;
    }
}

void stage_curve(Run &run) {
    const RunConfig &cfg = run.cfg;
    run.curve.emplace(CurveSpec::from_points(cfg.branch_points));
    const Curve &c = *run.curve;
    const fs::path cache = run.out / "period_cache.txt";
    std::optional<PeriodData> cached;
    if (cfg.cache) cached = read_period_cache(cache, cfg, c);
    if (cached) {
        run.pd = std::move(*cached);
        std::cerr << "curve: periods loaded from " << cache.string() << "\n";
    } else {
        run.pd = period_matrices(c, cfg.tol.quadrature);
        if (cfg.cache) write_period_cache(cache, cfg, run.pd);
    }
    {
        std::ofstream f = run.open("periods.txt");
        write_period_data(f, run.pd);
    }
    run.ctx.emplace(run.pd.tau, cfg.tol.theta);
    run.K = riemann_constants(c, run.pd, *run.ctx);

    json &m = run.manifest["curve"];
    m["tau"] = mjson(run.pd.tau);
    m["C"] = mjson(run.pd.C);
    m["cond_A"] = run.pd.cond_A;
    m["K"] = vjson(run.K.K);
    m["K_characteristic"] = {{"a", std::vector<int>(run.K.a.data(), run.K.a.data() + run.K.a.size())},
                             {"b", std::vector<int>(run.K.b.data(), run.K.b.data() + run.K.b.size())}};
    const double sym = (run.pd.tau - run.pd.tau.transpose()).cwiseAbs().maxCoeff();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (run.pd.tau.imag() + run.pd.tau.imag().transpose()));
    const double s = run.tolerance_scale;
    run.checks.push_back(below("curve: tau symmetry", sym, 1e-10 * s));
    run.checks.push_back({"curve: Im tau positive definite", es.eigenvalues().minCoeff() > 0,
                          "min eigenvalue " + sci(es.eigenvalues().minCoeff())});
    run.checks.push_back(below("curve: Riemann constant vanishing", run.K.vanishing, 1e-8 * s));
}

GridSpec grid_of(const Run &run, const FlowSpec &f) {
    GridSpec g = default_grid(run.pd, f, run.cfg.nx, run.cfg.nt);
    const double xs = g.x1 - g.x0, ts = g.t1 - g.t0;
    g.x0 = run.cfg.x0;
    g.t0 = run.cfg.t0;
    g.x1 = run.cfg.x1 ? *run.cfg.x1 : g.x0 + xs;
    g.t1 = run.cfg.t1 ? *run.cfg.t1 : g.t0 + ts;
    return g;
}

std::vector<double> samples(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
    return v;
}

void stage_flow(Run &run) {
    const Curve &c = *run.curve;
    const FlowSpec f = FlowSpec::from_curve(c, run.cfg.m);
    const GridSpec g = grid_of(run, f);
    EllipticState s0 = make_state(c, run.cfg.mu, run.cfg.w0);
    IntegratorOptions opt;
    opt.rtol = opt.atol = run.cfg.tol.ode;
    json &m = run.manifest["flow"];
    for (FlowKind kind : {FlowKind::X, FlowKind::T}) {
        const bool is_x = kind == FlowKind::X;
        // the flows start from the configured state at s = 0
        const double a = is_x ? g.x0 : g.t0, b = is_x ? g.x1 : g.t1;
        std::vector<double> s = samples(0.0, b - a, is_x ? g.nx : g.nt);
        const Trajectory traj = integrate_flow(c, s0, kind, s, f, opt);
        const auto rho = abel_jacobi_trajectory(c, run.pd, traj);
        {
            std::ofstream out = run.open(is_x ? "trajectory_x.csv" : "trajectory_t.csv");
            write_trajectory_csv(out, c, traj, rho);
        }
        const VectorXc slope = linear_slope(run.pd, kind, f);
        double dev = 0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            const VectorXc l1 = rho[0].first + s[i] * slope, l2 = rho[0].second - s[i] * slope;
            dev = std::max({dev, (rho[i].first - l1).cwiseAbs().maxCoeff(), (rho[i].second - l2).cwiseAbs().maxCoeff()});
        }
        const std::string name = is_x ? "x" : "t_" + std::to_string(run.cfg.m);
        m[name] = {{"span", b - a},
                   {"samples", s.size()},
                   {"slope", vjson(slope)},
                   {"steps_accepted", traj.steps_accepted},
                   {"max_deviation_from_linear", dev}};
        run.checks.push_back(below("flow: " + name + " Abel-Jacobi coordinates vs linear flow", dev, 1e-6 * run.tolerance_scale));
    }
}

void stage_reconstruct(Run &run) {
    const Curve &c = *run.curve;
    const FlowSpec f = FlowSpec::from_curve(c, run.cfg.m);
    const GridSpec g = grid_of(run, f);
    EllipticState s0 = make_state(c, run.cfg.mu, run.cfg.w0);
    s0.x = g.x0;
    s0.t = g.t0;
    ReconstructOptions opt;
    opt.ode.rtol = opt.ode.atol = run.cfg.tol.ode;
    const Reconstruction r = reconstruct(c, run.pd, *run.ctx, s0, f, g, run.cfg.u0, run.lc, opt);
    {
        std::ofstream out = run.open("field.csv");
        write_field_csv(out, r.grid);
    }

    const DivisorData dd = divisor_data(c, run.pd, r.K.K, r.states[0][0]);
    const ReconstructionReport &rep = r.report;
    json &m = run.manifest["reconstruction"];
    m["grid"] = {{"x0", g.x0}, {"x1", g.x1}, {"nx", g.nx}, {"t0", g.t0}, {"t1", g.t1}, {"nt", g.nt}};
    m["gamma"] = vjson(dd.omega3.gamma);
    m["omega0_inf_plus"] = cjson(dd.omega3.omega0_inf_plus);
    m["omega0_inf_minus"] = cjson(dd.omega3.omega0_inf_minus);
    m["report"] = {{"constraint", rep.constraint},
                   {"w_routes", rep.w_routes},
                   {"log_rhs_routes", rep.log_rhs_routes},
                   {"divisor_routes", rep.divisor_routes},
                   {"lattice_residual", rep.lattice_residual},
                   {"min_denominator", rep.min_denominator},
                   {"residual_max", rep.residual.max},
                   {"residual_rms", rep.residual.rms}};

    // phi asymptotics at the central node, derivatives from the grid
    const FieldGrid &G = r.grid;
    const int it = g.nt / 2, j = g.nx / 2;
    const double h = G.x[1] - G.x[0];
    auto dx = [&](const MatrixXc &F) {
        return (F(it, j - 2) - 8.0 * F(it, j - 1) + 8.0 * F(it, j + 1) - F(it, j + 2)) / (12 * h);
    };
    const PhiAsymptotics a = phi_asymptotics_check(c, r.states[it][j], G.u(it, j), G.w(it, j), dx(G.u), dx(G.w));
    m["phi_asymptotics"] = {{"lead_plus", cjson(a.lead[0])},
                            {"lead_minus", cjson(a.lead[1])},
                            {"lead_error", a.lead_error},
                            {"slope_error", a.slope_error}};

    const double s = run.tolerance_scale;
    run.checks.push_back(below("reconstruct: w^2 + u v - 1", rep.constraint, 1e-10 * s));
    run.checks.push_back(below("reconstruct: max PDE residual", rep.residual.max, run.cfg.tol.residual * s));
    run.checks.push_back(below("reconstruct: theta w vs Lax-pair w", rep.w_routes, 1e-5 * s));
    run.checks.push_back(below("reconstruct: linear rho flow vs Dubrovin + Abel map", rep.divisor_routes, 1e-5 * s));
    run.checks.push_back(below("reconstruct: phi leading terms at infinity", a.lead_error, 1e-3 * s));
}

void write_residual_report(const Run &run) {
    std::ofstream f = run.open("residual_report.txt");
    for (const CheckItem &c : run.checks) f << (c.pass ? "pass  " : "FAIL  ") << c.name << ": " << c.detail << "\n";
    f << (run.all_passed() ? "all checks passed\n" : "some checks FAILED\n");
}

void write_plot_script(const Run &run) {
    std::ofstream f = run.open("plot_fields.py");
    f << R"py(#!/usr/bin/env python3
"""Plots the CSV outputs found next to this script (needs numpy and matplotlib)."""
import os
import sys

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

here = os.path.dirname(os.path.abspath(sys.argv[0]))


def load(name):
    path = os.path.join(here, name)
    if not os.path.exists(path):
        return None, None
    with open(path) as f:
        header = f.readline().strip().split(",")
    return header, np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)


header, data = load("field.csv")
if data is not None:
    x, t = data[:, 0], data[:, 1]
    xs, ts = np.unique(x), np.unique(t)
    fig, axes = plt.subplots(2, 4, figsize=(16, 7), constrained_layout=True)
    for ax, col in zip(axes.flat, range(2, 9)):
        z = data[:, col].reshape(len(ts), len(xs))
        im = ax.pcolormesh(xs, ts, z, shading="auto")
        ax.set_title(header[col])
        ax.set_xlabel("x")
        ax.set_ylabel("t")
        fig.colorbar(im, ax=ax)
    axes.flat[-1].axis("off")
    fig.savefig(os.path.join(here, "field.png"), dpi=120)

for name in ("trajectory_x.csv", "trajectory_t.csv"):
    header, data = load(name)
    if data is None:
        continue
    fig, ax = plt.subplots(figsize=(6, 6), constrained_layout=True)
    for i, h in enumerate(header):
        if h.endswith("_re") and not h.startswith("rho"):
            ax.plot(data[:, i], data[:, i + 1], label=h[:-3])
    ax.set_xlabel("Re lambda")
    ax.set_ylabel("Im lambda")
    ax.legend()
    fig.savefig(os.path.join(here, name.replace(".csv", ".png")), dpi=120)
)py";
}

/// Runs the stages in order; a failing stage leaves the earlier outputs and a FAILED manifest.
int run_stages(Run &run, const std::vector<std::string> &stages) {
    const std::map<std::string, void (*)(Run &)> table{
        {"derive", stage_derive}, {"curve", stage_curve}, {"flow", stage_flow}, {"reconstruct", stage_reconstruct}};
    run.manifest["config"] = config_json(run.cfg);
    run.manifest["stages"] = stages;
    for (const std::string &name : stages) {
        try {
            table.at(name)(run);
        } catch (const std::exception &e) {
            run.manifest["failed_stage"] = name;
            run.manifest["error"] = e.what();
            run.write_manifest("FAILED");
            write_residual_report(run);
            std::cerr << "stage " << name << " failed: " << e.what() << "\n";
            return kStage;
        }
    }
    run.write_manifest("OK");
    write_residual_report(run);
    for (const CheckItem &c : run.checks) {
        if (!c.pass) std::cerr << "threshold failed: " << c.name << ": " << c.detail << "\n";
    }
    return run.all_passed() ? kOk : kThreshold;
}

int run_verify(Run &run) {
    std::ofstream f = run.open("verify_report.txt");
    bool ok = true;
    verify_all(Thresholds{}.scaled(run.tolerance_scale), [&](const CheckResult &r) {
        std::ostringstream line;
        line << "criterion " << r.id << ": " << (r.pass() ? "PASS" : "FAIL") << "  " << r.title << "  [" << r.summary()
             << "]";
        std::cout << line.str() << std::endl;
        f << line.str() << "\n";
        for (const CheckItem &it : r.items) f << "    " << (it.pass ? "ok    " : "FAIL  ") << it.name << ": " << it.detail << "\n";
        ok = ok && r.pass();
    });
    return ok ? kOk : kThreshold;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Finite-gap solutions of the Heisenberg ferromagnet hierarchy"};
    std::string config_path, out_dir;
    bool cache = false;
    double tolerance_scale = 1.0;
    app.add_option("--config", config_path, "JSON run configuration (default: built-in genus-1 demo)")
        ->check(CLI::ExistingFile);
    app.add_option("--out", out_dir, "output directory (overrides the config)");
    app.add_flag("--cache", cache, "reuse period matrices from the output directory");
    app.add_option("--tolerance-scale", tolerance_scale, "multiply every verification threshold")
        ->check(CLI::PositiveNumber);
    app.require_subcommand(1, 1);
    app.fallthrough();
    const std::vector<std::pair<std::string, std::string>> subs{
        {"derive", "hierarchy equations, Hamiltonians and symbolic verdicts"},
        {"curve", "period matrices, Riemann matrix and Riemann constants"},
        {"flow", "Dubrovin flows in x and t_m with their Abel-Jacobi coordinates"},
        {"reconstruct", "theta-function fields w, u, v on the grid"},
        {"verify", "full property suite"},
        {"pipeline", "derive, curve, flow, reconstruct and the run's checks"},
    };
    for (const auto &[name, help] : subs) app.add_subcommand(name, help);
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        return app.exit(e) == 0 ? kOk : kConfig;
    }
    const std::string sub = app.get_subcommands().front()->get_name();

    Run run;
    run.tolerance_scale = tolerance_scale;
    try {
        if (config_path.empty()) {
            run.cfg = demo_config();
        } else {
            std::ifstream f(config_path);
            json j;
            try {
                j = json::parse(f, nullptr, true, true);
            } catch (const json::exception &e) {
                throw ConfigError(std::string("config: ") + e.what());
            }
            run.cfg = parse_config(j);
        }
        if (!out_dir.empty()) run.cfg.out = out_dir;
        run.cfg.cache = run.cfg.cache || cache;
        try {
            CurveSpec::from_points(run.cfg.branch_points);
        } catch (const CurveError &e) {
            throw ConfigError(std::string("branch_points: ") + e.what());
        }
    } catch (const ConfigError &e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kConfig;
    } catch (const json::exception &e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kConfig;
    }
    run.out = run.cfg.out;
    fs::create_directories(run.out);

    if (sub == "verify") return run_verify(run);
    std::vector<std::string> stages;
    if (sub == "derive") stages = {"derive"};
    if (sub == "curve") stages = {"curve"};
    if (sub == "flow") stages = {"curve", "flow"};
    if (sub == "reconstruct") stages = {"curve", "reconstruct"};
    if (sub == "pipeline") stages = {"derive", "curve", "flow", "reconstruct"};
    if (sub == "pipeline") write_plot_script(run);
    const int code = run_stages(run, stages);
    std::cout << sub << ": " << (code == kOk ? "ok" : code == kThreshold ? "threshold failed" : "failed") << " ("
              << run.out.string() << ")\n";
    return code;
}
