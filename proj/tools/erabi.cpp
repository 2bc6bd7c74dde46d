// erabi - command-line driver for spectra, phase diagrams, quenches, sweeps and Wigner snapshots
//
// Exit codes: 0 success, 1 at least one grid point failed, 2 configuration error.

#include <cmath>
#include <filesystem>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "erabi/erabi.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct Settings {
    erabi::ModelParams params;
    std::string out_dir{"."};
    unsigned workers{1};
    int n_max{-1};
    int n_cap{40000};
};

struct Grid1D {
    double min{0.0}, max{1.0};
    int steps{11};

    std::vector<double> values() const
    {
        if (steps < 0) throw erabi::ValidationError("negative step count");
        if (steps == 0) return {};
        if (steps == 1) return {min};
        if (!(max > min)) throw erabi::ValidationError("grid max must exceed min");
        std::vector<double> v(static_cast<std::size_t>(steps));
        for (int i = 0; i < steps; ++i) v[static_cast<std::size_t>(i)] = min + (max - min) * i / (steps - 1.0);
        return v;
    }
};

void add_grid(CLI::App* app, const std::string& name, Grid1D& g, const std::string& what)
{
    app->add_option("--" + name + "-min", g.min, what + " grid start")->capture_default_str();
    app->add_option("--" + name + "-max", g.max, what + " grid end")->capture_default_str();
    app->add_option("--" + name + "-steps", g.steps, what + " grid points (inclusive)")->capture_default_str();
}

std::vector<double> nonempty(const Grid1D& g)
{
    auto v = g.values();
    if (v.empty()) throw erabi::ValidationError("empty grid");
    return v;
}

erabi::CutoffPolicy policy_of(const Settings& s)
{
    erabi::CutoffPolicy pol;
    pol.fixed = s.n_max;
    pol.n_cap = s.n_cap;
    return pol;
}

std::string out_path(const Settings& s, const std::string& name) { return (fs::path(s.out_dir) / name).string(); }

void write_manifest(const Settings& s, const CLI::App& app, const std::string& command, const json& extra)
{
    json j;
    j["version"] = erabi::version_stamp;
    j["command"] = command;
    j["params"] = erabi::params_json(s.params);
    j["config"] = app.config_to_str(true, false);
    for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
    erabi::write_json(out_path(s, command + ".json"), j);
}

template <class T>
int count_failures(const std::vector<erabi::PointResult<T>>& r)
{
    int bad = 0;
    for (const auto& x : r)
        if (!x.value) {
            ++bad;
            std::cerr << "point failed: " << x.error << '\n';
        }
    return bad;
}

// ---------------------------------------------------------------------------------------------

struct SpectrumOptions {
    Grid1D lambda{0.0, 1.5, 151};
    Grid1D eps{-1.2, 0.5, 171};
    double m_prime{std::numeric_limits<double>::quiet_NaN()};
    bool quantum{false};
    double kernel{0.02};
    std::string eigen_export;
    bool eigen_vectors{false};
};

int run_spectrum(const Settings& s, const SpectrumOptions& o, const CLI::App& app)
{
    const auto lambdas = nonempty(o.lambda);
    const auto eps = nonempty(o.eps);
    const double mp = std::isnan(o.m_prime) ? -s.params.j() : o.m_prime;

    struct Row {
        std::vector<double> rho;
        std::vector<erabi::EsqptPoint> lines;
        std::vector<double> quantum;
        int n_max{0};
    };
    auto res = erabi::parallel_map<Row>(lambdas.size(), s.workers, [&](std::size_t i) {
        erabi::ModelParams p = s.params;
        p.lambda = lambdas[i];
        Row r;
        r.rho = erabi::semiclassical_level_density(p, mp, eps);
        r.lines = erabi::esqpt_critical_lines(p, {p.lambda}, mp);
        if (o.quantum) {
            const int n = s.n_max >= 0 ? s.n_max : erabi::estimate_cutoff(p, eps.back() + 0.1, policy_of(s));
            const auto eigs = erabi::diagonalize(p, erabi::HilbertBasis(p.two_j(), n), p.mu == 0.0);
            const auto dens = erabi::smoothed_level_density(eigs, p, o.kernel);
            for (double e : eps) r.quantum.push_back(dens(e));
            r.n_max = n;
        }
        return r;
    });

    erabi::CsvWriter dens(out_path(s, "density.csv"), {"lambda", "eps", "rho"});
    erabi::CsvWriter lines(out_path(s, "esqpt.csv"), {"lambda", "eps_c", "q", "p", "index", "singularity"});
    std::optional<erabi::CsvWriter> qd;
    if (o.quantum) qd.emplace(out_path(s, "quantum_density.csv"), std::vector<std::string>{"lambda", "eps", "rho", "n_max"});
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        if (!res[i].value) continue;
        const auto& r = *res[i].value;
        for (std::size_t k = 0; k < eps.size(); ++k) dens.row({lambdas[i], eps[k], r.rho[k]});
        for (const auto& l : r.lines)
            lines.row({l.lambda, l.energy, l.point.q, l.point.p, static_cast<long>(l.index_r),
                       std::string(erabi::to_string(l.singularity))});
        if (qd)
            for (std::size_t k = 0; k < eps.size(); ++k) qd->row({lambdas[i], eps[k], r.quantum[k], static_cast<long>(r.n_max)});
    }

    json extra;
    extra["m_prime"] = mp;
    if (!o.eigen_export.empty()) {
        const int n = s.n_max >= 0 ? s.n_max : erabi::estimate_cutoff(s.params, eps.back() + 0.1, policy_of(s));
        const auto eigs = erabi::diagonalize(s.params, erabi::HilbertBasis(s.params.two_j(), n), s.params.mu == 0.0);
        erabi::write_eigen_csv(out_path(s, o.eigen_export), eigs, o.eigen_vectors);
        extra["eigen_export"] = {{"file", o.eigen_export}, {"n_max", n}, {"residual", eigs.residual()}};
    }
    const int bad = count_failures(res);
    extra["failed_points"] = bad;
    write_manifest(s, app, "spectrum", extra);
    return bad ? 1 : 0;
}

// ---------------------------------------------------------------------------------------------

struct PhaseOptions {
    Grid1D lambda{0.0, 2.0, 201};
    Grid1D delta{-1.0, 1.0, 81};
};

int run_phases(const Settings& s, const PhaseOptions& o, const CLI::App& app)
{
    if (s.params.mu != 0.0 && s.params.gamma != 1.0) throw erabi::ValidationError("vacuum not a fixed point");
    const auto lambdas = nonempty(o.lambda);
    const auto deltas = nonempty(o.delta);
    struct Cell {
        double det;
        std::string label;
        double lambda_c_prime;
    };
    const std::size_t total = lambdas.size() * deltas.size();
    auto res = erabi::parallel_map<Cell>(total, s.workers, [&](std::size_t idx) {
        erabi::ModelParams p = s.params;
        p.delta = deltas[idx / lambdas.size()];
        p.lambda = lambdas[idx % lambdas.size()];
        const auto h = erabi::hessian_at(p, -p.j(), {0.0, 0.0});
        const auto ph = erabi::classify_vacuum_phase(p);
        return Cell{h.determinant(), erabi::to_string(ph.label),
                    ph.lambda_c_prime ? *ph.lambda_c_prime : std::numeric_limits<double>::quiet_NaN()};
    });
    erabi::CsvWriter w(out_path(s, "phases.csv"), {"lambda", "delta", "det_hessian", "phase", "lambda_c_prime"});
    for (std::size_t idx = 0; idx < total; ++idx) {
        if (!res[idx].value) continue;
        const auto& c = *res[idx].value;
        w.row({lambdas[idx % lambdas.size()], deltas[idx / lambdas.size()], c.det, c.label,
               std::isnan(c.lambda_c_prime) ? erabi::CsvCell(std::string()) : erabi::CsvCell(c.lambda_c_prime)});
    }
    const int bad = count_failures(res);
    write_manifest(s, app, "phases", {{"failed_points", bad}});
    return bad ? 1 : 0;
}

// ---------------------------------------------------------------------------------------------

struct TimeOptions {
    std::string kind{"linear"};
    double t_min{0.0};
    double t_max{50.0};
    int points{501};

    std::vector<double> values() const
    {
        if (points < 1) throw erabi::ValidationError("time grid needs points >= 1");
        if (kind == "linear") return erabi::linear_time_grid(t_min, t_max, static_cast<std::size_t>(points));
        if (kind == "log") return erabi::log_time_grid(t_min > 0.0 ? t_min : 0.1, t_max, static_cast<std::size_t>(points));
        throw erabi::ValidationError("time grid must be linear or log");
    }
};

void add_time_options(CLI::App* app, TimeOptions& t)
{
    app->add_option("--time-grid", t.kind, "linear or log")->capture_default_str();
    app->add_option("--t-min", t.t_min, "first time (log grids use 0.1 when <= 0)")->capture_default_str();
    app->add_option("--t-max", t.t_max, "last time")->capture_default_str();
    app->add_option("--t-points", t.points, "number of time samples")->capture_default_str();
}

void write_snapshots(const Settings& s, const erabi::QuenchSetup& setup, const std::vector<double>& times, bool scaled,
                     const std::optional<erabi::GridSpec>& grid, const std::string& prefix, json& index)
{
    const auto snaps = erabi::wigner_snapshots(setup, times, grid);
    for (std::size_t k = 0; k < snaps.size(); ++k) {
        auto grid = snaps[k].grid;
        if (scaled) grid = erabi::to_scaled_quadratures(grid, setup.params.size());
        const std::string stem = prefix + "_" + std::to_string(k) + "_" + snaps[k].tag;
        erabi::write_wigner_csv(out_path(s, stem + ".csv"), grid);
        json h = erabi::wigner_header_json(grid);
        h["t"] = snaps[k].t;
        h["tag"] = snaps[k].tag;
        h["params"] = erabi::params_json(setup.params);
        h["n_max"] = setup.basis.n_max();
        erabi::write_json(out_path(s, stem + ".json"), h);
        index.push_back({{"file", stem + ".csv"}, {"t", snaps[k].t}, {"tag", snaps[k].tag}});
    }
}

json provenance(const erabi::QuenchSetup& q)
{
    return {{"n_max", q.basis.n_max()}, {"dimension", q.basis.dimension()}, {"residual", q.eigs.residual()},
            {"hamiltonian_norm", q.eigs.hamiltonian_norm()}, {"ground_change", q.ground_change},
            {"tail_weight", q.tail_weight}};
}

struct QuenchOptions {
    std::vector<double> lambdas;
    TimeOptions time;
    bool wigner{false};
    bool scaled{false};
};

int run_quench(const Settings& s, const QuenchOptions& o, const CLI::App& app)
{
    const auto lambdas = o.lambdas.empty() ? std::vector<double>{s.params.lambda} : o.lambdas;
    const auto times = o.time.values();
    for (double l : lambdas) {
        erabi::ModelParams p = s.params;
        p.lambda = l;
        erabi::validate_params(p);
    }
    auto res = erabi::parallel_map<json>(lambdas.size(), s.workers, [&](std::size_t i) {
        erabi::ModelParams p = s.params;
        p.lambda = lambdas[i];
        const auto setup = erabi::prepare_quench(p, policy_of(s));
        const auto rec = erabi::quench_record(setup, times);
        const std::string stem = "quench_" + std::to_string(i);
        erabi::write_quench_csv(out_path(s, stem + ".csv"), rec);
        json side;
        side["version"] = erabi::version_stamp;
        side["params"] = erabi::params_json(p);
        side["averages"] = erabi::averages_json(rec.averages);
        side["provenance"] = provenance(setup);
        if (o.wigner) {
            json idx = json::array();
            write_snapshots(s, setup, {}, o.scaled, std::nullopt, "wigner_" + std::to_string(i), idx);
            side["wigner"] = idx;
        }
        erabi::write_json(out_path(s, stem + ".json"), side);
        return json{{"file", stem + ".csv"}, {"lambda", p.lambda}};
    });
    json runs = json::array();
    for (const auto& r : res)
        if (r.value) runs.push_back(*r.value);
    const int bad = count_failures(res);
    write_manifest(s, app, "quench", {{"runs", runs}, {"failed_points", bad}});
    return bad ? 1 : 0;
}

// ---------------------------------------------------------------------------------------------

struct SweepOptions {
    Grid1D lambda{0.0, 1.5, 61};
    Grid1D delta{0.5, 0.5, 1};
    double window{0.05};
};

int run_sweep(const Settings& s, const SweepOptions& o, const CLI::App& app)
{
    const auto lambdas = nonempty(o.lambda);
    const auto deltas = nonempty(o.delta);
    if (o.window < 0.0) throw erabi::ValidationError("smoothing window must be non-negative");
    struct Point {
        erabi::QuenchAverages avg;
        int n_max;
        double residual;
    };
    const std::size_t total = lambdas.size() * deltas.size();
    auto res = erabi::parallel_map<Point>(total, s.workers, [&](std::size_t idx) {
        erabi::ModelParams p = s.params;
        p.delta = deltas[idx / lambdas.size()];
        p.lambda = lambdas[idx % lambdas.size()];
        p = erabi::validate_params(p);
        const auto setup = erabi::prepare_quench(p, policy_of(s));
        return Point{erabi::quench_averages(setup), setup.basis.n_max(), setup.eigs.residual()};
    });

    const std::vector<std::string> names{"P", "Pq", "Pb", "Jx", "Jy", "Jz", "n", "q", "p"};
    auto column = [](const erabi::QuenchAverages& a, std::size_t c) {
        const double v[] = {a.P, a.Pq, a.Pb, a.Jx, a.Jy, a.Jz, a.n, a.q, a.p};
        return v[c];
    };
    std::vector<std::string> header{"lambda", "delta"};
    for (const auto& n : names) header.push_back(n);
    for (const auto& n : names) header.push_back(n + "_smooth");
    header.insert(header.end(), {"n_max", "residual", "status"});
    erabi::CsvWriter w(out_path(s, "sweep.csv"), header);
    const double span = lambdas.back() - lambdas.front();
    for (std::size_t d = 0; d < deltas.size(); ++d) {
        // smoothing along lambda uses the successful points of this delta row only
        std::vector<double> xs;
        std::vector<std::vector<double>> ys(names.size());
        for (std::size_t l = 0; l < lambdas.size(); ++l) {
            const auto& r = res[d * lambdas.size() + l];
            if (!r.value) continue;
            xs.push_back(lambdas[l]);
            for (std::size_t c = 0; c < names.size(); ++c) ys[c].push_back(column(r.value->avg, c));
        }
        std::vector<std::vector<double>> sm(names.size());
        for (std::size_t c = 0; c < names.size(); ++c) sm[c] = erabi::moving_average(xs, ys[c], o.window * span);
        std::size_t k = 0;
        for (std::size_t l = 0; l < lambdas.size(); ++l) {
            const auto& r = res[d * lambdas.size() + l];
            std::vector<erabi::CsvCell> row{lambdas[l], deltas[d]};
            if (r.value) {
                for (std::size_t c = 0; c < names.size(); ++c) row.emplace_back(ys[c][k]);
                for (std::size_t c = 0; c < names.size(); ++c) row.emplace_back(sm[c][k]);
                row.insert(row.end(), {static_cast<long>(r.value->n_max), r.value->residual, std::string("ok")});
                ++k;
            } else {
                for (std::size_t c = 0; c < 2 * names.size(); ++c) row.emplace_back(std::string());
                row.insert(row.end(), {std::string(), std::string(), std::string("failed")});
            }
            w.row(row);
        }
    }
    const int bad = count_failures(res);
    write_manifest(s, app, "sweep", {{"window_fraction", o.window}, {"failed_points", bad}});
    return bad ? 1 : 0;
}

// ---------------------------------------------------------------------------------------------

struct WignerOptions {
    std::vector<double> times;
    bool scaled{false};
    double extent{0.0};
    int points{0};
};

int run_wigner(const Settings& s, const WignerOptions& o, const CLI::App& app)
{
    std::optional<erabi::GridSpec> grid;
    if ((o.extent > 0.0) != (o.points > 0)) throw erabi::ValidationError("--extent and --points go together");
    if (o.points == 1) throw erabi::ValidationError("grid needs at least 2 points per axis");
    if (o.points > 0) grid = erabi::GridSpec{-o.extent, o.extent, o.points, -o.extent, o.extent, o.points};
    const auto setup = erabi::prepare_quench(s.params, policy_of(s));
    json idx = json::array();
    write_snapshots(s, setup, o.times, o.scaled, grid, "wigner", idx);
    write_manifest(s, app, "wigner", {{"snapshots", idx}, {"provenance", provenance(setup)}});
    return 0;
}

// ---------------------------------------------------------------------------------------------

struct ScalingOptions {
    std::vector<double> R_list{10, 30, 100, 300};
};

int run_scaling(const Settings& s, const ScalingOptions& o, const CLI::App& app)
{
    if (o.R_list.empty()) throw erabi::ValidationError("empty grid");
    if (!std::is_sorted(o.R_list.begin(), o.R_list.end())) throw erabi::ValidationError("R list must be ascending");
    auto res = erabi::parallel_map<erabi::ScalingPoint>(o.R_list.size(), s.workers, [&](std::size_t i) {
        erabi::ModelParams p = s.params;
        p.R = o.R_list[i];
        return erabi::size_scaling_study(erabi::validate_params(p), {p.R}, policy_of(s)).front();
    });
    erabi::CsvWriter w(out_path(s, "scaling.csv"), {"R", "P", "Pq", "one_minus_Pq", "n_max", "status"});
    for (std::size_t i = 0; i < res.size(); ++i) {
        if (res[i].value) {
            const auto& x = *res[i].value;
            w.row({x.R, x.P, x.Pq, 1.0 - x.Pq, static_cast<long>(x.n_max), std::string("ok")});
        } else {
            w.row({o.R_list[i], std::string(), std::string(), std::string(), std::string(), std::string("failed")});
        }
    }
    const int bad = count_failures(res);
    write_manifest(s, app, "scaling", {{"failed_points", bad}});
    return bad ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Extended Rabi model: spectra, semiclassics, quench dynamics and Wigner functions"};
    app.set_config("--config", "", "TOML/INI file with option values (sections per subcommand)");
    app.require_subcommand(1);

    Settings s;
    auto& p = s.params;
    app.add_option("--omega", p.omega, "boson quantum")->capture_default_str();
    app.add_option("--R", p.R, "qubit-to-boson energy ratio")->capture_default_str();
    app.add_option("--N", p.N, "number of qubits")->capture_default_str();
    app.add_option("--lambda", p.lambda, "parity-conserving coupling")->capture_default_str();
    app.add_option("--delta", p.delta, "rotating/counter-rotating asymmetry")->capture_default_str();
    app.add_option("--mu", p.mu, "parity-violating coupling")->capture_default_str();
    app.add_option("--gamma", p.gamma, "drive switch (0 or 1)")->capture_default_str();
    app.add_flag("--allow-continuous-gamma", p.allow_continuous_gamma, "accept gamma outside {0,1}");
    app.add_option("--out", s.out_dir, "output directory")->capture_default_str();
    app.add_option("--workers", s.workers, "parallel workers")->capture_default_str();
    app.add_option("--nmax", s.n_max, "fixed Fock cutoff (-1 = adaptive)")->capture_default_str();
    app.add_option("--nmax-cap", s.n_cap, "largest adaptive Fock cutoff")->capture_default_str();

    SpectrumOptions so;
    auto* spectrum = app.add_subcommand("spectrum", "semiclassical/quantum level densities and ESQPT lines");
    add_grid(spectrum, "lambda", so.lambda, "coupling");
    add_grid(spectrum, "eps", so.eps, "scaled energy");
    spectrum->add_option("--m-prime", so.m_prime, "quasispin projection (default -j)");
    spectrum->add_flag("--quantum", so.quantum, "also write NR-normalized smoothed quantum densities");
    spectrum->add_option("--kernel-width", so.kernel, "Gaussian smoothing width in scaled energy")->capture_default_str();
    spectrum->add_option("--eigen-export", so.eigen_export, "write the eigendecomposition at --lambda to this file");
    spectrum->add_flag("--eigen-vectors", so.eigen_vectors, "include eigenvectors in the export");

    PhaseOptions po;
    auto* phases = app.add_subcommand("phases", "vacuum phase diagram over (lambda, delta)");
    add_grid(phases, "lambda", po.lambda, "coupling");
    add_grid(phases, "delta", po.delta, "asymmetry");

    QuenchOptions qo;
    auto* quench = app.add_subcommand("quench", "time series after the quench from |m=-j>|n=0>");
    quench->add_option("--lambdas", qo.lambdas, "list of couplings (default --lambda)")->delimiter(',');
    add_time_options(quench, qo.time);
    quench->add_flag("--wigner", qo.wigner, "write Wigner snapshots at auto-located instants");
    quench->add_flag("--scaled", qo.scaled, "Wigner axes in scaled quadratures");

    SweepOptions wo;
    auto* sweep = app.add_subcommand("sweep", "infinite-time averages over lambda (and delta) grids");
    add_grid(sweep, "lambda", wo.lambda, "coupling");
    add_grid(sweep, "delta", wo.delta, "asymmetry");
    sweep->add_option("--window", wo.window, "smoothing window as a fraction of the lambda range")->capture_default_str();

    WignerOptions gw;
    auto* wig = app.add_subcommand("wigner", "Wigner snapshots of the field state");
    wig->add_option("--times", gw.times, "instants (default: initial, early, first dip, first revival)")->delimiter(',');
    wig->add_flag("--scaled", gw.scaled, "axes in scaled quadratures");
    wig->add_option("--extent", gw.extent, "half-width of a fixed square grid in standard quadratures");
    wig->add_option("--points", gw.points, "points per axis of the fixed grid");

    ScalingOptions sc;
    auto* scaling = app.add_subcommand("scaling", "averaged survival probabilities versus R");
    scaling->add_option("--R-list", sc.R_list, "ascending list of R values")->delimiter(',')->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        p = erabi::validate_params(p);
        if (s.workers == 0) throw erabi::ValidationError("workers must be positive");
        fs::create_directories(s.out_dir);
        if (*spectrum) return run_spectrum(s, so, app);
        if (*phases) return run_phases(s, po, app);
        if (*quench) return run_quench(s, qo, app);
        if (*sweep) return run_sweep(s, wo, app);
        if (*wig) return run_wigner(s, gw, app);
        if (*scaling) return run_scaling(s, sc, app);
    } catch (const erabi::ValidationError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
