// Command-line front end: simulation, quadrature, bounds, floors, diversity
// fits, quantization penalties, detector decision tables and cross-engine
// comparison, all emitting reloadable CSV/JSON rows plus a JSON sidecar with
// the full run configuration.

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pskq/pskq.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace pskq;

namespace {

struct SnrGrid {
    double start_db = 0.0;
    double stop_db = 0.0;
    double step_db = 1.0;

    std::vector<double> points_db() const {
        if (!(step_db > 0.0))
            throw ConfigError("snr grid: step must be positive");
        if (stop_db < start_db)
            throw ConfigError("snr grid: stop must be >= start (grid would be empty)");
        std::vector<double> pts;
        const int count = static_cast<int>((stop_db - start_db) / step_db + 1e-9) + 1;
        pts.reserve(count);
        for (int i = 0; i < count; ++i) pts.push_back(start_db + i * step_db);
        return pts;
    }
};

SnrGrid parse_grid(const std::string& spec) {
    SnrGrid grid;
    const auto c1 = spec.find(':');
    try {
        if (c1 == std::string::npos) {
            grid.start_db = grid.stop_db = std::stod(spec);
            grid.step_db = 1.0;
            return grid;
        }
        const auto c2 = spec.find(':', c1 + 1);
        if (c2 == std::string::npos)
            throw ConfigError("snr grid: expected start:stop:step or a single value");
        grid.start_db = std::stod(spec.substr(0, c1));
        grid.stop_db = std::stod(spec.substr(c1 + 1, c2 - c1 - 1));
        grid.step_db = std::stod(spec.substr(c2 + 1));
    } catch (const std::invalid_argument&) {
        throw ConfigError("snr grid: cannot parse '" + spec + "'");
    } catch (const std::out_of_range&) {
        throw ConfigError("snr grid: value out of range in '" + spec + "'");
    }
    return grid;
}

std::pair<double, double> parse_window(const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw ConfigError("window: expected lo:hi in dB");
    try {
        return {std::stod(spec.substr(0, colon)), std::stod(spec.substr(colon + 1))};
    } catch (const std::exception&) {
        throw ConfigError("window: cannot parse '" + spec + "'");
    }
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

std::string timestamp_utc() {
    const std::time_t now = std::time(nullptr);
    char buf[32];
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::strftime(buf, sizeof(buf), "%Y%m%dT%H%M%SZ", &tm);
    return buf;
}

struct OutputOpts {
    std::string out;
    std::string format = "csv";
    bool overwrite = false;

    fs::path resolve(const std::string& command) const {
        if (!out.empty()) return fs::path(out);
        const char* env = std::getenv("PSKQ_OUT_DIR");
        const fs::path dir = env && *env ? fs::path(env) : fs::path(".");
        const std::string ext = format == "json" ? ".json" : ".csv";
        return dir / (command + "-" + timestamp_utc() + ext);
    }
};

void add_output_options(CLI::App* cmd, OutputOpts& opts) {
    cmd->add_option("--out", opts.out, "output file (default: timestamped name in $PSKQ_OUT_DIR or .)");
    cmd->add_option("--format", opts.format, "output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_flag("--overwrite", opts.overwrite, "replace an existing output file");
}

fs::path emit_at(const fs::path& path, const std::string& command, const OutputOpts& opts,
                 const std::vector<ResultRow>& rows, json config) {
    const fs::path sidecar = path.string() + ".meta.json";
    ensure_writable(path, opts.overwrite);
    ensure_writable(sidecar, opts.overwrite);
    write_result_rows(path, rows, parse_format(opts.format));

    config["command"] = command;
    config["output"] = path.string();
    config["format"] = opts.format;
    config["rng"] = RngStream::algorithm_id();
    config["timestamp"] = timestamp_utc();
    std::ofstream meta(sidecar);
    if (!meta) throw ConfigError("cannot open sidecar " + sidecar.string());
    meta << config.dump(2) << '\n';

    std::cout << path.string() << '\n';
    return path;
}

fs::path emit(const std::string& command, const OutputOpts& opts,
              const std::vector<ResultRow>& rows, json config) {
    return emit_at(opts.resolve(command), command, opts, rows, std::move(config));
}

// one output file per (n, m) combination when several were requested
fs::path combo_path(const fs::path& base, int n, double m, bool multi) {
    if (!multi) return base;
    std::ostringstream name;
    name << base.stem().string() << "-n" << n << "-m" << m
         << base.extension().string();
    return base.parent_path() / name.str();
}

std::vector<int> parse_int_list(const std::string& spec, const std::string& what) {
    std::vector<int> vals;
    std::string cur;
    std::istringstream in(spec);
    while (std::getline(in, cur, ',')) {
        try {
            vals.push_back(std::stoi(cur));
        } catch (const std::exception&) {
            throw ConfigError(what + ": cannot parse '" + cur + "'");
        }
    }
    if (vals.empty()) throw ConfigError(what + ": empty list");
    return vals;
}

std::vector<double> parse_double_list(const std::string& spec, const std::string& what) {
    std::vector<double> vals;
    std::string cur;
    std::istringstream in(spec);
    while (std::getline(in, cur, ',')) {
        try {
            vals.push_back(std::stod(cur));
        } catch (const std::exception&) {
            throw ConfigError(what + ": cannot parse '" + cur + "'");
        }
    }
    if (vals.empty()) throw ConfigError(what + ": empty list");
    return vals;
}

json grid_json(const SnrGrid& grid) {
    return json{{"start_db", grid.start_db}, {"stop_db", grid.stop_db},
                {"step_db", grid.step_db}};
}

QuadratureSettings settings_for(double tol) {
    QuadratureSettings s;
    s.rel_tol = tol;
    s.rel_tol_3d = std::max(tol, 1e-8);
    s.validate();
    return s;
}

// ---- subcommands ----------------------------------------------------------

int cmd_simulate(int M, const std::vector<int>& ns, const std::vector<double>& ms,
                 const SnrGrid& grid, std::uint64_t seed, std::uint64_t trials, double ci,
                 std::uint64_t chunk, unsigned workers, const OutputOpts& out) {
    const bool multi = ns.size() * ms.size() > 1;
    const fs::path base = out.resolve("simulate");
    for (int n : ns) {
        for (double m : ms) {
            std::vector<ResultRow> rows;
            for (double db : grid.points_db()) {
                SimPlan plan;
                plan.query = SepQuery{M, n, m, db_to_linear(db)};
                plan.max_trials = trials;
                plan.target_rel_ci = ci;
                plan.chunk_size = std::min<std::uint64_t>(chunk, trials);
                plan.seed = seed;
                plan.workers = workers;
                const SepEstimate est = simulate_sep(plan);
                rows.push_back({M, n, m, db, est.p_hat, est.std_error, "mc", seed});
            }
            emit_at(combo_path(base, n, m, multi), "simulate", out, rows,
                    json{{"M", M}, {"n", n}, {"m", m}, {"snr_db", grid_json(grid)},
                         {"seed", seed}, {"max_trials", trials}, {"target_rel_ci", ci},
                         {"chunk_size", chunk}});
        }
    }
    return 0;
}

int cmd_analytic(int M, const std::vector<int>& ns, const std::vector<double>& ms,
                 const SnrGrid& grid, double tol, bool components, const OutputOpts& out) {
    const QuadratureSettings s = settings_for(tol);
    const bool multi = ns.size() * ms.size() > 1;
    const fs::path base = out.resolve("analytic");
    for (int n : ns) {
        for (double m : ms) {
            std::vector<ResultRow> rows;
            for (double db : grid.points_db()) {
                const SepQuery q{M, n, m, db_to_linear(db)};
                if (components) {
                    const SepComponents c = sep_p_components(q, s);
                    rows.push_back(
                        {M, n, m, db, std::clamp(c.total(), 0.0, 1.0), tol, "analytic", 0});
                    rows.push_back({M, n, m, db, c.p1, tol, "p1", 0});
                    rows.push_back({M, n, m, db, c.p2, tol, "p2", 0});
                    rows.push_back({M, n, m, db, c.p3, tol, "p3", 0});
                    rows.push_back({M, n, m, db, c.p4, tol, "p4", 0});
                } else {
                    rows.push_back({M, n, m, db, sep_exact(q, s), tol, "analytic", 0});
                }
            }
            emit_at(combo_path(base, n, m, multi), "analytic", out, rows,
                    json{{"M", M}, {"n", n}, {"m", m}, {"snr_db", grid_json(grid)},
                         {"tol", tol}, {"components", components}});
        }
    }
    return 0;
}

int cmd_bounds(int M, int n, double m, const SnrGrid& grid, double tol,
               const OutputOpts& out) {
    const QuadratureSettings s = settings_for(tol);
    std::vector<ResultRow> rows;
    for (double db : grid.points_db()) {
        const SepQuery q{M, n, m, db_to_linear(db)};
        const SepBounds b = sep_bounds(q, s);
        rows.push_back({M, n, m, db, b.lower, tol, "lower", 0});
        rows.push_back({M, n, m, db, sep_exact(q, s), tol, "analytic", 0});
        rows.push_back({M, n, m, db, b.upper, tol, "upper", 0});
    }
    emit("bounds", out, rows,
         json{{"M", M}, {"n", n}, {"m", m}, {"snr_db", grid_json(grid)}, {"tol", tol}});
    return 0;
}

int cmd_floor(int M, int n, std::optional<double> pmin, const OutputOpts& out) {
    const double p = pmin.value_or(1.0 / M);
    const double floor = error_floor(M, n, p);
    std::vector<ResultRow> rows{{M, n, 0.0, 0.0, floor, 0.0, "floor", 0}};
    emit("floor", out, rows, json{{"M", M}, {"n", n}, {"p_min", p}});
    std::cout << "error floor for M=" << M << " n=" << n << ": " << floor << '\n';
    return 0;
}

int cmd_dvo(int M, int n, double m, const std::string& window_spec, int points,
            const std::string& in_file, const std::string& in_method, double tol,
            const OutputOpts& out) {
    const auto [lo_db, hi_db] = parse_window(window_spec);
    if (points < 4) throw ConfigError("dvo: need at least 4 points");

    SepCurve curve;
    std::vector<ResultRow> rows;
    if (!in_file.empty()) {
        auto loaded = read_result_rows(in_file);
        if (!in_method.empty())
            std::erase_if(loaded, [&](const ResultRow& r) { return r.method != in_method; });
        if (loaded.empty())
            throw ConfigError("dvo: no rows" +
                              (in_method.empty() ? std::string()
                                                 : " with method '" + in_method + "'") +
                              " in " + in_file);
        curve = rows_to_curve(loaded);
        rows = loaded;
    } else {
        const QuadratureSettings s = settings_for(tol);
        for (int i = 0; i < points; ++i) {
            const double db = lo_db + (hi_db - lo_db) * i / (points - 1);
            const double p = sep_exact({M, n, m, db_to_linear(db)}, s);
            curve.push_back({db, p, tol, "analytic", 0});
            rows.push_back({M, n, m, db, p, tol, "analytic", 0});
        }
    }

    const DiversityFit fit = fit_diversity_order(curve, lo_db, hi_db);
    const double theory = diversity_order(M, n, m);
    rows.push_back({M, n, m, hi_db, fit.slope, fit.residual, "dvo_fit", 0});
    rows.push_back({M, n, m, hi_db, theory, 0.0, "dvo_theory", 0});
    emit("dvo", out, rows,
         json{{"M", M}, {"n", n}, {"m", m}, {"window_db", {lo_db, hi_db}},
              {"points", points}, {"in", in_file}, {"in_method", in_method}, {"tol", tol}});
    std::cout << "fitted slope " << fit.slope << " (theory " << theory << ", residual "
              << fit.residual << ")\n";
    return 0;
}

int cmd_penalty(int n, const SnrGrid& grid, std::optional<double> target_sep,
                const OutputOpts& out) {
    if (n < 2) throw ConfigError("penalty: n must be >= 2");
    std::vector<ResultRow> rows;
    for (double db : grid.points_db()) {
        const double snr = db_to_linear(db);
        rows.push_back({4, n, 1.0, db, asymptotic_sep_qpsk(snr, n), 0.0, "asym_sep", 0});
        // n = 0 marks the unquantized reference curve
        rows.push_back({4, 0, 1.0, db, asymptotic_sep_qpsk_unquantized(snr), 0.0,
                        "asym_sep", 0});
        rows.push_back({4, n, 1.0, db, quantization_sep_penalty_db(snr, n), 0.0,
                        "psi_db", 0});
    }
    if (target_sep) {
        if (!(*target_sep > 0.0 && *target_sep < 1.0))
            throw ConfigError("penalty: target SEP must lie in (0, 1)");
        if (n < 3)
            throw ConfigError("penalty: the power penalty needs n >= 3");
        // 2-bit SNR reaching the target, from the half-order asymptote
        const double snr_two_bits = std::pow(2.0 / (pi * *target_sep), 2.0);
        const double phi = quantization_power_penalty_db(snr_two_bits, n);
        rows.push_back({4, n, 1.0, 10.0 * std::log10(snr_two_bits), phi, 0.0, "phi_db", 0});
        std::cout << "phi(" << *target_sep << ", " << n << ") = " << phi << " dB\n";
    }
    json cfg{{"n", n}, {"snr_db", grid_json(grid)}};
    if (target_sep) cfg["target_sep"] = *target_sep;
    emit("penalty", out, rows, cfg);
    return 0;
}

int cmd_detector_table(int M, int n, double snr, int grid_points, const OutputOpts& out) {
    if (grid_points < 1) throw ConfigError("detector-table: need at least one grid point");
    if (!(snr > 0.0)) throw ConfigError("detector-table: snr must be > 0");
    const PskConstellation mod(M);
    const PhaseQuantizer quant(n);

    const fs::path path = out.resolve("detector-table");
    const fs::path sidecar = path.string() + ".meta.json";
    ensure_writable(path, out.overwrite);
    ensure_writable(sidecar, out.overwrite);

    std::ofstream file(path);
    if (!file) throw ConfigError("cannot open output file " + path.string());
    file << "M,n,snr_db,arg_h_deg,k,symbol\n";
    const double snr_db = 10.0 * std::log10(snr);
    for (int g = 0; g < grid_points; ++g) {
        const double arg_h = -pi + two_pi * g / grid_points;
        const cdouble h = std::polar(1.0, arg_h);
        for (int k = 0; k < quant.region_count(); ++k) {
            const int sym = ml_detect_geometric(mod, quant, h, snr, k);
            file << M << ',' << n << ',' << snr_db << ',' << (arg_h * 180.0 / pi) << ','
                 << k << ',' << sym << '\n';
        }
    }
    file.close();

    json cfg{{"command", "detector-table"}, {"M", M},      {"n", n},
             {"snr", snr},                  {"grid_points", grid_points},
             {"output", path.string()},     {"timestamp", timestamp_utc()}};
    std::ofstream meta(sidecar);
    meta << cfg.dump(2) << '\n';
    std::cout << path.string() << '\n';
    return 0;
}

int cmd_compare(int M, int n, double m, std::optional<double> m_analytic,
                const SnrGrid& grid, std::uint64_t seed, std::uint64_t trials, double ci,
                double tol, const OutputOpts& out) {
    const QuadratureSettings s = settings_for(tol);
    const double m_quad = m_analytic.value_or(m);
    std::vector<ResultRow> rows;
    int flagged = 0;
    for (double db : grid.points_db()) {
        SimPlan plan;
        plan.query = SepQuery{M, n, m, db_to_linear(db)};
        plan.max_trials = trials;
        plan.target_rel_ci = ci;
        plan.chunk_size = std::min(plan.chunk_size, trials);
        plan.seed = seed;
        const SepEstimate est = simulate_sep(plan);
        const double exact = sep_exact({M, n, m_quad, db_to_linear(db)}, s);
        double z = 0.0;
        if (est.std_error > 0.0)
            z = (est.p_hat - exact) / est.std_error;
        else if (est.p_hat != exact)
            z = std::numeric_limits<double>::infinity();
        rows.push_back({M, n, m, db, est.p_hat, est.std_error, "mc", seed});
        rows.push_back({M, n, m_quad, db, exact, tol, "analytic", 0});
        rows.push_back({M, n, m, db, z, 0.0, "zscore", seed});
        if (std::abs(z) > 4.0) {
            ++flagged;
            std::cerr << "FLAG |z| > 4 at " << db << " dB: mc=" << est.p_hat
                      << " analytic=" << exact << " z=" << z << '\n';
        }
    }
    emit("compare", out, rows,
         json{{"M", M}, {"n", n}, {"m", m}, {"m_analytic", m_quad},
              {"snr_db", grid_json(grid)}, {"seed", seed}, {"max_trials", trials},
              {"target_rel_ci", ci}, {"tol", tol}});
    if (flagged > 0) {
        std::cerr << flagged << " grid points flagged\n";
        return 2;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"M-PSK symbol error rates with n-bit phase-quantized reception "
                 "under Nakagami-m fading"};
    app.require_subcommand(1);

    int M = 4, n = 2;
    double m = 1.0;
    std::string n_list = "2", m_list = "1";
    std::string snr_spec = "0:20:2";
    std::uint64_t seed = 1, trials = 1'000'000, chunk = 65'536;
    double ci = 0.02, tol = 1e-9;
    unsigned workers = 0;
    OutputOpts out;

    auto add_query = [&](CLI::App* cmd, bool with_m = true) {
        cmd->add_option("--M", M, "modulation order (power of 2)");
        cmd->add_option("--n", n, "quantizer bits");
        if (with_m) cmd->add_option("--m", m, "Nakagami shape parameter");
    };
    auto add_query_lists = [&](CLI::App* cmd) {
        cmd->add_option("--M", M, "modulation order (power of 2)");
        cmd->add_option("--n", n_list, "quantizer bits (comma list for one file per value)");
        cmd->add_option("--m", m_list, "Nakagami shape (comma list for one file per value)");
    };
    auto add_grid = [&](CLI::App* cmd) {
        cmd->add_option("--snr-db", snr_spec, "SNR grid in dB: start:stop:step");
    };

    // simulate
    auto* sim = app.add_subcommand("simulate", "Monte Carlo SEP estimation");
    add_query_lists(sim);
    add_grid(sim);
    sim->add_option("--seed", seed, "RNG seed");
    sim->add_option("--trials", trials, "max trials per SNR point");
    sim->add_option("--ci", ci, "relative half-width stopping target");
    sim->add_option("--chunk", chunk, "trials per work unit");
    sim->add_option("--workers", workers, "worker threads (0 = auto)");
    add_output_options(sim, out);

    // analytic
    bool components = false;
    auto* ana = app.add_subcommand("analytic", "SEP by adaptive quadrature");
    add_query_lists(ana);
    add_grid(ana);
    ana->add_option("--tol", tol, "quadrature relative tolerance");
    ana->add_flag("--components", components, "also emit the component integrals");
    add_output_options(ana, out);

    // bounds
    auto* bnd = app.add_subcommand("bounds", "lower/exact/upper SEP rows");
    add_query(bnd);
    add_grid(bnd);
    bnd->add_option("--tol", tol, "quadrature relative tolerance");
    add_output_options(bnd, out);

    // floor
    std::optional<double> pmin;
    auto* flr = app.add_subcommand("floor", "resolution-limited error floor");
    add_query(flr, false);
    flr->add_option("--pmin", pmin, "probability of the least probable symbol (default 1/M)");
    add_output_options(flr, out);

    // dvo
    std::string window = "30:50", in_file, in_method;
    int points = 5;
    auto* dvo = app.add_subcommand("dvo", "diversity-order slope fit vs theory");
    add_query(dvo);
    dvo->add_option("--window-db", window, "fit window lo:hi in dB");
    dvo->add_option("--points", points, "points across the window");
    dvo->add_option("--in", in_file, "fit an existing curve file instead");
    dvo->add_option("--in-method", in_method, "only fit rows with this method tag");
    dvo->add_option("--tol", tol, "quadrature relative tolerance");
    add_output_options(dvo, out);

    // penalty
    std::optional<double> target_sep;
    auto* pen = app.add_subcommand("penalty", "QPSK quantization penalties and asymptotes");
    pen->add_option("--n", n, "quantizer bits (>= 2)");
    add_grid(pen);
    pen->add_option("--target-sep", target_sep, "target SEP for the power penalty (n >= 3)");
    add_output_options(pen, out);

    // detector-table
    double dt_snr = 10.0;
    int grid_points = 360;
    auto* dtb = app.add_subcommand("detector-table", "decision map over channel phases");
    add_query(dtb, false);
    dtb->add_option("--snr", dt_snr, "linear SNR");
    dtb->add_option("--grid-points", grid_points, "channel phase grid size");
    add_output_options(dtb, out);

    // compare
    std::optional<double> m_analytic;
    auto* cmp = app.add_subcommand("compare", "Monte Carlo vs quadrature with z-scores");
    add_query(cmp);
    add_grid(cmp);
    cmp->add_option("--seed", seed, "RNG seed");
    cmp->add_option("--trials", trials, "max trials per SNR point");
    cmp->add_option("--ci", ci, "relative half-width stopping target");
    cmp->add_option("--tol", tol, "quadrature relative tolerance");
    cmp->add_option("--m-analytic", m_analytic,
                    "override the shape parameter on the quadrature side");
    add_output_options(cmp, out);

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed())
            return cmd_simulate(M, parse_int_list(n_list, "--n"),
                                parse_double_list(m_list, "--m"), parse_grid(snr_spec),
                                seed, trials, ci, chunk, workers, out);
        if (ana->parsed())
            return cmd_analytic(M, parse_int_list(n_list, "--n"),
                                parse_double_list(m_list, "--m"), parse_grid(snr_spec),
                                tol, components, out);
        if (bnd->parsed())
            return cmd_bounds(M, n, m, parse_grid(snr_spec), tol, out);
        if (flr->parsed()) return cmd_floor(M, n, pmin, out);
        if (dvo->parsed())
            return cmd_dvo(M, n, m, window, points, in_file, in_method, tol, out);
        if (pen->parsed())
            return cmd_penalty(n, parse_grid(snr_spec), target_sep, out);
        if (dtb->parsed()) return cmd_detector_table(M, n, dt_snr, grid_points, out);
        if (cmp->parsed())
            return cmd_compare(M, n, m, m_analytic, parse_grid(snr_spec), seed, trials,
                               ci, tol, out);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
