#include "spinmem/cli/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>

#include "spinmem/analysis/fft.hpp"
#include "spinmem/analysis/series.hpp"
#include "spinmem/analysis/spectroscopy.hpp"
#include "spinmem/error.hpp"
#include "spinmem/flux/aswap.hpp"
#include "spinmem/oracle/protocols.hpp"
#include "spinmem/parallel.hpp"
#include "spinmem/readout/readout.hpp"
#include "spinmem/spectral/protocols.hpp"

namespace spinmem::cli {

namespace fs = std::filesystem;
using spectral::GroupLabel;

void Table::write(const fs::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::io, "cannot write " + path.string());
    for (const auto& c : comments) out << "# " << c << '\n';
    out << "# grid_columns: " << grid_columns << '\n';
    for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "\t" : "") << columns[i];
    out << '\n';
    char buf[40];
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.16e", row[i]);
            out << (i ? "\t" : "") << buf;
        }
        out << '\n';
    }
    if (!out) throw Error(ErrorCode::io, "write failed for " + path.string());
}

Table Table::read(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::io, "cannot read " + path.string());
    Table t;
    std::string line;
    bool header = false;
    while (std::getline(in, line)) {
        if (line.rfind("# ", 0) == 0) {
            const std::string body = line.substr(2);
            if (body.rfind("grid_columns: ", 0) == 0) {
                t.grid_columns = std::stoul(body.substr(14));
            } else {
                t.comments.push_back(body);
            }
            continue;
        }
        std::istringstream ss(line);
        std::string cell;
        if (!header) {
            while (std::getline(ss, cell, '\t')) t.columns.push_back(cell);
            header = true;
            continue;
        }
        std::vector<double> row;
        while (std::getline(ss, cell, '\t')) row.push_back(std::strtod(cell.c_str(), nullptr));
        if (row.size() != t.columns.size()) {
            throw Error(ErrorCode::schema_mismatch, "row width differs from the header in " + path.string());
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

namespace {

std::vector<double> to_seconds(const std::vector<double>& ns_values) {
    std::vector<double> s(ns_values.size());
    std::transform(ns_values.begin(), ns_values.end(), s.begin(), [](double v) { return ns(v); });
    return s;
}

std::vector<double> to_rad(const std::vector<double>& ghz_values) {
    std::vector<double> s(ghz_values.size());
    std::transform(ghz_values.begin(), ghz_values.end(), s.begin(), [](double v) { return ghz(v); });
    return s;
}

std::string fixed(double v, int digits = 3) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

GroupLabel label_of(const std::string& text) { return *spectral::parse_group_label(text); }

spectral::SpectralNumerics spectral_numerics(const NumericsConfig& n) {
    return {mhz(n.grid_span_mhz), mhz(n.grid_spacing_mhz), std::nullopt};
}

oracle::OracleNumerics oracle_numerics(const NumericsConfig& n) {
    return {n.n_spins, mhz(n.oracle_span_mhz), ns(n.dt_ns)};
}

std::vector<std::string> series_columns(Method m, const std::string& single) {
    if (m == Method::both) return {"p_spectral", "p_oracle"};
    return {single};
}

void add_extrema_comments(Table& t, const std::vector<double>& taus_ns, const std::vector<double>& p) {
    const auto minima = analysis::local_minima(taus_ns, p);
    const auto maxima = analysis::local_maxima(taus_ns, p);
    if (!minima.empty()) t.comments.push_back("first_minimum_ns: " + fixed(minima.front().x, 2));
    if (!maxima.empty()) {
        t.comments.push_back("first_revival_ns: " + fixed(maxima.front().x, 2));
        if (!p.empty() && p.front() > 0.0) {
            t.comments.push_back("revival_ratio: " + fixed(maxima.front().y / p.front(), 4));
        }
    }
}

struct Context {
    const ExperimentConfig& config;
    HybridDeviceModel device;
    Method method;
    fs::path out;
    unsigned jobs;
    std::vector<std::string> outputs;

    void emit(const std::string& name, Table& table) {
        table.comments.insert(table.comments.begin(),
                              {std::string("spinmem ") + tool_version,
                               "experiment: " + std::string(experiment_name(config.experiment)),
                               "method: " + std::string(to_string(method))});
        table.write(out / name);
        outputs.push_back(name);
    }
};

void run_rabi(Context& ctx, const RabiExperiment& e) {
    const auto label = label_of(e.group);
    const auto& group = ctx.device.group(label);
    const double omega_b = group.density.mean_center() + mhz(e.bus_detuning_mhz);
    const auto taus_ns = e.tau_ns.values();
    const auto taus = to_seconds(taus_ns);
    std::vector<std::vector<double>> series;
    if (ctx.method != Method::oracle) {
        series.push_back(spectral::rabi_protocol(group, ctx.device.bus_at(omega_b), taus,
                                                 spectral_numerics(ctx.config.numerics)));
    }
    if (ctx.method != Method::spectral) {
        series.push_back(oracle::detuned_storage_retrieval(ctx.device, label, omega_b, taus,
                                                           oracle_numerics(ctx.config.numerics)));
    }
    Table t;
    t.comments.push_back("group: " + e.group);
    t.comments.push_back("bus_ghz: " + fixed(to_ghz(omega_b), 6));
    add_extrema_comments(t, taus_ns, series.front());
    t.columns = {"tau_ns"};
    for (auto& c : series_columns(ctx.method, "p_e")) t.columns.push_back(c);
    for (std::size_t k = 0; k < taus.size(); ++k) {
        std::vector<double> row{taus_ns[k]};
        for (const auto& s : series) row.push_back(s[k]);
        t.rows.push_back(std::move(row));
    }
    ctx.emit("rabi.dat", t);
}

void run_chevron(Context& ctx, const ChevronExperiment& e) {
    const auto bus_ghz = e.bus_ghz.values();
    const auto omegas = to_rad(bus_ghz);
    const auto taus_ns = e.tau_ns.values();
    const auto taus = to_seconds(taus_ns);
    const auto on = oracle_numerics(ctx.config.numerics);
    std::vector<std::vector<double>> maps;
    if (ctx.method != Method::oracle) {
        const auto& group = ctx.device.group(label_of(e.group));
        std::vector<double> p(omegas.size() * taus.size());
        for (double w : omegas) {
            if (w < ctx.device.bus.omega_min || w > ctx.device.bus.omega_max) {
                throw Error(ErrorCode::out_of_range, "bus frequency outside the tuning range");
            }
        }
        const auto sn = spectral_numerics(ctx.config.numerics);
        parallel_for(omegas.size(), ctx.jobs, [&](std::size_t i) {
            const auto col = spectral::rabi_protocol(group, ctx.device.bus_at(omegas[i]), taus, sn);
            std::copy(col.begin(), col.end(), p.begin() + static_cast<std::ptrdiff_t>(i * taus.size()));
        });
        maps.push_back(std::move(p));
    }
    if (ctx.method != Method::spectral) {
        const auto map = e.group == "all"
                             ? oracle::chevron_scan_all_groups(ctx.device, omegas, taus, on, ctx.jobs)
                             : oracle::chevron_scan(ctx.device, label_of(e.group), omegas, taus, on, ctx.jobs);
        maps.push_back(map.p);
    }
    Table t;
    t.comments.push_back("group: " + e.group);
    t.grid_columns = 2;
    t.columns = {"bus_ghz", "tau_ns"};
    for (auto& c : series_columns(ctx.method, "p_e")) t.columns.push_back(c);
    for (std::size_t i = 0; i < omegas.size(); ++i) {
        for (std::size_t k = 0; k < taus.size(); ++k) {
            std::vector<double> row{bus_ghz[i], taus_ns[k]};
            for (const auto& m : maps) row.push_back(m[i * taus.size() + k]);
            t.rows.push_back(std::move(row));
        }
    }
    ctx.emit("chevron.dat", t);
}

void run_coherence(Context& ctx, const CoherenceExperiment& e) {
    const auto taus_ns = e.tau_ns.values();
    const auto rho = oracle::coherence_protocol(ctx.device, label_of(e.group), to_seconds(taus_ns),
                                                oracle_numerics(ctx.config.numerics));
    Table t;
    t.comments.push_back("group: " + e.group);
    t.comments.push_back("rho_ge in the frame rotating at the group frequency; rho_ge(0) = 1/2");
    t.columns = {"tau_ns", "rho_abs", "rho_phase_rad"};
    for (std::size_t k = 0; k < taus_ns.size(); ++k) t.rows.push_back({taus_ns[k], std::abs(rho[k]), std::arg(rho[k])});
    ctx.emit("coherence.dat", t);
}

void run_ramsey(Context& ctx, const RamseyExperiment& e) {
    const auto label = label_of(e.group);
    const auto& group = ctx.device.group(label);
    const double delta = mhz(e.delta_mhz);
    const auto taus_ns = e.tau_ns.values();
    const auto taus = to_seconds(taus_ns);
    const auto on = oracle_numerics(ctx.config.numerics);

    std::vector<std::vector<double>> series;
    std::vector<std::string> names;
    Table t;
    t.comments.push_back("group: " + e.group);
    t.comments.push_back("delta_mhz: " + fixed(e.delta_mhz, 6));
    if (ctx.method != Method::oracle) {
        const auto a = spectral::ramsey_spectral(group, ctx.device.bus_at(group.density.mean_center() + delta), taus,
                                                 spectral_numerics(ctx.config.numerics));
        std::vector<double> p(a.size());
        std::transform(a.begin(), a.end(), p.begin(), [](Complex v) { return std::norm(v); });
        series.push_back(std::move(p));
        names.push_back("spectral");
        t.comments.push_back("spectral: instantaneous pi/2 pulses");
    }
    if (ctx.method != Method::spectral) {
        const double tau_half = e.tau_half_ns ? ns(*e.tau_half_ns) : 0.5 * oracle::storage_time(ctx.device, label, on);
        series.push_back(oracle::ramsey_protocol(ctx.device, label, delta, taus, tau_half, on));
        names.push_back("oracle");
        t.comments.push_back("oracle: resonant half swaps of " + fixed(to_ns(tau_half), 3) + " ns");
    }
    t.columns = {"tau_ns"};
    for (auto& c : series_columns(ctx.method, "p_e")) t.columns.push_back(c);
    for (std::size_t k = 0; k < taus.size(); ++k) {
        std::vector<double> row{taus_ns[k]};
        for (const auto& s : series) row.push_back(s[k]);
        t.rows.push_back(std::move(row));
    }
    ctx.emit("ramsey.dat", t);

    analysis::SpectrumOptions opt;
    opt.window = e.window == "hann" ? analysis::Window::hann : analysis::Window::rectangular;
    Table spec;
    spec.comments.push_back("window: " + e.window);
    std::vector<analysis::Spectrum> spectra;
    for (std::size_t s = 0; s < series.size(); ++s) {
        spectra.push_back(analysis::magnitude_spectrum(series[s], ns(e.tau_ns.step), opt));
        std::string peaks = "peaks_mhz_" + names[s] + ":";
        // The slow beat of |alpha|^2 dominates near zero frequency; search the fringe band only.
        analysis::Spectrum band;
        for (std::size_t k = 0; k < spectra.back().omega.size(); ++k) {
            if (spectra.back().omega[k] <= 0.5 * std::abs(delta)) continue;
            band.omega.push_back(spectra.back().omega[k]);
            band.magnitude.push_back(spectra.back().magnitude[k]);
        }
        for (const auto& pk : analysis::find_peaks(band, opt.threshold)) {
            peaks += " " + fixed(to_mhz(pk.frequency), 3);
        }
        spec.comments.push_back(peaks);
    }
    spec.columns = {"frequency_mhz"};
    for (auto& c : series_columns(ctx.method, "magnitude")) {
        spec.columns.push_back(c == "p_spectral" ? "magnitude_spectral" : c == "p_oracle" ? "magnitude_oracle" : c);
    }
    for (std::size_t k = 0; k < spectra.front().omega.size(); ++k) {
        std::vector<double> row{to_mhz(spectra.front().omega[k])};
        for (const auto& s : spectra) row.push_back(s.magnitude[k]);
        spec.rows.push_back(std::move(row));
    }
    ctx.emit("ramsey_spectrum.dat", spec);
}

void run_spectroscopy(Context& ctx, const SpectroscopyExperiment& e) {
    const auto bus_ghz = e.bus_ghz.values();
    const auto probe_ghz = e.probe_ghz.values();
    const spectral::FrequencyGrid probe{ghz(e.probe_ghz.start), ghz(e.probe_ghz.step), probe_ghz.size()};
    std::vector<std::vector<double>> db(bus_ghz.size());
    parallel_for(bus_ghz.size(), ctx.jobs, [&](std::size_t i) {
        db[i] = analysis::transmission_spectrum(ctx.device.groups, ctx.device.bus_at(ghz(bus_ghz[i])), probe).s21_db;
    });
    Table t;
    for (const auto& g : ctx.device.groups) {
        if (!(g.g > 0.0)) continue;
        const double c = g.density.mean_center();
        const auto grid = spectral::FrequencyGrid::centered(c, 8.0 * g.g + 20.0 * g.density.max_fwhm(), mhz(0.002));
        const double split = analysis::vacuum_rabi_splitting(std::span(&g, 1), ctx.device.bus_at(c), grid);
        t.comments.push_back("vacuum_rabi_splitting_mhz " + std::string(spectral::to_string(g.label)) + ": " +
                             fixed(to_mhz(split), 3) + " (2g = " + fixed(2.0 * to_mhz(g.g), 3) + ")");
    }
    t.grid_columns = 2;
    t.columns = {"bus_ghz", "probe_ghz", "s21_db"};
    for (std::size_t i = 0; i < bus_ghz.size(); ++i) {
        for (std::size_t k = 0; k < probe_ghz.size(); ++k) {
            t.rows.push_back({bus_ghz[i], to_ghz(probe.at(k)), db[i][k]});
        }
    }
    ctx.emit("spectroscopy.dat", t);

    const flux::QubitBusPair pair{ctx.device.qubit.omega_q, ctx.device.qubit.g_q};
    Table q;
    const auto [lo0, hi0] = analysis::qubit_bus_anticrossing(pair, pair.omega_q);
    q.comments.push_back("minimum_gap_mhz: " + fixed(to_mhz(hi0 - lo0), 4));
    q.columns = {"bus_ghz", "lower_ghz", "upper_ghz"};
    for (double b : e.qubit_bus_ghz.values()) {
        const auto [lo, hi] = analysis::qubit_bus_anticrossing(pair, ghz(b));
        q.rows.push_back({b, to_ghz(lo), to_ghz(hi)});
    }
    ctx.emit("spectroscopy_qubit.dat", q);
}

void run_aswap(Context& ctx, const AswapExperiment& e) {
    std::vector<oracle::FluxSegment> segments;
    for (const auto& [target, duration] : e.segments) segments.push_back({ghz(target), ns(duration)});
    const oracle::FluxSchedule schedule(ghz(e.start_ghz), segments);
    schedule.check_range(ctx.device.bus.omega_min, ctx.device.bus.omega_max);
    const flux::QubitBusPair pair{ctx.device.qubit.omega_q, ctx.device.qubit.g_q};
    const double dt = std::min(ns(ctx.config.numerics.dt_ns), ns(0.1));

    Table t;
    t.comments.push_back("resonant_swap_time_ns: " + fixed(to_ns(flux::resonant_swap_time(pair)), 3));
    t.columns = {"speedup", "duration_ns", "transfer", "norm_drift", "lz_probability"};
    std::vector<std::vector<double>> rows(e.speedups.size());
    parallel_for(e.speedups.size(), ctx.jobs, [&](std::size_t i) {
        const auto s = schedule.sped_up(e.speedups[i]);
        const auto r = flux::simulate_sweep(pair, s, dt);
        // Landau-Zener estimate from the ramp that crosses the qubit frequency.
        double lz = 0.0;
        double t0 = 0.0, w0 = s.initial();
        for (const auto& seg : s.segments()) {
            if ((w0 - pair.omega_q) * (seg.target - pair.omega_q) <= 0.0 && seg.target != w0) {
                lz = flux::landau_zener_probability(pair, std::abs(s.slope_at(t0 + 0.5 * seg.duration)));
            }
            t0 += seg.duration;
            w0 = seg.target;
        }
        rows[i] = {e.speedups[i], to_ns(s.duration()), r.transfer, r.norm_drift, lz};
    });
    t.rows = std::move(rows);
    ctx.emit("aswap.dat", t);
}

void run_readout(Context& ctx, const ReadoutExperiment& e) {
    const double p_eq = e.p_eq.value_or(ctx.device.qubit.p_eq);
    const auto m = readout::calibrate(e.p_sw0, e.p_sw_pi, p_eq);
    Table t;
    t.grid_columns = 0;
    t.columns = {"e0", "e1", "p_eq"};
    t.rows.push_back({m.e0, m.e1, m.p_eq});
    ctx.emit("calibrate-readout.dat", t);
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

RunManifest run(const ExperimentConfig& config, const fs::path& out_dir, unsigned jobs) {
    const auto started = std::chrono::steady_clock::now();
    fs::create_directories(out_dir);
    Context ctx{config, config.device.build(), config.method(), out_dir, std::max(1u, jobs), {}};
    const std::string name(experiment_name(config.experiment));
    try {
        std::visit(
            [&](const auto& e) {
                using T = std::decay_t<decltype(e)>;
                if constexpr (std::is_same_v<T, RabiExperiment>) run_rabi(ctx, e);
                else if constexpr (std::is_same_v<T, ChevronExperiment>) run_chevron(ctx, e);
                else if constexpr (std::is_same_v<T, CoherenceExperiment>) run_coherence(ctx, e);
                else if constexpr (std::is_same_v<T, RamseyExperiment>) run_ramsey(ctx, e);
                else if constexpr (std::is_same_v<T, SpectroscopyExperiment>) run_spectroscopy(ctx, e);
                else if constexpr (std::is_same_v<T, AswapExperiment>) run_aswap(ctx, e);
                else run_readout(ctx, e);
            },
            config.experiment);
    } catch (const Error& err) {
        throw Error(err.code(), "experiment " + name + ": " + err.detail());
    }

    RunManifest m;
    m.config_hash = config_hash(config);
    m.version = tool_version;
    m.timestamp = utc_timestamp();
    m.outputs = ctx.outputs;
    m.config = to_json(config);
    m.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    const nlohmann::json j = {{"config_hash", m.config_hash}, {"version", m.version}, {"timestamp", m.timestamp},
                              {"outputs", m.outputs},         {"wall_seconds", m.wall_seconds},
                              {"config", m.config}};
    std::ofstream out(out_dir / "manifest.json", std::ios::binary);
    if (!out) throw Error(ErrorCode::io, "cannot write manifest");
    out << j.dump(2) << '\n';
    return m;
}

bool CompareReport::passed() const {
    return std::all_of(columns.begin(), columns.end(), [&](const ColumnDiff& c) { return c.max_abs_diff <= tolerance; });
}

std::string CompareReport::text() const {
    std::ostringstream out;
    char buf[64];
    for (const auto& c : columns) {
        std::snprintf(buf, sizeof buf, "%.3e", c.max_abs_diff);
        out << c.file << '\t' << c.column << '\t' << buf << '\t' << (c.max_abs_diff <= tolerance ? "ok" : "FAIL") << '\n';
    }
    std::snprintf(buf, sizeof buf, "%.3e", tolerance);
    out << (passed() ? "PASS" : "FAIL") << " (tolerance " << buf << ")\n";
    return out.str();
}

CompareReport compare(const fs::path& a, const fs::path& b, double tolerance) {
    auto data_files = [](const fs::path& dir) {
        if (!fs::is_directory(dir)) throw Error(ErrorCode::io, "not a run directory: " + dir.string());
        std::set<std::string> names;
        for (const auto& entry : fs::directory_iterator(dir)) {
            if (entry.path().extension() == ".dat") names.insert(entry.path().filename().string());
        }
        return names;
    };
    const auto fa = data_files(a), fb = data_files(b);
    if (fa != fb) throw Error(ErrorCode::schema_mismatch, "runs produced different data files");
    if (fa.empty()) throw Error(ErrorCode::schema_mismatch, "no data files to compare");

    CompareReport report{{}, tolerance};
    for (const auto& name : fa) {
        const auto ta = Table::read(a / name), tb = Table::read(b / name);
        if (ta.columns != tb.columns || ta.grid_columns != tb.grid_columns) {
            throw Error(ErrorCode::schema_mismatch, name + ": column schemas differ");
        }
        if (ta.rows.size() != tb.rows.size()) throw Error(ErrorCode::schema_mismatch, name + ": row counts differ");
        for (std::size_t r = 0; r < ta.rows.size(); ++r) {
            for (std::size_t c = 0; c < ta.grid_columns; ++c) {
                const double x = ta.rows[r][c], y = tb.rows[r][c];
                if (std::abs(x - y) > 1e-12 * std::max(1.0, std::abs(x))) {
                    throw Error(ErrorCode::schema_mismatch, name + ": grids differ in column " + ta.columns[c]);
                }
            }
        }
        for (std::size_t c = ta.grid_columns; c < ta.columns.size(); ++c) {
            double worst = 0.0;
            for (std::size_t r = 0; r < ta.rows.size(); ++r) worst = std::max(worst, std::abs(ta.rows[r][c] - tb.rows[r][c]));
            report.columns.push_back({name, ta.columns[c], worst});
        }
    }
    return report;
}

const std::vector<CatalogEntry>& experiment_catalog() {
    static const std::vector<CatalogEntry> catalog{
        {"rabi", "Fig. 2b", "group, tau_ns", "storage and retrieval p(tau) with the bus tuned to one spin group"},
        {"chevron", "Fig. 2c", "group, bus_ghz, tau_ns", "p(omega_B, tau) map around a spin group (group: all couples every group)"},
        {"coherence", "Fig. 3c", "group, tau_ns", "|rho_ge| and phase after storing a qubit superposition"},
        {"ramsey", "Fig. 4b", "group, delta_mhz, tau_ns", "single-photon Ramsey fringes and their spectrum"},
        {"spectroscopy", "Fig. 1c", "bus_ghz, probe_ghz", "bus transmission |S21| and the qubit/bus anticrossing"},
        {"aswap", "Fig. S5", "start_ghz, segments, speedups", "adiabatic qubit-to-bus transfer for a piecewise-linear sweep"},
        {"calibrate-readout", "Suppl. readout", "p_sw0, p_sw_pi", "readout errors e0, e1 from switching probabilities"},
    };
    return catalog;
}

std::string list_experiments() {
    std::ostringstream out;
    for (const auto& e : experiment_catalog()) {
        out << e.name << "\t[" << e.figure << "]\tfields: " << e.required << "\n    " << e.description << '\n';
    }
    return out.str();
}

}  // namespace spinmem::cli
