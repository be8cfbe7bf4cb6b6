// Acceptance run: one PASS/FAIL line per criterion, nonzero exit when any fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spinmem/analysis/fft.hpp"
#include "spinmem/analysis/fit.hpp"
#include "spinmem/analysis/series.hpp"
#include "spinmem/analysis/spectroscopy.hpp"
#include "spinmem/device.hpp"
#include "spinmem/error.hpp"
#include "spinmem/flux/aswap.hpp"
#include "spinmem/oracle/discretize.hpp"
#include "spinmem/oracle/evolve.hpp"
#include "spinmem/oracle/protocols.hpp"
#include "spinmem/readout/readout.hpp"
#include "spinmem/spectral/protocols.hpp"
#include "spinmem/units.hpp"

using namespace spinmem;
using spectral::GroupLabel;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

bool within(double value, double target, double tol) { return std::abs(value - target) <= tol; }

std::vector<double> grid(double start, double stop, double step) {
    std::vector<double> v;
    const auto n = static_cast<std::size_t>(std::llround((stop - start) / step));
    for (std::size_t k = 0; k <= n; ++k) v.push_back(start + step * static_cast<double>(k));
    return v;
}

struct RabiTrace {
    std::vector<double> t, p;
    double tau_s{0}, tau_r{0}, p_r{0};
    std::vector<analysis::Extremum> maxima;  // after tau_s
};

RabiTrace spectral_rabi(GroupLabel label) {
    const auto dev = HybridDeviceModel::reference();
    const auto& group = dev.group(label);
    RabiTrace r;
    r.t = grid(0.0, ns(500.0), ns(0.5));
    r.p = spectral::rabi_protocol(group, dev.bus_at(group.density.mean_center()), r.t);
    const auto minima = analysis::local_minima(r.t, r.p);
    if (minima.empty()) throw Error(ErrorCode::numerical_instability, "no storage minimum");
    r.tau_s = minima.front().x;
    for (const auto& m : analysis::local_maxima(r.t, r.p)) {
        if (m.x > r.tau_s) r.maxima.push_back(m);
    }
    if (r.maxima.empty()) throw Error(ErrorCode::numerical_instability, "no revival maximum");
    r.tau_r = r.maxima.front().x;
    r.p_r = r.maxima.front().y;
    return r;
}

Outcome storage_retrieval(GroupLabel label, double tau_s, double tol_s, double tau_r, double tol_r) {
    const auto r = spectral_rabi(label);
    const bool ok_s = within(to_ns(r.tau_s), tau_s, tol_s);
    const bool ok_r = within(to_ns(r.tau_r), tau_r, tol_r);
    return {ok_s && ok_r, "tau_s = " + fmt("%.2f", to_ns(r.tau_s)) + " ns (" + (ok_s ? "ok" : "out") + ", " +
                              fmt("%.0f", tau_s) + " +- " + fmt("%.0f", tol_s) + "), tau_r = " +
                              fmt("%.2f", to_ns(r.tau_r)) + " ns (" + (ok_r ? "ok" : "out") + ", " +
                              fmt("%.0f", tau_r) + " +- " + fmt("%.0f", tol_r) + ")"};
}

Outcome criterion1() { return storage_retrieval(GroupLabel::minus_III, 65.0, 5.0, 116.0, 10.0); }
Outcome criterion2() { return storage_retrieval(GroupLabel::minus_I, 97.0, 5.0, 146.0, 10.0); }

// A single exponential through p(0) and the first revival predicts the second
// revival; damping counts as non-exponential when the miss exceeds three times
// the 1e-3 cross-method accuracy of the traces.
Outcome criterion3() {
    bool pass = true;
    std::string detail;
    for (auto [label, target, name] : {std::tuple{GroupLabel::minus_III, 0.14, "III"},
                                       std::tuple{GroupLabel::minus_I, 0.07, "I"}}) {
        const auto r = spectral_rabi(label);
        const double ratio = r.p_r / r.p.front();
        if (r.maxima.size() < 2) throw Error(ErrorCode::numerical_instability, "no second revival");
        const double rate = std::log(r.p.front() / r.p_r) / r.tau_r;
        const double predicted = r.p.front() * std::exp(-rate * r.maxima[1].x);
        const double miss = std::abs(r.maxima[1].y - predicted);
        const bool ok = within(ratio, target, 0.05) && miss > 3.0 * 1e-3;
        pass = pass && ok;
        detail += std::string(detail.empty() ? "" : "; ") + name + ": p(tau_r)/p(0) = " + fmt("%.4f", ratio) +
                  ", second revival " + fmt("%.4f", r.maxima[1].y) + " vs exponential " + fmt("%.4f", predicted);
    }
    return {pass, detail};
}

Outcome criterion4() {
    const auto dev = HybridDeviceModel::reference();
    const auto taus = grid(0.0, ns(400.0), ns(1.0));
    const auto rho = oracle::coherence_protocol(dev, GroupLabel::minus_I, taus);
    std::vector<double> mag;
    for (const auto& c : rho) mag.push_back(std::abs(c));
    const auto minima = analysis::local_minima(taus, mag);
    if (minima.empty()) throw Error(ErrorCode::numerical_instability, "no coherence minimum");
    const double t_s = minima.front().x;
    const double stored = minima.front().y / mag.front();
    analysis::Extremum revival{0, 0.0, 0.0};
    for (const auto& m : analysis::local_maxima(taus, mag)) {
        if (m.x > t_s) {
            revival = m;
            break;
        }
    }
    const double retrieved = revival.y / mag.front();
    const double jump = std::abs(std::remainder(std::arg(rho[revival.index]) - std::arg(rho.front()), two_pi));
    const bool pass = stored < 0.05 && retrieved >= 0.2 * 0.6 && retrieved <= 0.2 * 1.4 && within(jump, pi, 0.3);
    return {pass, "|rho| at " + fmt("%.1f", to_ns(t_s)) + " ns: " + fmt("%.2e", stored) + " of initial; at " +
                      fmt("%.1f", to_ns(revival.x)) + " ns: " + fmt("%.3f", retrieved) + " of initial; phase jump " +
                      fmt("%.3f", jump) + " rad"};
}

Outcome criterion5() {
    const auto dev = HybridDeviceModel::reference();
    const auto& group = dev.group(GroupLabel::minus_I);
    const double delta = mhz(38.0);
    const auto taus = grid(0.0, ns(1997.5), ns(2.5));
    const auto alpha = spectral::ramsey_spectral(group, dev.bus_at(group.density.mean_center() + delta), taus);
    std::vector<double> p;
    for (const auto& a : alpha) p.push_back(std::norm(a));

    const auto full = analysis::magnitude_spectrum(p, ns(2.5));
    analysis::Spectrum band;
    for (std::size_t k = 0; k < full.omega.size(); ++k) {
        if (full.omega[k] <= 0.5 * delta) continue;
        band.omega.push_back(full.omega[k]);
        band.magnitude.push_back(full.magnitude[k]);
    }
    auto peaks = analysis::find_peaks(band, 0.1);
    std::sort(peaks.begin(), peaks.end(), [](const auto& a, const auto& b) { return a.height > b.height; });
    if (peaks.size() > 3) peaks.resize(3);
    std::sort(peaks.begin(), peaks.end(), [](const auto& a, const auto& b) { return a.frequency < b.frequency; });
    bool peaks_ok = peaks.size() == 3;
    std::string located;
    const double expected[3] = {38.0 - 2.3, 38.0, 38.0 + 2.3};
    for (std::size_t i = 0; i < peaks.size(); ++i) {
        const double f = to_mhz(peaks[i].frequency);
        peaks_ok = peaks_ok && within(f, expected[i], 0.3);
        located += (i ? " / " : "") + fmt("%.3f", f);
    }

    // Envelope from the fringe model fitted to the time trace. Frequencies start
    // at the spectral peaks; offset, amplitude and phase enter linearly, so they
    // are solved exactly on a T2* grid and the best point seeds the full fit.
    if (peaks.size() != 3) throw Error(ErrorCode::numerical_instability, "fringe spectrum lacks three peaks");
    const double d0 = peaks[1].frequency;
    const double a0 = 0.5 * (peaks[2].frequency - peaks[0].frequency);
    std::vector<double> start;
    double best = 1e300;
    for (double t2 = ns(20.0); t2 <= ns(1000.0); t2 += ns(5.0)) {
        Eigen::MatrixXd basis(static_cast<Eigen::Index>(p.size()), 3);
        for (std::size_t k = 0; k < p.size(); ++k) {
            double c = 0.0, sn = 0.0;
            for (int i = -1; i <= 1; ++i) {
                c += std::cos((d0 + i * a0) * taus[k]);
                sn += std::sin((d0 + i * a0) * taus[k]);
            }
            const double env = std::exp(-taus[k] / t2);
            basis.row(static_cast<Eigen::Index>(k)) << 1.0, env * c, -env * sn;
        }
        const Eigen::Map<const Eigen::VectorXd> y(p.data(), static_cast<Eigen::Index>(p.size()));
        const Eigen::VectorXd coef = basis.colPivHouseholderQr().solve(y);
        const double cost = (basis * coef - y).squaredNorm();
        if (cost < best) {
            best = cost;
            start = {coef[0], std::hypot(coef[1], coef[2]), d0, a0, t2, std::atan2(coef[2], coef[1])};
        }
    }
    const auto model = analysis::ramsey_fringe_curve();
    const auto fit = analysis::fit_curve(model, taus, p, start,
                                         {{-1.0, 0.0, mhz(30.0), mhz(1.0), ns(10.0), -2.0 * pi},
                                          {2.0, 1.0, mhz(46.0), mhz(4.0), us(5.0), 2.0 * pi}});
    const double t2 = to_ns(fit.params[4]);
    located += " (fit delta " + fmt("%.3f", to_mhz(fit.params[2])) + ", A " + fmt("%.3f", to_mhz(fit.params[3])) + ")";
    const bool envelope_ok = within(t2, 200.0, 50.0);
    return {peaks_ok && envelope_ok, "peaks " + located + " MHz (" + (peaks_ok ? "ok" : "out") +
                                         ", 35.7 / 38 / 40.3 +- 0.3); envelope 1/e " + fmt("%.1f", t2) + " ns (" +
                                         (envelope_ok ? "ok" : "out") + ", 200 +- 50)"};
}

// Probe frequency of the transmission maximum closest to the bus.
double bus_like_peak(std::span<const spectral::EnsembleGroup> groups, const spectral::BusParams& bus) {
    const auto probe = grid(bus.omega_b - mhz(15.0), bus.omega_b + mhz(15.0), mhz(0.01));
    std::vector<double> mag;
    for (double w : probe) mag.push_back(std::abs(analysis::transmission(groups, bus, w)));
    const auto maxima = analysis::local_maxima(probe, mag);
    if (maxima.empty()) throw Error(ErrorCode::numerical_instability, "no transmission peak");
    return std::min_element(maxima.begin(), maxima.end(), [&](const auto& a, const auto& b) {
               return std::abs(a.x - bus.omega_b) < std::abs(b.x - bus.omega_b);
           })->x;
}

// Avoided crossings are located where the bus-like transmission peak jumps
// from below the bare bus frequency to above it while omega_B is scanned. Each
// hyperfine line adds its own jump; jumps closer than 6 MHz belong to one group
// and the group crossing is their median.
Outcome criterion6() {
    const auto dev = HybridDeviceModel::reference();
    std::string detail;
    bool split_ok = true;
    for (const auto& group : dev.groups) {
        const double c = group.density.mean_center();
        const std::vector<spectral::EnsembleGroup> one{group};
        const auto probe = spectral::FrequencyGrid::centered(c, mhz(40.0), mhz(0.005));
        const double split = analysis::vacuum_rabi_splitting(one, dev.bus_at(c), probe);
        const double ratio = split / (2.0 * group.g);
        split_ok = split_ok && within(ratio, 1.0, 0.05);
        detail += std::string(detail.empty() ? "" : ", ") + std::string(spectral::to_string(group.label)) + " " +
                  fmt("%.2f", to_mhz(split)) + "/" + fmt("%.2f", to_mhz(2.0 * group.g));
    }
    detail = "splitting/2g MHz " + detail + (split_ok ? " (ok)" : " (out, 5%)");

    std::vector<double> crossings;
    double prev_w = 0.0, prev_shift = 0.0;
    for (double w : grid(ghz(2.82), ghz(2.93), mhz(0.1))) {
        const double shift = bus_like_peak(dev.groups, dev.bus_at(w)) - w;
        if (prev_w > 0.0 && prev_shift < 0.0 && shift > 0.0) {
            crossings.push_back(prev_w + (w - prev_w) * (-prev_shift) / (shift - prev_shift));
        }
        prev_w = w;
        prev_shift = shift;
    }
    std::vector<std::vector<double>> clusters;
    for (double x : crossings) {
        if (clusters.empty() || x - clusters.back().back() > mhz(6.0)) clusters.emplace_back();
        clusters.back().push_back(x);
    }
    crossings.clear();
    for (const auto& cl : clusters) {
        const auto n = cl.size();
        crossings.push_back(n % 2 ? cl[n / 2] : 0.5 * (cl[n / 2 - 1] + cl[n / 2]));
    }
    const double centers[4] = {2.84, 2.865, 2.89, 2.91};
    bool cross_ok = crossings.size() == 4;
    std::string located;
    for (std::size_t i = 0; i < crossings.size(); ++i) {
        if (i < 4) cross_ok = cross_ok && within(to_ghz(crossings[i]), centers[i], 1e-3);
        located += (i ? " / " : "") + fmt("%.4f", to_ghz(crossings[i]));
    }
    detail += "; crossings " + located + " GHz" + (cross_ok ? " (ok)" : " (out, 1 MHz)");

    const flux::QubitBusPair pair{dev.qubit.omega_q, dev.qubit.g_q};
    double gap = 1e300;
    for (double w : grid(ghz(2.55), ghz(2.66), mhz(0.01))) {
        const auto [lo, hi] = analysis::qubit_bus_anticrossing(pair, w);
        gap = std::min(gap, hi - lo);
    }
    const bool gap_ok = within(to_mhz(gap), 14.4, 0.1);
    detail += "; qubit gap " + fmt("%.3f", to_mhz(gap)) + " MHz" + (gap_ok ? " (ok)" : " (out)");
    return {split_ok && cross_ok && gap_ok, detail};
}

Outcome criterion7() {
    const auto dev = HybridDeviceModel::reference();
    const flux::QubitBusPair pair{dev.qubit.omega_q, dev.qubit.g_q};
    const auto schedule = flux::reference_aswap_schedule();
    const double slow = flux::simulate_sweep(pair, schedule, ns(0.05)).transfer;
    const double fast = flux::simulate_sweep(pair, schedule.sped_up(10.0), ns(0.05)).transfer;
    const double t_swap = to_ns(flux::resonant_swap_time(pair));
    const bool ok_slow = slow >= 0.99, ok_fast = fast < 0.9, ok_swap = within(t_swap, 34.7, 0.05);
    return {ok_slow && ok_fast && ok_swap,
            "450 ns transfer " + fmt("%.5f", slow) + (ok_slow ? " (ok)" : " (out, >= 0.99)") + ", 45 ns transfer " +
                fmt("%.5f", fast) + (ok_fast ? " (ok)" : " (out, < 0.9)") + ", swap time " + fmt("%.3f", t_swap) +
                " ns" + (ok_swap ? " (ok)" : " (out)")};
}

Outcome criterion8() {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const readout::ReadoutErrorModel truth{0.3 * u(rng), 0.5 * u(rng), 0.45 * u(rng)};
        const auto fit = readout::calibrate(readout::switching_probability(truth, truth.p_eq),
                                            readout::switching_probability(truth, 1.0 - truth.p_eq), truth.p_eq);
        worst = std::max({worst, std::abs(fit.e0 - truth.e0), std::abs(fit.e1 - truth.e1)});
    }
    double worst_published = 0.0;
    for (double e1 : {0.1, 0.33}) {
        const readout::ReadoutErrorModel truth{0.0, e1, 0.08};
        const auto fit = readout::calibrate(readout::switching_probability(truth, 0.08),
                                            readout::switching_probability(truth, 0.92), 0.08);
        worst_published = std::max({worst_published, std::abs(fit.e0), std::abs(fit.e1 - e1)});
    }
    // "Exactly" is read as agreement to a few ulps of the inputs.
    return {worst < 1e-12 && worst_published <= 1e-15,
            "random draws max error " + fmt("%.1e", worst) + ", published sets max error " + fmt("%.1e", worst_published)};
}

Outcome criterion9() {
    const auto dev = HybridDeviceModel::reference();
    const auto t = grid(0.0, ns(500.0), ns(0.5));
    std::string detail;
    bool pass = true;
    for (auto label : {GroupLabel::minus_III, GroupLabel::minus_I}) {
        const auto& group = dev.group(label);
        const auto a = spectral::rabi_protocol(group, dev.bus_at(group.density.mean_center()), t);
        const auto b = oracle::storage_retrieval_protocol(dev, label, t);
        double worst = 0.0;
        for (std::size_t k = 0; k < t.size(); ++k) worst = std::max(worst, std::abs(a[k] - b[k]));
        pass = pass && worst < 1e-3;
        detail += std::string(spectral::to_string(label)) + " max diff " + fmt("%.2e", worst) + "; ";
    }

    const auto& group = dev.group(GroupLabel::minus_I);
    const double c = group.density.mean_center();
    const auto ens = oracle::discretize(group, 2401, mhz(120.0));
    const auto end = oracle::evolve(oracle::StateVector::bus_photon(ens.size(), c), ens, {c, 0.0}, us(1.0), ns(0.1));
    const double drift = std::abs(end.norm_squared() - 1.0);
    pass = pass && drift < 1e-9;
    detail += "norm drift " + fmt("%.1e", drift) + " per us; ";

    // A line much narrower than 1 / 500 ns with a lossless bus.
    const spectral::EnsembleGroup sharp{GroupLabel::minus_I, group.g, spectral::make_single_line(c, mhz(1e-4)), 0.0};
    const auto p = spectral::rabi_protocol(sharp, {c, 0.0}, t);
    const auto single = oracle::discretize(sharp, 1, mhz(1.0));
    auto x = oracle::StateVector::bus_photon(1, c);
    double worst_s = 0.0, worst_o = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k) {
        if (k > 0) x = oracle::evolve(x, single, {c, 0.0}, t[k] - t[k - 1], ns(0.1));
        const double expected = std::pow(std::cos(group.g * t[k]), 2);
        worst_s = std::max(worst_s, std::abs(p[k] - expected));
        worst_o = std::max(worst_o, std::abs(x.bus_population() - expected));
    }
    pass = pass && worst_s < 1e-3 && worst_o < 1e-3;
    detail += "cos^2 limit max diff " + fmt("%.1e", worst_s) + " (spectral), " + fmt("%.1e", worst_o) + " (ode)";
    return {pass, detail};
}

// Rabi data from the ODE simulator, fitted with the spectral model over the
// hyperfine linewidth alone.
Outcome criterion10() {
    const auto dev = HybridDeviceModel::reference();
    const auto& group = dev.group(GroupLabel::minus_I);
    const auto t = grid(0.0, ns(500.0), ns(2.5));
    const auto data = oracle::storage_retrieval_protocol(dev, GroupLabel::minus_I, t);
    const double c = group.density.mean_center();
    const auto model = analysis::rabi_linewidth_curve(GroupLabel::minus_I, c, group.g, mhz(2.3), dev.bus_at(c));
    const auto fit = analysis::fit_curve(model, t, data, {mhz(1.0)}, {{mhz(0.1)}, {mhz(5.0)}});
    const double fwhm = to_mhz(fit.params[0]);
    return {within(fwhm, 1.6, 0.1), "recovered linewidth " + fmt("%.4f", fwhm) + " MHz (1.6 +- 0.1)"};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"storage/retrieval, group III", criterion1},
        {"storage/retrieval, group I", criterion2},
        {"retrieval fidelity and non-exponential damping", criterion3},
        {"coherence storage and retrieval", criterion4},
        {"Ramsey spectrum and envelope", criterion5},
        {"spectroscopy", criterion6},
        {"adiabatic swap", criterion7},
        {"readout calibration", criterion8},
        {"cross-method gate", criterion9},
        {"linewidth recovery", criterion10},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        if (!o.pass) ++failed;
        std::printf("criterion %2zu %s  %s: %s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria failed\n", failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
