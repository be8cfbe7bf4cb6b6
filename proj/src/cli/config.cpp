#include "spinmem/cli/config.hpp"

#include <openssl/evp.h>
#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "spinmem/error.hpp"

namespace spinmem::cli {

using nlohmann::json;

std::string_view to_string(Method m) noexcept {
    switch (m) {
        case Method::spectral: return "spectral";
        case Method::oracle: return "oracle";
        case Method::both: return "both";
    }
    return "spectral";
}

std::vector<double> Range::values() const {
    const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 0.5 + 1e-9)) + 1;
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = start + step * static_cast<double>(i);
    return v;
}

std::string_view experiment_name(const Experiment& e) noexcept {
    constexpr std::string_view names[] = {"rabi", "chevron", "coherence", "ramsey",
                                          "spectroscopy", "aswap", "calibrate-readout"};
    return names[e.index()];
}

HybridDeviceModel DeviceConfig::build() const {
    HybridDeviceModel dev;
    dev.qubit = {ghz(qubit_ghz), mhz(qubit_coupling_mhz), p_eq};
    dev.bus = {ghz(bus_max_ghz), ghz(bus_min_ghz), t_cav_us > 0.0 ? 1.0 / us(t_cav_us) : 0.0};
    for (const auto& g : groups) {
        const auto label = spectral::parse_group_label(g.label);
        if (!label) throw Error(ErrorCode::validation, "device.groups: unknown label " + g.label);
        dev.groups.push_back(make_hyperfine_group({*label, ghz(g.center_ghz), mhz(g.coupling_mhz), mhz(g.fwhm_mhz)},
                                                  mhz(hf_splitting_mhz), gamma0_per_us * 1e6));
    }
    dev.validate();
    return dev;
}

namespace {

[[noreturn]] void invalid(const std::string& field, const std::string& what, const YAML::Mark* mark = nullptr) {
    std::string msg = field + ": " + what;
    if (mark && mark->line >= 0) {
        msg += " (line " + std::to_string(mark->line + 1) + ", column " + std::to_string(mark->column + 1) + ")";
    }
    throw Error(ErrorCode::validation, msg);
}

// A YAML mapping read field by field; unread keys are reported as unknown.
class Section {
public:
    Section(YAML::Node node, std::string path) : node_(std::move(node)), path_(std::move(path)) {
        if (node_ && !node_.IsNull() && !node_.IsMap()) {
            const auto mark = node_.Mark();
            invalid(path_, "expected a mapping", &mark);
        }
    }

    bool has(const std::string& key) const { return node_ && node_.IsMap() && node_[key]; }
    std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    std::optional<YAML::Node> get(const std::string& key) {
        used_.insert(key);
        if (!has(key)) return std::nullopt;
        return node_[key];
    }

    void number(const std::string& key, double& out) {
        const auto n = get(key);
        if (!n) return;
        const auto mark = n->Mark();
        try {
            if (!n->IsScalar()) throw YAML::Exception(mark, "");
            out = n->as<double>();
        } catch (const YAML::Exception&) {
            invalid(field(key), "expected a number", &mark);
        }
        if (!std::isfinite(out)) invalid(field(key), "must be finite", &mark);
    }

    void optional_number(const std::string& key, std::optional<double>& out) {
        if (!has(key)) {
            used_.insert(key);
            return;
        }
        double v = 0.0;
        number(key, v);
        out = v;
    }

    void count(const std::string& key, std::size_t& out) {
        if (!has(key)) return;
        const auto mark = node_[key].Mark();
        double v = 0.0;
        number(key, v);
        if (v < 0.0 || v != std::floor(v)) invalid(field(key), "expected a non-negative integer", &mark);
        out = static_cast<std::size_t>(v);
    }

    void text(const std::string& key, std::string& out) {
        const auto n = get(key);
        if (!n) return;
        const auto mark = n->Mark();
        if (!n->IsScalar()) invalid(field(key), "expected a string", &mark);
        out = n->Scalar();
    }

    YAML::Mark mark(const std::string& key) const { return has(key) ? node_[key].Mark() : node_.Mark(); }

    void finish() const {
        if (!node_ || !node_.IsMap()) return;
        for (const auto& kv : node_) {
            const auto key = kv.first.Scalar();
            if (!used_.count(key)) {
                const auto mark = kv.first.Mark();
                invalid(field(key), "unknown field", &mark);
            }
        }
    }

private:
    YAML::Node node_;
    std::string path_;
    std::set<std::string> used_;
};

void read_range(Section& parent, const std::string& key, Range& r) {
    const auto node = parent.get(key);
    if (!node) return;
    Section s(*node, parent.field(key));
    s.number("start", r.start);
    s.number("stop", r.stop);
    s.number("step", r.step);
    s.finish();
    const auto mark = node->Mark();
    if (!(r.step > 0.0)) invalid(parent.field(key) + ".step", "must be positive", &mark);
    if (r.stop < r.start) invalid(parent.field(key) + ".stop", "must not be below start", &mark);
    if ((r.stop - r.start) / r.step > 5e6) invalid(parent.field(key), "grid has too many points", &mark);
}

void require(bool ok, const std::string& field, const std::string& what) {
    if (!ok) invalid(field, what);
}

void read_device(Section& root, DeviceConfig& d) {
    Section s(root.get("device").value_or(YAML::Node()), "device");
    s.number("qubit_ghz", d.qubit_ghz);
    s.number("qubit_coupling_mhz", d.qubit_coupling_mhz);
    s.number("p_eq", d.p_eq);
    s.number("bus_max_ghz", d.bus_max_ghz);
    s.number("bus_min_ghz", d.bus_min_ghz);
    s.number("t_cav_us", d.t_cav_us);
    s.number("hf_splitting_mhz", d.hf_splitting_mhz);
    s.number("gamma0_per_us", d.gamma0_per_us);
    if (const auto found = s.get("groups")) {
        const YAML::Node groups = *found;
        const auto mark = groups.Mark();
        if (!groups.IsSequence() || groups.size() == 0) invalid("device.groups", "expected a non-empty list", &mark);
        d.groups.clear();
        for (std::size_t i = 0; i < groups.size(); ++i) {
            const std::string path = "device.groups[" + std::to_string(i) + "]";
            Section g(groups[i], path);
            GroupConfig gc;
            g.text("label", gc.label);
            g.number("center_ghz", gc.center_ghz);
            g.number("coupling_mhz", gc.coupling_mhz);
            g.number("fwhm_mhz", gc.fwhm_mhz);
            g.finish();
            const auto gmark = groups[i].Mark();
            if (!spectral::parse_group_label(gc.label)) invalid(path + ".label", "expected -I, +I, -III or +III", &gmark);
            if (!(gc.center_ghz > 0.0)) invalid(path + ".center_ghz", "must be positive", &gmark);
            if (!(gc.coupling_mhz >= 0.0)) invalid(path + ".coupling_mhz", "must be >= 0", &gmark);
            if (!(gc.fwhm_mhz > 0.0)) invalid(path + ".fwhm_mhz", "must be positive", &gmark);
            for (const auto& other : d.groups) {
                if (spectral::parse_group_label(other.label) == spectral::parse_group_label(gc.label)) {
                    invalid(path + ".label", "duplicate group", &gmark);
                }
            }
            d.groups.push_back(gc);
        }
    }
    s.finish();
    require(d.qubit_ghz > 0.0, "device.qubit_ghz", "must be positive");
    require(d.qubit_coupling_mhz > 0.0, "device.qubit_coupling_mhz", "must be positive");
    require(d.p_eq >= 0.0 && d.p_eq < 0.5, "device.p_eq", "must lie in [0, 0.5)");
    require(d.bus_min_ghz > 0.0, "device.bus_min_ghz", "must be positive");
    require(d.bus_max_ghz > d.bus_min_ghz, "device.bus_max_ghz", "must exceed bus_min_ghz");
    require(d.t_cav_us >= 0.0, "device.t_cav_us", "must be >= 0");
    require(d.hf_splitting_mhz >= 0.0, "device.hf_splitting_mhz", "must be >= 0");
    require(d.gamma0_per_us >= 0.0, "device.gamma0_per_us", "must be >= 0");
}

void read_numerics(Section& root, NumericsConfig& n) {
    Section s(root.get("numerics").value_or(YAML::Node()), "numerics");
    std::string method;
    s.text("method", method);
    if (!method.empty()) {
        if (method == "spectral") n.method = Method::spectral;
        else if (method == "oracle") n.method = Method::oracle;
        else if (method == "both") n.method = Method::both;
        else {
            const auto mark = s.mark("method");
            invalid("numerics.method", "expected spectral, oracle or both", &mark);
        }
    }
    s.number("dt_ns", n.dt_ns);
    s.count("n_spins", n.n_spins);
    s.number("oracle_span_mhz", n.oracle_span_mhz);
    s.number("grid_span_mhz", n.grid_span_mhz);
    s.number("grid_spacing_mhz", n.grid_spacing_mhz);
    s.finish();
    require(n.dt_ns > 0.0, "numerics.dt_ns", "must be positive");
    require(n.n_spins >= 1 && n.n_spins != 2, "numerics.n_spins", "must be 1 or at least 3");
    require(n.oracle_span_mhz > 0.0, "numerics.oracle_span_mhz", "must be positive");
    require(n.grid_span_mhz > 0.0, "numerics.grid_span_mhz", "must be positive");
    require(n.grid_spacing_mhz > 0.0 && n.grid_spacing_mhz < n.grid_span_mhz, "numerics.grid_spacing_mhz",
            "must be positive and below the grid span");
}

void check_group(const DeviceConfig& d, const std::string& label, bool allow_all, const std::string& field) {
    if (allow_all && label == "all") return;
    const auto parsed = spectral::parse_group_label(label);
    if (!parsed) invalid(field, "unknown group " + label);
    for (const auto& g : d.groups) {
        if (spectral::parse_group_label(g.label) == parsed) return;
    }
    invalid(field, "group " + label + " is not part of the device");
}

void check_taus(const Range& r, const std::string& field) {
    require(r.start >= 0.0, field + ".start", "must be >= 0");
}

Experiment read_experiment(Section& root, const DeviceConfig& device) {
    const auto node = root.get("experiment");
    if (!node || node->IsNull() || (node->IsMap() && node->size() == 0)) {
        invalid("experiment", "section is missing or empty");
    }
    Section s(*node, "experiment");
    std::string type;
    s.text("type", type);
    if (type.empty()) invalid("experiment.type", "missing", nullptr);

    Experiment out;
    if (type == "rabi") {
        RabiExperiment e;
        s.text("group", e.group);
        s.number("bus_detuning_mhz", e.bus_detuning_mhz);
        read_range(s, "tau_ns", e.tau_ns);
        check_group(device, e.group, false, "experiment.group");
        check_taus(e.tau_ns, "experiment.tau_ns");
        out = e;
    } else if (type == "chevron") {
        ChevronExperiment e;
        s.text("group", e.group);
        read_range(s, "bus_ghz", e.bus_ghz);
        read_range(s, "tau_ns", e.tau_ns);
        check_group(device, e.group, true, "experiment.group");
        check_taus(e.tau_ns, "experiment.tau_ns");
        require(e.bus_ghz.start >= device.bus_min_ghz && e.bus_ghz.stop <= device.bus_max_ghz + 1e-12,
                "experiment.bus_ghz", "outside the bus tuning range");
        out = e;
    } else if (type == "coherence") {
        CoherenceExperiment e;
        s.text("group", e.group);
        read_range(s, "tau_ns", e.tau_ns);
        check_group(device, e.group, false, "experiment.group");
        check_taus(e.tau_ns, "experiment.tau_ns");
        out = e;
    } else if (type == "ramsey") {
        RamseyExperiment e;
        s.text("group", e.group);
        s.number("delta_mhz", e.delta_mhz);
        read_range(s, "tau_ns", e.tau_ns);
        s.optional_number("tau_half_ns", e.tau_half_ns);
        s.text("window", e.window);
        check_group(device, e.group, false, "experiment.group");
        check_taus(e.tau_ns, "experiment.tau_ns");
        require(e.delta_mhz != 0.0, "experiment.delta_mhz", "must be non-zero");
        require(!e.tau_half_ns || *e.tau_half_ns > 0.0, "experiment.tau_half_ns", "must be positive");
        require(e.window == "hann" || e.window == "rectangular", "experiment.window", "expected hann or rectangular");
        out = e;
    } else if (type == "spectroscopy") {
        SpectroscopyExperiment e;
        read_range(s, "bus_ghz", e.bus_ghz);
        read_range(s, "probe_ghz", e.probe_ghz);
        read_range(s, "qubit_bus_ghz", e.qubit_bus_ghz);
        require(e.bus_ghz.start > 0.0, "experiment.bus_ghz.start", "must be positive");
        require(e.probe_ghz.start > 0.0, "experiment.probe_ghz.start", "must be positive");
        require(e.qubit_bus_ghz.start > 0.0, "experiment.qubit_bus_ghz.start", "must be positive");
        out = e;
    } else if (type == "aswap") {
        AswapExperiment e;
        s.number("start_ghz", e.start_ghz);
        if (const auto found = s.get("segments")) {
            const YAML::Node segs = *found;
            const auto mark = segs.Mark();
            if (!segs.IsSequence() || segs.size() == 0) invalid("experiment.segments", "expected a non-empty list", &mark);
            e.segments.clear();
            for (std::size_t i = 0; i < segs.size(); ++i) {
                const std::string path = "experiment.segments[" + std::to_string(i) + "]";
                Section seg(segs[i], path);
                double target = 0.0, duration = 0.0;
                seg.number("target_ghz", target);
                seg.number("duration_ns", duration);
                seg.finish();
                const auto smark = segs[i].Mark();
                if (!(target > 0.0)) invalid(path + ".target_ghz", "must be positive", &smark);
                if (!(duration > 0.0)) invalid(path + ".duration_ns", "must be positive", &smark);
                e.segments.emplace_back(target, duration);
            }
        }
        if (const auto found = s.get("speedups")) {
            const YAML::Node sp = *found;
            const auto mark = sp.Mark();
            if (!sp.IsSequence() || sp.size() == 0) invalid("experiment.speedups", "expected a non-empty list", &mark);
            e.speedups.clear();
            for (std::size_t i = 0; i < sp.size(); ++i) {
                double v = 0.0;
                try {
                    v = sp[i].as<double>();
                } catch (const YAML::Exception&) {
                    const auto m = sp[i].Mark();
                    invalid("experiment.speedups[" + std::to_string(i) + "]", "expected a number", &m);
                }
                if (!(v > 0.0)) invalid("experiment.speedups[" + std::to_string(i) + "]", "must be positive", &mark);
                e.speedups.push_back(v);
            }
        }
        require(e.start_ghz > 0.0, "experiment.start_ghz", "must be positive");
        out = e;
    } else if (type == "calibrate-readout") {
        ReadoutExperiment e;
        s.number("p_sw0", e.p_sw0);
        s.number("p_sw_pi", e.p_sw_pi);
        s.optional_number("p_eq", e.p_eq);
        require(e.p_sw0 >= 0.0 && e.p_sw0 <= 1.0, "experiment.p_sw0", "must lie in [0, 1]");
        require(e.p_sw_pi >= 0.0 && e.p_sw_pi <= 1.0, "experiment.p_sw_pi", "must lie in [0, 1]");
        require(!e.p_eq || (*e.p_eq >= 0.0 && *e.p_eq < 0.5), "experiment.p_eq", "must lie in [0, 0.5)");
        out = e;
    } else {
        const auto mark = s.mark("type");
        invalid("experiment.type", "unknown experiment " + type, &mark);
    }
    s.finish();
    return out;
}

json range_json(const Range& r) { return {{"start", r.start}, {"stop", r.stop}, {"step", r.step}}; }

}  // namespace

Method ExperimentConfig::method() const {
    struct Allowed {
        Method fallback;
        bool spectral, oracle, both;
    };
    const Allowed table[] = {
        {Method::spectral, true, true, true},    // rabi
        {Method::oracle, true, true, true},      // chevron
        {Method::oracle, false, true, false},    // coherence
        {Method::spectral, true, true, true},    // ramsey: spectral = ideal pulses, oracle = finite pulses
        {Method::spectral, true, false, false},  // spectroscopy
        {Method::oracle, false, true, false},    // aswap
        {Method::spectral, true, false, false},  // calibrate-readout
    };
    const auto& a = table[experiment.index()];
    const Method m = numerics.method.value_or(a.fallback);
    const bool ok = (m == Method::spectral && a.spectral) || (m == Method::oracle && a.oracle) ||
                    (m == Method::both && a.both);
    if (!ok) {
        throw Error(ErrorCode::validation, "numerics.method: " + std::string(to_string(m)) +
                                               " is not available for experiment " +
                                               std::string(experiment_name(experiment)));
    }
    if (const auto* c = std::get_if<ChevronExperiment>(&experiment); c && c->group == "all" && m != Method::oracle) {
        throw Error(ErrorCode::validation, "numerics.method: chevron over all groups requires oracle");
    }
    return m;
}

ExperimentConfig parse_config(const std::string& text) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        throw Error(ErrorCode::parse, e.msg + " at line " + std::to_string(e.mark.line + 1) + ", column " +
                                          std::to_string(e.mark.column + 1));
    }
    if (!root || root.IsNull()) invalid("experiment", "section is missing or empty");
    Section top(root, "");
    ExperimentConfig config;
    read_device(top, config.device);
    config.experiment = read_experiment(top, config.device);
    read_numerics(top, config.numerics);
    top.finish();
    (void)config.method();
    return config;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::io, "cannot read config " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

json to_json(const ExperimentConfig& c) {
    json device = {{"qubit_ghz", c.device.qubit_ghz},
                   {"qubit_coupling_mhz", c.device.qubit_coupling_mhz},
                   {"p_eq", c.device.p_eq},
                   {"bus_max_ghz", c.device.bus_max_ghz},
                   {"bus_min_ghz", c.device.bus_min_ghz},
                   {"t_cav_us", c.device.t_cav_us},
                   {"hf_splitting_mhz", c.device.hf_splitting_mhz},
                   {"gamma0_per_us", c.device.gamma0_per_us},
                   {"groups", json::array()}};
    for (const auto& g : c.device.groups) {
        device["groups"].push_back(
            {{"label", g.label}, {"center_ghz", g.center_ghz}, {"coupling_mhz", g.coupling_mhz}, {"fwhm_mhz", g.fwhm_mhz}});
    }

    json exp = {{"type", std::string(experiment_name(c.experiment))}};
    std::visit(
        [&](const auto& e) {
            using T = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<T, RabiExperiment>) {
                exp["group"] = e.group;
                exp["bus_detuning_mhz"] = e.bus_detuning_mhz;
                exp["tau_ns"] = range_json(e.tau_ns);
            } else if constexpr (std::is_same_v<T, ChevronExperiment>) {
                exp["group"] = e.group;
                exp["bus_ghz"] = range_json(e.bus_ghz);
                exp["tau_ns"] = range_json(e.tau_ns);
            } else if constexpr (std::is_same_v<T, CoherenceExperiment>) {
                exp["group"] = e.group;
                exp["tau_ns"] = range_json(e.tau_ns);
            } else if constexpr (std::is_same_v<T, RamseyExperiment>) {
                exp["group"] = e.group;
                exp["delta_mhz"] = e.delta_mhz;
                exp["tau_ns"] = range_json(e.tau_ns);
                if (e.tau_half_ns) exp["tau_half_ns"] = *e.tau_half_ns;
                exp["window"] = e.window;
            } else if constexpr (std::is_same_v<T, SpectroscopyExperiment>) {
                exp["bus_ghz"] = range_json(e.bus_ghz);
                exp["probe_ghz"] = range_json(e.probe_ghz);
                exp["qubit_bus_ghz"] = range_json(e.qubit_bus_ghz);
            } else if constexpr (std::is_same_v<T, AswapExperiment>) {
                exp["start_ghz"] = e.start_ghz;
                exp["segments"] = json::array();
                for (const auto& [target, duration] : e.segments) {
                    exp["segments"].push_back({{"target_ghz", target}, {"duration_ns", duration}});
                }
                exp["speedups"] = e.speedups;
            } else {
                exp["p_sw0"] = e.p_sw0;
                exp["p_sw_pi"] = e.p_sw_pi;
                if (e.p_eq) exp["p_eq"] = *e.p_eq;
            }
        },
        c.experiment);

    json numerics = {{"method", std::string(to_string(c.method()))},
                     {"dt_ns", c.numerics.dt_ns},
                     {"n_spins", c.numerics.n_spins},
                     {"oracle_span_mhz", c.numerics.oracle_span_mhz},
                     {"grid_span_mhz", c.numerics.grid_span_mhz},
                     {"grid_spacing_mhz", c.numerics.grid_spacing_mhz}};
    return {{"device", device}, {"experiment", exp}, {"numerics", numerics}};
}

std::string canonical_text(const ExperimentConfig& config) { return to_json(config).dump(); }

std::string config_hash(const ExperimentConfig& config) {
    const auto text = canonical_text(config);
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw Error(ErrorCode::io, "SHA-256 digest failed");
    }
    std::ostringstream hex;
    for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
    return hex.str();
}

}  // namespace spinmem::cli
