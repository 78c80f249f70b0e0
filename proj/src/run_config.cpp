#include "emvm/run_config.hpp"

#include <cstddef>
#include <set>
#include <string>
#include <utility>

#include <json.hpp>

#include "emvm/errors.hpp"

namespace emvm {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& message) {
    throw ConfigError(path, message);
}

std::string join(const std::string& base, const std::string& key) {
    return base.empty() ? key : base + "." + key;
}

// Strict accessor over one JSON object: every key must be consumed by a
// typed getter, and finish() rejects leftovers with their dotted path.
class Section {
public:
    Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) fail(path_, "expected an object");
    }

    bool has(const char* key) const { return j_.contains(key); }

    std::optional<double> number(const char* key) {
        const json* v = take(key);
        if (!v) return std::nullopt;
        if (!v->is_number()) fail(join(path_, key), "expected a number");
        return v->get<double>();
    }

    double require_number(const char* key) {
        auto v = number(key);
        if (!v) fail(join(path_, key), "required");
        return *v;
    }

    std::optional<int> integer(const char* key) {
        const json* v = take(key);
        if (!v) return std::nullopt;
        if (!v->is_number_integer()) fail(join(path_, key), "expected an integer");
        return v->get<int>();
    }

    int require_integer(const char* key) {
        auto v = integer(key);
        if (!v) fail(join(path_, key), "required");
        return *v;
    }

    std::optional<std::string> string(const char* key) {
        const json* v = take(key);
        if (!v) return std::nullopt;
        if (!v->is_string()) fail(join(path_, key), "expected a string");
        return v->get<std::string>();
    }

    std::optional<bool> boolean(const char* key) {
        const json* v = take(key);
        if (!v) return std::nullopt;
        if (!v->is_boolean()) fail(join(path_, key), "expected a boolean");
        return v->get<bool>();
    }

    const json* object(const char* key) {
        const json* v = take(key);
        if (!v) return nullptr;
        if (!v->is_object()) fail(join(path_, key), "expected an object");
        return v;
    }

    // Raw access for keys with union types (number-or-string).
    const json* raw(const char* key) { return take(key); }

    void finish() {
        for (const auto& item : j_.items()) {
            if (!used_.count(item.key())) fail(join(path_, item.key()), "unknown key");
        }
    }

    const std::string& path() const { return path_; }

private:
    const json* take(const char* key) {
        used_.insert(key);
        auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    const json& j_;
    std::string path_;
    std::set<std::string> used_;
};

void parse_generator(const json& j, RunConfig& cfg) {
    Section s(j, "generator");
    const bool has_preset = s.has("preset");
    if (has_preset) {
        const std::string name = *s.string("preset");
        s.finish();  // preset excludes every inline field
        if (!find_preset(name)) {
            std::string known;
            for (const auto& p : preset_names()) {
                if (!known.empty()) known += ", ";
                known += p;
            }
            fail("generator.preset", "unknown preset '" + name + "' (known: " + known + ")");
        }
        cfg.preset_name = name;
        return;
    }

    GeneratorParams p;
    p.mass_kg = s.require_number("mass_kg");
    p.spring_n_per_m = s.require_number("spring_n_per_m");
    p.parasitic_damping_ns_per_m = s.require_number("parasitic_damping_ns_per_m");
    p.transduction_v_s_per_m = s.require_number("transduction_v_s_per_m");
    p.coil_resistance_ohm = s.require_number("coil_resistance_ohm");
    p.coil_inductance_h = s.number("coil_inductance_h").value_or(0.0);
    s.finish();
    try {
        validate(p);
    } catch (const std::invalid_argument& e) {
        fail("generator", e.what());
    }
    cfg.generator = p;
}

void parse_excitation(const json& j, RunConfig& cfg) {
    Section s(j, "excitation");
    ExcitationSpec spec;
    spec.acceleration_m_s2 = s.number("acceleration_m_s2");
    if (const json* f = s.raw("frequency_hz")) {
        if (f->is_number()) {
            spec.frequency_hz = f->get<double>();
        } else if (f->is_string() && f->get<std::string>() == "resonance") {
            spec.frequency_hz = std::nullopt;
        } else {
            fail("excitation.frequency_hz", "expected a number or \"resonance\"");
        }
    }
    s.finish();
    cfg.excitation = spec;
}

void parse_vm(const json& j, RunConfig& cfg) {
    Section s(j, "vm");
    VmDesign d;
    d.stages = s.require_integer("stages");
    d.stage_capacitance_f = s.require_number("stage_capacitance_f");
    if (auto v = s.number("switch_on_ohm")) d.switch_on_ohm = *v;
    if (auto v = s.number("switch_off_ohm")) d.switch_off_ohm = *v;
    if (auto v = s.number("comparator_power_w")) d.comparator_power_w = *v;
    if (auto v = s.number("supply_voltage_v")) d.supply_voltage_v = *v;
    if (const json* table = s.object("switch_overhead")) {
        for (const auto& item : table->items()) {
            const std::string path = "vm.switch_overhead." + item.key();
            double supply = 0.0;
            std::size_t consumed = 0;
            try {
                supply = std::stod(item.key(), &consumed);
            } catch (const std::exception&) {
                consumed = 0;
            }
            if (consumed != item.key().size() || !(supply > 0.0)) {
                fail(path, "key must be a positive supply voltage");
            }
            Section entry(item.value(), path);
            VmDesign::SwitchLoss loss;
            loss.constant_w = entry.number("constant_w").value_or(0.0);
            loss.per_conductance_w_ohm = entry.number("per_conductance_w_ohm").value_or(0.0);
            entry.finish();
            d.switch_overhead[supply] = loss;
        }
    }
    s.finish();
    try {
        validate(d);
    } catch (const std::invalid_argument& e) {
        fail("vm", e.what());
    }
    cfg.vm = d;
}

void parse_sweep(const json& j, RunConfig& cfg) {
    Section s(j, "sweep");
    LoadGrid g;
    g.min_ohm = s.require_number("min_ohm");
    g.max_ohm = s.require_number("max_ohm");
    g.points = s.require_integer("points");
    g.log_spaced = s.boolean("log_spaced").value_or(true);
    s.finish();
    if (!(g.min_ohm > 0.0) || !(g.max_ohm > g.min_ohm)) {
        fail("sweep", "range must satisfy 0 < min_ohm < max_ohm");
    }
    if (g.points < 2) fail("sweep.points", "need at least 2 points");
    cfg.sweep = g;
}

void parse_sim(const json& j, RunConfig& cfg) {
    Section s(j, "sim");
    SimSpec spec;
    spec.input_voltage_pk_v = s.require_number("input_voltage_pk_v");
    spec.frequency_hz = s.require_number("frequency_hz");
    spec.load_ohm = s.number("load_ohm").value_or(0.0);
    if (auto v = s.integer("steps_per_cycle")) spec.config.steps_per_cycle = *v;
    if (auto v = s.integer("max_cycles")) spec.config.max_cycles = *v;
    if (auto v = s.number("convergence_tol")) spec.config.convergence_tol = *v;
    s.finish();
    if (!(spec.frequency_hz > 0.0)) fail("sim.frequency_hz", "must be positive");
    if (spec.input_voltage_pk_v < 0.0) fail("sim.input_voltage_pk_v", "must be non-negative");
    if (spec.load_ohm < 0.0) fail("sim.load_ohm", "must be non-negative (0 = open circuit)");
    if (spec.config.steps_per_cycle < 8) fail("sim.steps_per_cycle", "must be at least 8");
    if (spec.config.max_cycles < 1) fail("sim.max_cycles", "must be at least 1");
    if (!(spec.config.convergence_tol > 0.0)) fail("sim.convergence_tol", "must be positive");
    cfg.sim = spec;
}

void parse_output(const json& j, RunConfig& cfg) {
    Section s(j, "output");
    cfg.output.csv_path = s.string("csv_path");
    cfg.output.waveform_path = s.string("waveform_path");
    if (auto v = s.integer("decimation")) {
        if (*v < 1) fail("output.decimation", "must be at least 1");
        cfg.output.decimation = *v;
    }
    s.finish();
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        fail("", std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) fail("", "top level must be a JSON object");

    RunConfig cfg;
    Section top(doc, "");
    if (const json* g = top.object("generator")) parse_generator(*g, cfg);
    if (const json* e = top.object("excitation")) parse_excitation(*e, cfg);
    if (const json* v = top.object("vm")) parse_vm(*v, cfg);
    if (const json* s = top.object("sweep")) parse_sweep(*s, cfg);
    if (const json* s = top.object("sim")) parse_sim(*s, cfg);
    if (const json* o = top.object("output")) parse_output(*o, cfg);
    top.finish();
    return cfg;
}

ResolvedGenerator resolve_generator(const RunConfig& cfg) {
    ResolvedGenerator r;
    if (cfg.preset_name) {
        const GeneratorPreset* preset = find_preset(*cfg.preset_name);
        if (!preset) fail("generator.preset", "unknown preset '" + *cfg.preset_name + "'");
        r.params = preset->params;
        r.excitation = preset->excitation;
        r.label = preset->name;
    } else if (cfg.generator) {
        r.params = *cfg.generator;
        r.label = "inline";
        if (!cfg.excitation || !cfg.excitation->acceleration_m_s2) {
            fail("excitation.acceleration_m_s2", "required with inline generator parameters");
        }
        r.excitation.acceleration_m_s2 = 0.0;  // overwritten below
        r.excitation.frequency_hz = 0.0;
    } else {
        fail("generator", "config must name a preset or give inline generator parameters");
    }

    if (cfg.excitation) {
        if (cfg.excitation->acceleration_m_s2) {
            r.excitation.acceleration_m_s2 = *cfg.excitation->acceleration_m_s2;
        }
        if (cfg.excitation->frequency_hz) {
            r.excitation.frequency_hz = *cfg.excitation->frequency_hz;
        } else {
            r.excitation.frequency_hz = resonant_frequency(r.params);
        }
    }
    return r;
}

}  // namespace emvm
