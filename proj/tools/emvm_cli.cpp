// Command-line front end for the harvester + multiplier toolkit: preset
// inspection, frequency/load sweeps, analytic multiplier tables, and the
// time-domain ladder simulation. One JSON config document drives everything;
// every table is emitted as CSV with a fixed header and shortest round-trip
// number formatting, so identical invocations produce identical bytes.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "emvm/coupled.hpp"
#include "emvm/errors.hpp"
#include "emvm/format.hpp"
#include "emvm/generator.hpp"
#include "emvm/ladder_sim.hpp"
#include "emvm/run_config.hpp"
#include "emvm/vm_analytic.hpp"

namespace {

using emvm::format_double;
using ordered_json = nlohmann::ordered_json;

struct CommonOpts {
    std::string config_path;
    std::string preset;
    bool json_out = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_json) {
    cmd->add_option("config", opts.config_path, "JSON config document");
    cmd->add_option("--preset", opts.preset, "generator preset name (macro, micro)");
    if (with_json) cmd->add_flag("--json", opts.json_out, "machine-readable JSON output");
}

emvm::RunConfig load_config(const CommonOpts& opts) {
    emvm::RunConfig cfg;
    if (!opts.config_path.empty()) {
        std::ifstream in(opts.config_path);
        if (!in) {
            throw emvm::ConfigError("", "cannot read config file: " + opts.config_path);
        }
        std::stringstream buffer;
        buffer << in.rdbuf();
        cfg = emvm::parse_run_config(buffer.str());
    }
    if (!opts.preset.empty()) {
        if (!emvm::find_preset(opts.preset)) {
            throw emvm::ConfigError("generator.preset",
                                    "unknown preset '" + opts.preset + "'");
        }
        cfg.preset_name = opts.preset;  // flag overrides the generator section
        cfg.generator.reset();
    }
    return cfg;
}

// CSV goes to stdout always; a copy lands in output.csv_path when configured.
void emit_table(const std::string& csv, const emvm::RunConfig& cfg) {
    std::cout << csv;
    if (cfg.output.csv_path) {
        std::ofstream out(*cfg.output.csv_path);
        if (!out) {
            throw emvm::ConfigError("output.csv_path",
                                    "cannot write file: " + *cfg.output.csv_path);
        }
        out << csv;
    }
}

int cmd_gen_info(const CommonOpts& opts) {
    const emvm::RunConfig cfg = load_config(opts);
    const emvm::ResolvedGenerator gen = emvm::resolve_generator(cfg);

    const double fn = emvm::resonant_frequency(gen.params);
    const double pmax = emvm::max_power(gen.params, gen.excitation);
    const double rl_opt = emvm::optimal_load(gen.params);
    const emvm::FrequencyPoint oc = emvm::frequency_response(
        gen.params, gen.excitation.acceleration_m_s2, fn, emvm::Load::open());

    if (opts.json_out) {
        ordered_json j;
        j["generator"] = gen.label;
        j["resonant_frequency_hz"] = fn;
        j["acceleration_m_s2"] = gen.excitation.acceleration_m_s2;
        j["max_power_w"] = pmax;
        j["optimal_load_ohm"] = rl_opt;
        j["open_circuit_emf_pk_v"] = oc.emf_pk_v;
        j["open_circuit_displacement_pk_m"] = oc.displacement_m;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "generator: " << gen.label << "\n"
                  << "resonant_frequency_hz: " << format_double(fn) << "\n"
                  << "acceleration_m_s2: " << format_double(gen.excitation.acceleration_m_s2)
                  << "\n"
                  << "max_power_w: " << format_double(pmax) << "\n"
                  << "optimal_load_ohm: " << format_double(rl_opt) << "\n"
                  << "open_circuit_emf_pk_v: " << format_double(oc.emf_pk_v) << "\n"
                  << "open_circuit_displacement_pk_m: " << format_double(oc.displacement_m)
                  << "\n";
    }
    return 0;
}

int cmd_freq_sweep(const CommonOpts& opts, double fmin, double fmax, int points) {
    const emvm::RunConfig cfg = load_config(opts);
    const emvm::ResolvedGenerator gen = emvm::resolve_generator(cfg);
    if (!(fmin > 0.0) || !(fmax > fmin)) {
        throw emvm::ConfigError("", "frequency range must satisfy 0 < fmin < fmax");
    }
    if (points < 2) throw emvm::ConfigError("", "frequency sweep needs at least 2 points");

    std::string csv = "f_hz,x_m,v_noload_pk\n";
    for (int i = 0; i < points; ++i) {
        const double f = fmin + (fmax - fmin) * i / (points - 1);
        const emvm::FrequencyPoint pt = emvm::frequency_response(
            gen.params, gen.excitation.acceleration_m_s2, f, emvm::Load::open());
        csv += format_double(f);
        csv += ',';
        csv += format_double(pt.displacement_m);
        csv += ',';
        csv += format_double(pt.emf_pk_v);
        csv += '\n';
    }
    emit_table(csv, cfg);
    return 0;
}

int cmd_load_sweep(const CommonOpts& opts, bool with_vm) {
    const emvm::RunConfig cfg = load_config(opts);
    const emvm::ResolvedGenerator gen = emvm::resolve_generator(cfg);
    if (!cfg.sweep) throw emvm::ConfigError("sweep", "required for load-sweep");
    std::optional<emvm::VmDesign> vm;
    if (with_vm) {
        if (!cfg.vm) throw emvm::ConfigError("vm", "required when --vm is given");
        vm = cfg.vm;
    }

    const emvm::SweepResult sweep =
        emvm::sweep_load(gen.params, gen.excitation, vm, *cfg.sweep);

    std::string csv = "r_load_ohm,r_in_ohm,de_nspm,vi_pk_v,vo_v,lambda,eta,p_load_w,eta_overall\n";
    for (const emvm::OperatingPoint& pt : sweep.points) {
        csv += format_double(pt.load_ohm);
        csv += ',';
        csv += format_double(pt.input_resistance_ohm);
        csv += ',';
        csv += format_double(pt.em_damping_ns_per_m);
        csv += ',';
        csv += format_double(pt.vm_input_pk_v);
        csv += ',';
        csv += format_double(pt.output_v);
        csv += ',';
        csv += format_double(pt.lambda);
        csv += ',';
        csv += format_double(pt.eta);
        csv += ',';
        csv += format_double(pt.load_power_w);
        csv += ',';
        csv += format_double(pt.eta_overall);
        csv += '\n';
    }
    emit_table(csv, cfg);

    const emvm::Optimum best = emvm::find_optimum(gen.params, gen.excitation, vm,
                                                  cfg.sweep->min_ohm, cfg.sweep->max_ohm);
    std::cout << "# optimum r_load_ohm=" << format_double(best.load_ohm)
              << " p_load_w=" << format_double(best.load_power_w);
    if (best.at_boundary) std::cout << " at_boundary=true";
    std::cout << "\n";
    return 0;
}

int cmd_vm_analytic(int stages, double capacitance_f, double frequency_hz,
                    double input_pk_v, double rmin, double rmax, int points) {
    if (!(rmin > 0.0) || !(rmax > rmin)) {
        throw emvm::ConfigError("", "load range must satisfy 0 < rmin < rmax");
    }
    if (points < 2) throw emvm::ConfigError("", "load grid needs at least 2 points");
    const double rm = emvm::equivalent_resistance(stages, capacitance_f, frequency_hz);
    const std::vector<double> loads =
        emvm::grid_points(emvm::LoadGrid{rmin, rmax, points, true});

    std::string csv = "r_load_ohm,vo_v,lambda,eta,p_load_w,p_in_w\n";
    for (double rl : loads) {
        const emvm::VmOperatingPoint pt =
            emvm::loaded_output(stages, input_pk_v, rm, rl);
        csv += format_double(rl);
        csv += ',';
        csv += format_double(pt.output_v);
        csv += ',';
        csv += format_double(pt.lambda);
        csv += ',';
        csv += format_double(pt.eta);
        csv += ',';
        csv += format_double(pt.load_power_w);
        csv += ',';
        csv += format_double(pt.input_power_w);
        csv += '\n';
    }
    std::cout << csv;
    return 0;
}

int cmd_vm_sim(const CommonOpts& opts) {
    const emvm::RunConfig cfg = load_config(opts);
    if (!cfg.vm) throw emvm::ConfigError("vm", "required for vm-sim");
    if (!cfg.sim) throw emvm::ConfigError("sim", "required for vm-sim");
    const emvm::VmDesign& design = *cfg.vm;
    const emvm::SimSpec& spec = *cfg.sim;

    const emvm::LadderSource source{spec.input_voltage_pk_v, spec.frequency_hz};
    const emvm::LadderCircuit circuit =
        emvm::build_ladder(design, source, spec.load_ohm);
    const emvm::TimeDomainResult run = emvm::simulate(circuit, spec.config);

    // The droop fit needs several loaded runs; the configured run supplies
    // everything else. Loads are spread around the analytic droop resistance
    // so every point draws meaningful current without saturating.
    double empirical_rm = 0.0;
    if (spec.input_voltage_pk_v > 0.0) {
        const double rm_analytic = emvm::equivalent_resistance(
            design.stages, design.stage_capacitance_f, spec.frequency_hz);
        std::vector<std::pair<double, double>> iv;
        for (double mult : {4.4, 8.8, 17.7, 44.2}) {
            const double rl = mult * rm_analytic;
            const emvm::TimeDomainResult r =
                emvm::simulate(emvm::build_ladder(design, source, rl), spec.config);
            iv.emplace_back(r.vo_mean / rl, r.vo_mean);
        }
        empirical_rm =
            emvm::extract_equivalent_resistance(iv, design.stages, spec.input_voltage_pk_v)
                .rm_ohm;
    }

    ordered_json summary;
    summary["vo_mean"] = run.vo_mean;
    summary["ripple_pp"] = run.ripple_pp;
    summary["cycles"] = run.cycles;
    summary["lambda"] = run.lambda;
    summary["eta"] = run.eta;
    summary["energy_audit_ratio"] = run.energy_audit_ratio;
    summary["empirical_rm"] = empirical_rm;
    std::cout << summary.dump(2) << "\n";

    if (cfg.output.waveform_path) {
        std::ofstream out(*cfg.output.waveform_path);
        if (!out) {
            throw emvm::ConfigError("output.waveform_path",
                                    "cannot write file: " + *cfg.output.waveform_path);
        }
        std::string header = "t_s,v_source,v_out,i_load";
        for (std::size_t k = 1; k <= run.cap_v.size(); ++k) {
            header += ",v_c" + std::to_string(k);
        }
        out << header << "\n";
        for (std::size_t s = 0; s < run.t_s.size();
             s += static_cast<std::size_t>(cfg.output.decimation)) {
            out << format_double(run.t_s[s]) << ',' << format_double(run.v_source[s])
                << ',' << format_double(run.v_out[s]) << ','
                << format_double(run.i_load[s]);
            for (const auto& cap : run.cap_v) out << ',' << format_double(cap[s]);
            out << "\n";
        }
    }
    return 0;
}

int cmd_preset_dump(const std::string& name) {
    const emvm::GeneratorPreset* preset = emvm::find_preset(name);
    if (!preset) {
        throw emvm::ConfigError("generator.preset", "unknown preset '" + name + "'");
    }
    ordered_json j;
    j["name"] = preset->name;
    j["params"]["mass_kg"] = preset->params.mass_kg;
    j["params"]["spring_n_per_m"] = preset->params.spring_n_per_m;
    j["params"]["parasitic_damping_ns_per_m"] = preset->params.parasitic_damping_ns_per_m;
    j["params"]["transduction_v_s_per_m"] = preset->params.transduction_v_s_per_m;
    j["params"]["coil_resistance_ohm"] = preset->params.coil_resistance_ohm;
    j["params"]["coil_inductance_h"] = preset->params.coil_inductance_h;
    j["excitation"]["acceleration_m_s2"] = preset->excitation.acceleration_m_s2;
    j["excitation"]["frequency_hz"] = preset->excitation.frequency_hz;
    j["anchors"]["measured_max_power_w"] = preset->anchors.measured_max_power_w;
    j["anchors"]["measured_optimal_load_ohm"] = preset->anchors.measured_optimal_load_ohm;
    for (const auto& [key, value] : preset->notes) j["notes"][key] = value;
    std::cout << j.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Vibration-harvester and voltage-multiplier co-design tool"};
    app.require_subcommand(1);

    CommonOpts gi_opts;
    CLI::App* gen_info = app.add_subcommand(
        "gen-info", "resonance, matched power and optimal load of a generator");
    add_common(gen_info, gi_opts, true);

    CommonOpts fs_opts;
    double fmin = 0.0;
    double fmax = 0.0;
    int fpoints = 0;
    CLI::App* freq_sweep =
        app.add_subcommand("freq-sweep", "no-load response vs frequency (CSV)");
    add_common(freq_sweep, fs_opts, false);
    freq_sweep->add_option("--fmin", fmin, "low end, Hz")->required();
    freq_sweep->add_option("--fmax", fmax, "high end, Hz")->required();
    freq_sweep->add_option("--points", fpoints, "grid size")->required();

    CommonOpts ls_opts;
    bool with_vm = false;
    CLI::App* load_sweep = app.add_subcommand(
        "load-sweep", "operating point vs load resistance (CSV + optimum line)");
    add_common(load_sweep, ls_opts, false);
    load_sweep->add_flag("--vm", with_vm, "insert the configured multiplier");

    int va_stages = 0;
    double va_cap = 0.0;
    double va_freq = 0.0;
    double va_vi = 0.0;
    double va_rmin = 0.0;
    double va_rmax = 0.0;
    int va_points = 0;
    CLI::App* vm_analytic = app.add_subcommand(
        "vm-analytic", "averaged multiplier response over a load grid (CSV)");
    vm_analytic->add_option("--stages", va_stages, "cell count n")->required();
    vm_analytic->add_option("--capacitance-f", va_cap, "per-cell capacitance, F")->required();
    vm_analytic->add_option("--frequency-hz", va_freq, "drive frequency, Hz")->required();
    vm_analytic->add_option("--input-pk-v", va_vi, "drive amplitude, V peak")->required();
    vm_analytic->add_option("--rmin", va_rmin, "load grid low end, ohm")->required();
    vm_analytic->add_option("--rmax", va_rmax, "load grid high end, ohm")->required();
    vm_analytic->add_option("--points", va_points, "load grid size")->required();

    CommonOpts vs_opts;
    CLI::App* vm_sim = app.add_subcommand(
        "vm-sim", "time-domain ladder run: summary JSON + optional waveform CSV");
    add_common(vm_sim, vs_opts, false);

    CLI::App* preset = app.add_subcommand("preset", "embedded generator presets");
    preset->require_subcommand(1);
    std::string dump_name;
    CLI::App* preset_dump = preset->add_subcommand("dump", "print one preset as JSON");
    preset_dump->add_option("name", dump_name, "preset name")->required();
    CLI::App* preset_list = preset->add_subcommand("list", "print known preset names");

    try {
        app.parse(argc, argv);

        if (gen_info->parsed()) return cmd_gen_info(gi_opts);
        if (freq_sweep->parsed()) return cmd_freq_sweep(fs_opts, fmin, fmax, fpoints);
        if (load_sweep->parsed()) return cmd_load_sweep(ls_opts, with_vm);
        if (vm_analytic->parsed()) {
            return cmd_vm_analytic(va_stages, va_cap, va_freq, va_vi, va_rmin, va_rmax,
                                   va_points);
        }
        if (vm_sim->parsed()) return cmd_vm_sim(vs_opts);
        if (preset->parsed()) {
            if (preset_dump->parsed()) return cmd_preset_dump(dump_name);
            if (preset_list->parsed()) {
                for (const auto& name : emvm::preset_names()) std::cout << name << "\n";
                return 0;
            }
        }
        return 0;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const emvm::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const emvm::NoConvergence& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const emvm::ModelError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
