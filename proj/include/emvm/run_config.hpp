#pragma once

#include <optional>
#include <string>

#include "emvm/coupled.hpp"
#include "emvm/generator.hpp"
#include "emvm/ladder_sim.hpp"
#include "emvm/vm_analytic.hpp"

namespace emvm {

// Excitation request: either explicit numbers or "at resonance" (frequency
// resolved from the generator once it is known). Fields left empty fall back
// to the preset's characterization drive.
struct ExcitationSpec {
    std::optional<double> acceleration_m_s2;
    std::optional<double> frequency_hz;  // empty => run at resonance
};

struct SimSpec {
    double input_voltage_pk_v = 0.0;
    double frequency_hz = 0.0;
    double load_ohm = 0.0;  // 0 => open circuit
    SimConfig config;
};

struct OutputSpec {
    std::optional<std::string> csv_path;       // sweep tables
    std::optional<std::string> waveform_path;  // time-domain dump
    int decimation = 20;
};

// One JSON document drives every subcommand; each command reads the sections
// it needs and ignores the rest (absence of a required section is the
// command's error, not the parser's).
struct RunConfig {
    std::optional<std::string> preset_name;
    std::optional<GeneratorParams> generator;
    std::optional<ExcitationSpec> excitation;
    std::optional<VmDesign> vm;
    std::optional<LoadGrid> sweep;
    std::optional<SimSpec> sim;
    OutputSpec output;
};

// Strict parser: unknown keys anywhere are rejected, every violation carries
// the dotted field path (ConfigError::path). "generator" takes either
// {"preset": "macro"} or the full inline parameter object, never both.
RunConfig parse_run_config(const std::string& json_text);

// Resolve the generator/excitation pair a command should run with. Applies
// preset defaults, then overrides from the excitation section, then resolves
// "resonance" to the actual resonant frequency. Throws ConfigError (path
// "generator") if the config names no generator at all.
struct ResolvedGenerator {
    GeneratorParams params;
    Excitation excitation;
    std::string label;  // preset name or "inline"
};

ResolvedGenerator resolve_generator(const RunConfig& cfg);

}  // namespace emvm
