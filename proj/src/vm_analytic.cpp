#include "emvm/vm_analytic.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace emvm {

namespace {

void require_positive(double v, const char* field) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw std::invalid_argument(std::string(field) + " must be positive and finite");
    }
}

}  // namespace

void validate(const VmDesign& d) {
    if (d.stages < 1) throw std::invalid_argument("stages must be >= 1");
    require_positive(d.stage_capacitance_f, "stage_capacitance_f");
    require_positive(d.switch_on_ohm, "switch_on_ohm");
    require_positive(d.switch_off_ohm, "switch_off_ohm");
    if (d.switch_off_ohm <= d.switch_on_ohm) {
        throw std::invalid_argument("switch_off_ohm must exceed switch_on_ohm");
    }
    if (d.comparator_power_w < 0.0) {
        throw std::invalid_argument("comparator_power_w must be non-negative");
    }
    require_positive(d.supply_voltage_v, "supply_voltage_v");
    for (const auto& [supply, loss] : d.switch_overhead) {
        if (loss.constant_w < 0.0 || loss.per_conductance_w_ohm < 0.0) {
            throw std::invalid_argument("switch_overhead terms must be non-negative");
        }
        if (!(supply > 0.0)) {
            throw std::invalid_argument("switch_overhead supply voltage must be positive");
        }
    }
}

double equivalent_resistance(int stages, double stage_capacitance_f,
                             double frequency_hz) {
    if (stages < 1) throw std::invalid_argument("stages must be >= 1");
    require_positive(stage_capacitance_f, "stage_capacitance_f");
    require_positive(frequency_hz, "frequency_hz");
    const double n = stages;
    const double numerator =
        (stages % 2 == 0) ? n * (n * n + 2.0) : n * (n * n - 1.0);
    return numerator / (12.0 * stage_capacitance_f * frequency_hz);
}

VmOutput output_voltage(int stages, double input_pk_v, double load_current_a,
                        double rm_ohm) {
    if (stages < 1) throw std::invalid_argument("stages must be >= 1");
    const double raw = stages * input_pk_v - load_current_a * rm_ohm;
    if (raw < 0.0) return {0.0, true};
    return {raw, false};
}

VmOperatingPoint loaded_output(int stages, double input_pk_v, double rm_ohm,
                               double load_ohm) {
    if (stages < 1) throw std::invalid_argument("stages must be >= 1");
    require_positive(load_ohm, "load_ohm");
    if (rm_ohm < 0.0) throw std::invalid_argument("rm_ohm must be non-negative");

    VmOperatingPoint pt;
    pt.input_pk_v = input_pk_v;
    pt.eta = load_ohm / (load_ohm + rm_ohm);
    pt.lambda = stages * pt.eta;
    pt.output_v = pt.lambda * input_pk_v;
    pt.load_current_a = pt.output_v / load_ohm;
    pt.load_power_w = pt.output_v * pt.output_v / load_ohm;
    const double nvi = stages * input_pk_v;
    pt.input_power_w = nvi * nvi / (load_ohm + rm_ohm);
    pt.overhead_power_w = 0.0;
    pt.eta_overall = pt.input_power_w > 0.0 ? pt.load_power_w / pt.input_power_w : 0.0;
    return pt;
}

VmOperatingPoint loaded_output(const VmDesign& d, double input_pk_v,
                               double frequency_hz, double load_ohm) {
    validate(d);
    const double rm = equivalent_resistance(d.stages, d.stage_capacitance_f, frequency_hz);
    VmOperatingPoint pt = loaded_output(d.stages, input_pk_v, rm, load_ohm);
    pt.overhead_power_w = overhead_power(d, load_ohm);
    const double denom = pt.input_power_w + pt.overhead_power_w;
    pt.eta_overall = denom > 0.0 ? pt.load_power_w / denom : 0.0;
    return pt;
}

double input_resistance(int stages, double rm_ohm, double load_ohm) {
    if (stages < 1) throw std::invalid_argument("stages must be >= 1");
    require_positive(load_ohm, "load_ohm");
    if (rm_ohm < 0.0) throw std::invalid_argument("rm_ohm must be non-negative");
    return (load_ohm + rm_ohm) / (static_cast<double>(stages) * stages);
}

double overhead_power(const VmDesign& d, double load_ohm) {
    require_positive(load_ohm, "load_ohm");
    double total = d.comparator_power_w;
    if (auto it = d.switch_overhead.find(d.supply_voltage_v);
        it != d.switch_overhead.end()) {
        total += it->second.constant_w + it->second.per_conductance_w_ohm / load_ohm;
    }
    return total;
}

double switch_constant_for_target(const VmDesign& d, double input_pk_v,
                                  double frequency_hz, double load_ohm,
                                  double target_eta_overall) {
    validate(d);
    if (!(target_eta_overall > 0.0 && target_eta_overall < 1.0)) {
        throw std::invalid_argument("target_eta_overall must lie in (0, 1)");
    }
    const double rm = equivalent_resistance(d.stages, d.stage_capacitance_f, frequency_hz);
    const VmOperatingPoint pt = loaded_output(d.stages, input_pk_v, rm, load_ohm);

    // eta_overall = Pl / (Pin + comparator + constant + per_g/Rl); solve for
    // the constant, keeping whatever per-conductance coefficient is already
    // configured at this supply.
    double per_conductance = 0.0;
    if (auto it = d.switch_overhead.find(d.supply_voltage_v);
        it != d.switch_overhead.end()) {
        per_conductance = it->second.per_conductance_w_ohm;
    }
    const double constant = pt.load_power_w / target_eta_overall - pt.input_power_w -
                            d.comparator_power_w - per_conductance / load_ohm;
    if (constant < 0.0 || !std::isfinite(constant)) {
        throw std::invalid_argument(
            "target efficiency unreachable: conversion losses alone already "
            "exceed it at this operating point");
    }
    return constant;
}

}  // namespace emvm
