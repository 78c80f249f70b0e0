#pragma once

#include <map>

namespace emvm {

// Static description of a switched-capacitor voltage-multiplier ladder.
// Switch and comparator parameters only matter to the time-domain simulator
// and the overhead model; the averaged analytic relations use just `stages`
// and `stage_capacitance_f`.
struct VmDesign {
    int stages = 0;                      // n: one switch-capacitor cell each
    double stage_capacitance_f = 0.0;    // every cell uses the same C
    double switch_on_ohm = 0.5;
    double switch_off_ohm = 1e7;
    double comparator_power_w = 0.5e-6;  // total static draw of the gate drive
    double supply_voltage_v = 2.0;

    // Measured switch dissipation at a given gate supply voltage: a constant
    // term plus a load-dependence linear in load conductance (heavier load,
    // more transferred charge, more switch loss). Both default to zero; the
    // table is typically filled by calibration.
    struct SwitchLoss {
        double constant_w = 0.0;
        double per_conductance_w_ohm = 0.0;  // multiplied by 1/Rl
    };
    std::map<double, SwitchLoss> switch_overhead;  // keyed by supply voltage
};

void validate(const VmDesign& d);

// Averaged source resistance of the n-cell ladder (charge-transfer droop):
//   n even:  Rm = n(n^2+2) / (12*C*f)
//   n odd:   Rm = n(n^2-1) / (12*C*f)
double equivalent_resistance(int stages, double stage_capacitance_f, double frequency_hz);

struct VmOutput {
    double volts = 0.0;
    bool saturated = false;  // true when n*Vi - I*Rm went negative and was clamped
};

// Open-loop relation Vo = n*Vi - I*Rm for an externally imposed DC current.
VmOutput output_voltage(int stages, double input_pk_v, double load_current_a,
                        double rm_ohm);

// Self-consistent DC operating point with a resistive load: the ladder looks
// like an ideal source n*Vi behind Rm.
struct VmOperatingPoint {
    double input_pk_v = 0.0;
    double output_v = 0.0;
    double load_current_a = 0.0;
    double lambda = 0.0;       // Vo/Vi = n*eta
    double eta = 0.0;          // Vo/(n*Vi) = Rl/(Rl+Rm)
    double load_power_w = 0.0;   // Vo^2/Rl
    double input_power_w = 0.0;  // n^2*Vi^2/(Rl+Rm) = load + I^2*Rm
    double overhead_power_w = 0.0;
    double eta_overall = 0.0;  // load / (input + overhead)
};

VmOperatingPoint loaded_output(int stages, double input_pk_v, double rm_ohm,
                               double load_ohm);

// Same, with Rm computed from the design and the drive overhead charged
// against the overall efficiency.
VmOperatingPoint loaded_output(const VmDesign& d, double input_pk_v,
                               double frequency_hz, double load_ohm);

// Resistance the ladder presents to its source: the load transforms down by
// the square of the voltage ratio.
double input_resistance(int stages, double rm_ohm, double load_ohm);

// Comparator draw plus the switch-loss table entry for the design's supply
// voltage (missing entry contributes nothing).
double overhead_power(const VmDesign& d, double load_ohm);

// Calibration: the switch-loss constant (at the design's supply voltage) that
// makes eta_overall equal `target` at the given drive and load. Throws
// std::invalid_argument when the target is unreachable (would need a negative
// constant). The load-conductance coefficient is left untouched.
double switch_constant_for_target(const VmDesign& d, double input_pk_v,
                                  double frequency_hz, double load_ohm,
                                  double target_eta_overall);

}  // namespace emvm
