#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "emvm/generator.hpp"
#include "emvm/vm_analytic.hpp"

namespace emvm {

// Quasi-static operating point of generator + multiplier + load. The chain is
// closed-form because the multiplier is reduced to its averaged input
// resistance: Rm from the design, R_in = (Rl+Rm)/n^2, De from R_in, and the
// motion follows.
//
// Two power bookkeepings coexist and are both reported:
//  * mechanical side: mechanical_power = De*v^2/2 is what actually leaves the
//    mass; load_power = mechanical_power * eta is the share surviving the
//    converter droop. These drive the sweep optimum and degenerate exactly to
//    the resistive path when no multiplier is present (eta = 1).
//  * converter side: the DC equivalent-source identities evaluated with the
//    peak input voltage, converter_input_power = n^2*Vi^2/(Rl+Rm) and
//    converter_load_power = Vo^2/Rl. Peak-voltage DC bookkeeping over-counts
//    a sinusoidal average by up to 2x; energy_audit_ratio =
//    converter_input_power / mechanical_power exposes that gap instead of
//    hiding it (it equals 2*R_in/(Rc+R_in) when L = 0, and 1 with no VM).
struct OperatingPoint {
    double load_ohm = 0.0;
    double input_resistance_ohm = 0.0;  // R_in seen by the coil (== Rl w/o VM)
    double rm_ohm = 0.0;                // 0 without VM
    double em_damping_ns_per_m = 0.0;
    double velocity_pk_m_s = 0.0;
    double displacement_pk_m = 0.0;
    double emf_pk_v = 0.0;
    double vm_input_pk_v = 0.0;  // after the coil divider (== load voltage w/o VM)
    double output_v = 0.0;
    double load_current_a = 0.0;
    double lambda = 0.0;  // Vo/Vi; 1 without VM
    double eta = 0.0;     // Rl/(Rl+Rm); 1 without VM
    double load_power_w = 0.0;
    double mechanical_power_w = 0.0;
    double converter_input_power_w = 0.0;
    double converter_load_power_w = 0.0;
    double overhead_power_w = 0.0;
    double eta_overall = 0.0;  // load / (mechanical + overhead)
    double energy_audit_ratio = 1.0;
};

OperatingPoint operating_point(const GeneratorParams& gen, const Excitation& exc,
                               const std::optional<VmDesign>& vm, double load_ohm);

// Load-resistance grid. Log spacing is the default because the interesting
// range spans decades.
struct LoadGrid {
    double min_ohm = 0.0;
    double max_ohm = 0.0;
    int points = 0;
    bool log_spaced = true;
};

std::vector<double> grid_points(const LoadGrid& g);

struct SweepResult {
    std::vector<OperatingPoint> points;
    std::size_t best_index = 0;  // argmax of load_power_w; ties -> smallest Rl
};

SweepResult sweep_load(const GeneratorParams& gen, const Excitation& exc,
                       const std::optional<VmDesign>& vm, const LoadGrid& grid);

struct Optimum {
    double load_ohm = 0.0;
    double load_power_w = 0.0;
    bool at_boundary = false;  // profile was monotone; this is the better endpoint
};

// Coarse log scan to bracket the maximum, then golden-section refinement.
// A monotone profile is not an error: the better endpoint comes back flagged.
Optimum find_optimum(const GeneratorParams& gen, const Excitation& exc,
                     const std::optional<VmDesign>& vm, double min_ohm, double max_ohm);

// The 1-D maximizer underneath find_optimum, exposed for direct testing.
// Works on log(x) in [lo, hi]; stops when the bracket is narrower than
// tol_log in log space (~relative width in x). Flat regions resolve toward
// the smaller x.
double golden_section_max_log(const std::function<double(double)>& f, double lo,
                              double hi, double tol_log = 1e-4);

}  // namespace emvm
