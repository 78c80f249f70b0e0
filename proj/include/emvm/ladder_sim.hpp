#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "emvm/vm_analytic.hpp"

namespace emvm {

struct LadderSource {
    double input_pk_v = 0.0;
    double frequency_hz = 0.0;
};

// Piecewise-linear network of the half-wave multiplier ladder. Node ids:
// -1 = source terminal, 0 = ground, 1..n = cell outputs. Cell k contributes
// one switch (ideal-diode controlled two-state resistor) feeding node k from
// node k-1, and one capacitor:
//   - cells with the output node's parity smooth their node to ground,
//   - the other cells form the coupling ladder that rides the source
//     (node k to node k-2, the first one to the source terminal).
// The load hangs from node n. With everything lossless the no-load output is
// n * input_pk_v: each cell adds one source amplitude.
struct LadderCircuit {
    struct Branch {
        int a = 0;
        int b = 0;
    };

    VmDesign design;
    LadderSource source;
    double load_ohm = 0.0;
    std::vector<Branch> capacitors;  // capacitors[k-1] belongs to cell k
    std::vector<Branch> switches;    // conducts a -> b, like a diode anode->cathode
};

LadderCircuit build_ladder(const VmDesign& d, const LadderSource& s, double load_ohm);

struct SimConfig {
    int steps_per_cycle = 2000;
    int max_cycles = 5000;
    double convergence_tol = 1e-5;  // relative per-cycle change of mean Vo
};

struct TimeDomainResult {
    double vo_mean = 0.0;    // over the final (converged) cycle
    double ripple_pp = 0.0;  // peak-to-peak of Vo over that cycle
    int cycles = 0;          // cycles simulated until convergence
    double lambda = 0.0;     // vo_mean / input_pk
    double eta = 0.0;        // lambda / n

    // Per-cycle energy audit of the final cycle. audit_ratio is
    // input / (load + switch + capacitor delta); backward-difference
    // integration loses a little energy numerically, so it sits slightly
    // above 1 at finite step counts.
    double energy_in_j = 0.0;
    double energy_load_j = 0.0;
    double energy_switch_j = 0.0;
    double energy_caps_delta_j = 0.0;
    double energy_audit_ratio = 1.0;

    // Waveform of the final cycle, one sample per step.
    std::vector<double> t_s;
    std::vector<double> v_source;
    std::vector<double> v_out;
    std::vector<double> i_load;
    std::vector<std::vector<double>> cap_v;  // [cell][sample], branch voltages
};

// Fixed-step implicit (backward-difference) transient from all-zero capacitor
// voltages until the mean output is periodic to within config.convergence_tol
// for three consecutive cycles. Switch states follow the ideal-diode rule,
// re-solved within each step until consistent. Throws NoConvergence when
// max_cycles runs out.
TimeDomainResult simulate(const LadderCircuit& c, const SimConfig& config);

struct RmFit {
    double rm_ohm = 0.0;
    double ideality = 0.0;  // fit intercept / (n*Vi); 1 = ideal ladder
};

// Least-squares line through (I, Vo) points measured at a fixed drive:
// Vo = intercept - Rm*I. Throws DegenerateFit without two distinct currents.
RmFit extract_equivalent_resistance(std::span<const std::pair<double, double>> iv_points,
                                    int stages, double input_pk_v);

}  // namespace emvm
