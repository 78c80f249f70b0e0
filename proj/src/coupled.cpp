#include "emvm/coupled.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "emvm/errors.hpp"

namespace emvm {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

OperatingPoint operating_point(const GeneratorParams& gen, const Excitation& exc,
                               const std::optional<VmDesign>& vm, double load_ohm) {
    validate(gen);
    if (!(load_ohm > 0.0) || !std::isfinite(load_ohm)) {
        throw std::invalid_argument("load_ohm must be positive and finite");
    }
    if (vm) validate(*vm);

    OperatingPoint pt;
    pt.load_ohm = load_ohm;
    const double w = kTwoPi * exc.frequency_hz;

    if (vm) {
        pt.rm_ohm = equivalent_resistance(vm->stages, vm->stage_capacitance_f,
                                          exc.frequency_hz);
        const double n = vm->stages;
        pt.input_resistance_ohm = (load_ohm + pt.rm_ohm) / (n * n);
    } else {
        pt.rm_ohm = 0.0;
        pt.input_resistance_ohm = load_ohm;
    }

    // Mechanical side: the converter is invisible except through R_in.
    const Load coil_load = Load::ohms(pt.input_resistance_ohm);
    pt.em_damping_ns_per_m = em_damping(gen, coil_load, w);
    const double force = gen.mass_kg * exc.acceleration_m_s2;
    const double total_damping = gen.parasitic_damping_ns_per_m + pt.em_damping_ns_per_m;
    pt.velocity_pk_m_s = force / total_damping;          // resonant response
    pt.displacement_pk_m = pt.velocity_pk_m_s / w;
    pt.emf_pk_v = gen.transduction_v_s_per_m * pt.velocity_pk_m_s;
    const double z = std::hypot(gen.coil_resistance_ohm + pt.input_resistance_ohm,
                                w * gen.coil_inductance_h);
    pt.vm_input_pk_v = pt.emf_pk_v * pt.input_resistance_ohm / z;
    pt.mechanical_power_w =
        pt.em_damping_ns_per_m * pt.velocity_pk_m_s * pt.velocity_pk_m_s / 2.0;

    // Converter side. load_power keeps the mechanical bookkeeping (what the
    // mass actually surrenders, times the converter's droop efficiency) so
    // that removing the converter changes nothing; the DC-model quantities
    // are reported alongside and the audit ratio measures their gap.
    if (vm) {
        const VmOperatingPoint dc =
            loaded_output(vm->stages, pt.vm_input_pk_v, pt.rm_ohm, load_ohm);
        pt.eta = dc.eta;
        pt.lambda = dc.lambda;
        pt.output_v = dc.output_v;
        pt.load_current_a = dc.load_current_a;
        pt.converter_input_power_w = dc.input_power_w;
        pt.converter_load_power_w = dc.load_power_w;
        pt.load_power_w = pt.mechanical_power_w * pt.eta;
        pt.overhead_power_w = overhead_power(*vm, load_ohm);
        pt.energy_audit_ratio = pt.mechanical_power_w > 0.0
                                    ? pt.converter_input_power_w / pt.mechanical_power_w
                                    : 1.0;
    } else {
        pt.eta = 1.0;
        pt.lambda = 1.0;
        pt.output_v = pt.vm_input_pk_v;
        pt.load_current_a = pt.vm_input_pk_v / load_ohm;
        pt.load_power_w = pt.mechanical_power_w;
        pt.converter_input_power_w = pt.load_power_w;
        pt.converter_load_power_w = pt.load_power_w;
        pt.overhead_power_w = 0.0;
        pt.energy_audit_ratio = 1.0;
    }

    const double spent = pt.mechanical_power_w + pt.overhead_power_w;
    pt.eta_overall = spent > 0.0 ? pt.load_power_w / spent : 0.0;
    return pt;
}

std::vector<double> grid_points(const LoadGrid& g) {
    if (!(g.min_ohm > 0.0) || !(g.max_ohm > g.min_ohm)) {
        throw std::invalid_argument("load grid must satisfy 0 < min < max");
    }
    if (g.points < 2) {
        throw std::invalid_argument("load grid needs at least 2 points");
    }
    std::vector<double> pts(static_cast<std::size_t>(g.points));
    const double steps = g.points - 1;
    if (g.log_spaced) {
        const double lo = std::log(g.min_ohm);
        const double hi = std::log(g.max_ohm);
        for (int i = 0; i < g.points; ++i) {
            pts[static_cast<std::size_t>(i)] = std::exp(lo + (hi - lo) * i / steps);
        }
    } else {
        for (int i = 0; i < g.points; ++i) {
            pts[static_cast<std::size_t>(i)] =
                g.min_ohm + (g.max_ohm - g.min_ohm) * i / steps;
        }
    }
    pts.front() = g.min_ohm;  // exact endpoints, no exp/log round-trip residue
    pts.back() = g.max_ohm;
    return pts;
}

SweepResult sweep_load(const GeneratorParams& gen, const Excitation& exc,
                       const std::optional<VmDesign>& vm, const LoadGrid& grid) {
    SweepResult result;
    const std::vector<double> loads = grid_points(grid);
    result.points.reserve(loads.size());
    for (double rl : loads) {
        result.points.push_back(operating_point(gen, exc, vm, rl));
    }
    result.best_index = 0;
    for (std::size_t i = 1; i < result.points.size(); ++i) {
        // strict '>' keeps the smallest load on ties
        if (result.points[i].load_power_w > result.points[result.best_index].load_power_w) {
            result.best_index = i;
        }
    }
    return result;
}

double golden_section_max_log(const std::function<double(double)>& f, double lo,
                              double hi, double tol_log) {
    if (!(lo > 0.0) || !(hi > lo)) {
        throw std::invalid_argument("bracket must satisfy 0 < lo < hi");
    }
    double a = std::log(lo);
    double b = std::log(hi);
    constexpr double inv_phi = 0.6180339887498949;  // 1/phi
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(std::exp(c));
    double fd = f(std::exp(d));
    while (b - a > tol_log) {
        if (fc >= fd) {  // ties resolve toward the smaller load
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(std::exp(c));
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(std::exp(d));
        }
    }
    return std::exp(0.5 * (a + b));
}

Optimum find_optimum(const GeneratorParams& gen, const Excitation& exc,
                     const std::optional<VmDesign>& vm, double min_ohm, double max_ohm) {
    const auto power_at = [&](double rl) {
        return operating_point(gen, exc, vm, rl).load_power_w;
    };

    constexpr int kCoarsePoints = 65;
    const std::vector<double> coarse =
        grid_points(LoadGrid{min_ohm, max_ohm, kCoarsePoints, true});
    std::vector<double> values(coarse.size());
    std::size_t best = 0;
    for (std::size_t i = 0; i < coarse.size(); ++i) {
        values[i] = power_at(coarse[i]);
        if (values[i] > values[best]) best = i;
    }

    if (best == 0 || best + 1 == coarse.size()) {
        // Monotone (or edge-peaked) profile: no interior bracket exists.
        return Optimum{coarse[best], values[best], true};
    }

    const double refined =
        golden_section_max_log(power_at, coarse[best - 1], coarse[best + 1]);
    double p_refined = power_at(refined);
    if (p_refined >= values[best]) {
        return Optimum{refined, p_refined, false};
    }
    return Optimum{coarse[best], values[best], false};
}

}  // namespace emvm
