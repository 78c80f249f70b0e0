#include "emvm/generator.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "emvm/errors.hpp"

namespace emvm {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_positive(double v, const char* field) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw std::invalid_argument(std::string(field) + " must be positive and finite");
    }
}

void require_non_negative(double v, const char* field) {
    if (v < 0.0 || !std::isfinite(v)) {
        throw std::invalid_argument(std::string(field) + " must be non-negative and finite");
    }
}

// |Rc + jwL + Rl| with an open load treated as infinite.
double branch_impedance_mag(const GeneratorParams& p, const Load& load, double omega) {
    const double r = p.coil_resistance_ohm + load.resistance_ohm();
    const double x = omega * p.coil_inductance_h;
    return std::hypot(r, x);
}

}  // namespace

void validate(const GeneratorParams& p) {
    require_positive(p.mass_kg, "mass_kg");
    require_positive(p.spring_n_per_m, "spring_n_per_m");
    require_positive(p.parasitic_damping_ns_per_m, "parasitic_damping_ns_per_m");
    require_non_negative(p.transduction_v_s_per_m, "transduction_v_s_per_m");
    require_non_negative(p.coil_resistance_ohm, "coil_resistance_ohm");
    require_non_negative(p.coil_inductance_h, "coil_inductance_h");
}

Load Load::ohms(double r) {
    if (!(r >= 0.0) || !std::isfinite(r)) {
        throw std::invalid_argument("load resistance must be non-negative and finite");
    }
    return Load(r, false);
}

double Load::resistance_ohm() const {
    if (open_) throw std::logic_error("open-circuit load has no resistance value");
    return ohms_;
}

double resonant_frequency(const GeneratorParams& p) {
    validate(p);
    return std::sqrt(p.spring_n_per_m / p.mass_kg) / kTwoPi;
}

double em_damping(const GeneratorParams& p, const Load& load, double omega_rad_s) {
    if (load.is_open()) return 0.0;
    const double k2 = p.transduction_v_s_per_m * p.transduction_v_s_per_m;
    const double z = branch_impedance_mag(p, load, omega_rad_s);
    if (z <= 0.0) throw std::invalid_argument("coil + load impedance must be positive");
    return k2 / z;
}

double displacement_at_resonance(const GeneratorParams& p, const Excitation& exc,
                                 double em_damping_ns_per_m) {
    validate(p);
    const double wn = kTwoPi * resonant_frequency(p);
    const double force = p.mass_kg * exc.acceleration_m_s2;
    return force / ((p.parasitic_damping_ns_per_m + em_damping_ns_per_m) * wn);
}

FrequencyPoint frequency_response(const GeneratorParams& p, double acceleration_m_s2,
                                  double frequency_hz, const Load& load) {
    validate(p);
    require_positive(frequency_hz, "frequency_hz");
    const double w = kTwoPi * frequency_hz;
    const double de = em_damping(p, load, w);
    const double force = p.mass_kg * acceleration_m_s2;
    const double stiffness_term = p.spring_n_per_m - p.mass_kg * w * w;
    const double damping_term = (p.parasitic_damping_ns_per_m + de) * w;
    const double x = force / std::hypot(stiffness_term, damping_term);

    FrequencyPoint pt;
    pt.displacement_m = x;
    pt.emf_pk_v = p.transduction_v_s_per_m * w * x;
    if (load.is_open()) {
        pt.load_voltage_pk_v = pt.emf_pk_v;
    } else {
        pt.load_voltage_pk_v =
            pt.emf_pk_v * load.resistance_ohm() / branch_impedance_mag(p, load, w);
    }
    return pt;
}

double max_power(const GeneratorParams& p, const Excitation& exc) {
    validate(p);
    const double force = p.mass_kg * exc.acceleration_m_s2;
    return force * force / (8.0 * p.parasitic_damping_ns_per_m);
}

double optimal_load(const GeneratorParams& p) {
    validate(p);
    const double k2 = p.transduction_v_s_per_m * p.transduction_v_s_per_m;
    const double r = k2 / p.parasitic_damping_ns_per_m - p.coil_resistance_ohm;
    if (r <= 0.0) {
        throw NonPhysicalOptimum(
            "matched damping is unreachable: coil resistance alone exceeds K^2/Dp");
    }
    return r;
}

ResistivePoint load_power_resistive(const GeneratorParams& p, const Excitation& exc,
                                    double load_ohm) {
    validate(p);
    const Load load = Load::ohms(load_ohm);
    const double w = kTwoPi * exc.frequency_hz;
    const double de = em_damping(p, load, w);
    const double x = displacement_at_resonance(p, exc, de);
    const double wn = kTwoPi * resonant_frequency(p);
    const double v = wn * x;

    ResistivePoint pt;
    pt.load_ohm = load_ohm;
    pt.em_damping_ns_per_m = de;
    pt.velocity_pk_m_s = v;
    pt.displacement_pk_m = x;
    pt.emf_pk_v = p.transduction_v_s_per_m * v;
    const double z = branch_impedance_mag(p, load, w);
    pt.load_voltage_pk_v = pt.emf_pk_v * load_ohm / z;
    pt.electrical_power_w = de * v * v / 2.0;
    pt.load_share_power_w = pt.electrical_power_w * load_ohm / z;
    return pt;
}

namespace {

// Dp, K and k are not bench-measurable directly; they are recovered from the
// anchor measurements by inverting the matched-power relations:
//   Dp = (m a)^2 / (8 Pmax),   K^2 = Dp (Rl_opt + Rc),   k = m (2 pi f_n)^2
GeneratorPreset make_preset(std::string name, double mass_kg, double accel,
                            double resonance_hz, double coil_ohm, PresetAnchors anchors,
                            std::vector<std::pair<std::string, std::string>> notes) {
    GeneratorPreset preset;
    preset.name = std::move(name);
    preset.anchors = anchors;
    preset.excitation = Excitation{accel, resonance_hz};
    preset.notes = std::move(notes);

    const double force = mass_kg * accel;
    const double dp = force * force / (8.0 * anchors.measured_max_power_w);
    const double k2 = dp * (anchors.measured_optimal_load_ohm + coil_ohm);
    const double wn = kTwoPi * resonance_hz;

    preset.params.mass_kg = mass_kg;
    preset.params.spring_n_per_m = mass_kg * wn * wn;
    preset.params.parasitic_damping_ns_per_m = dp;
    preset.params.transduction_v_s_per_m = std::sqrt(k2);
    preset.params.coil_resistance_ohm = coil_ohm;
    preset.params.coil_inductance_h = 0.0;
    return preset;
}

}  // namespace

const GeneratorPreset& macro_preset() {
    static const GeneratorPreset preset = make_preset(
        "macro", 0.05, 0.405, 14.1, 46.0,
        PresetAnchors{260e-6, 100.0},
        {{"magnet_size_mm", "15 x 15 x 5"},
         {"coil_outer_diameter_mm", "19"},
         {"coil_inner_diameter_mm", "1"},
         {"coil_thickness_mm", "6.5"},
         {"magnet_coil_gap_mm", "13"},
         {"coil_turns", "1100"}});
    return preset;
}

const GeneratorPreset& micro_preset() {
    static const GeneratorPreset preset = make_preset(
        "micro", 0.0066, 0.647, 53.0, 1613.0,
        PresetAnchors{17.5e-6, 3000.0},
        {{"magnet_size_mm", "2.5 x 2 x 1.5"},
         {"coil_outer_diameter_mm", "2.4"},
         {"coil_inner_diameter_mm", "0.6"},
         {"coil_thickness_mm", "0.5"},
         {"magnet_coil_gap_mm", "0.25"},
         {"coil_turns", "2300"}});
    return preset;
}

const GeneratorPreset* find_preset(std::string_view name) {
    if (name == "macro") return &macro_preset();
    if (name == "micro") return &micro_preset();
    return nullptr;
}

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = {"macro", "micro"};
    return names;
}

}  // namespace emvm
