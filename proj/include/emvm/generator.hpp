#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace emvm {

// Lumped parameters of a resonant electromagnetic vibration generator:
// a seismic mass on a spring, damped by parasitic (mechanical) losses and by
// the electromagnetic force of the coil, which also acts as the transducer.
struct GeneratorParams {
    double mass_kg = 0.0;
    double spring_n_per_m = 0.0;
    double parasitic_damping_ns_per_m = 0.0;  // Dp
    double transduction_v_s_per_m = 0.0;      // K = N * dPhi/dx
    double coil_resistance_ohm = 0.0;
    double coil_inductance_h = 0.0;           // usually negligible at these f
};

// Throws std::invalid_argument naming the offending field.
void validate(const GeneratorParams& p);

// Sinusoidal base excitation, given as acceleration amplitude.
struct Excitation {
    double acceleration_m_s2 = 0.0;
    double frequency_hz = 0.0;
};

// Electrical load on the coil terminals. Open circuit is a distinct state,
// not a magic resistance value.
class Load {
public:
    static Load ohms(double r);
    static Load open() { return Load(0.0, true); }

    bool is_open() const { return open_; }
    double resistance_ohm() const;  // throws std::logic_error when open

private:
    Load(double r, bool open) : ohms_(r), open_(open) {}
    double ohms_;
    bool open_;
};

// Natural (resonant) frequency sqrt(k/m)/(2*pi), in Hz.
double resonant_frequency(const GeneratorParams& p);

// Electromagnetic damping coefficient De = K^2 / |Rc + j*w*L + Rl|.
// Open load -> 0. The magnitude of the complex branch impedance is used; with
// L = 0 this reduces to K^2/(Rc+Rl).
double em_damping(const GeneratorParams& p, const Load& load, double omega_rad_s);

// Mass displacement amplitude when driven exactly at resonance, where the
// spring and inertia terms cancel and only damping limits the motion:
//   x = m*a / ((Dp + De) * wn)
double displacement_at_resonance(const GeneratorParams& p, const Excitation& exc,
                                 double em_damping_ns_per_m);

struct FrequencyPoint {
    double displacement_m = 0.0;     // amplitude
    double emf_pk_v = 0.0;           // open-circuit emf peak K*w*x
    double load_voltage_pk_v = 0.0;  // emf after the coil divider (== emf when open)
};

// Full forced-response magnitude at any frequency:
//   x(w) = m*a / sqrt((k - m*w^2)^2 + ((Dp+De)*w)^2)
FrequencyPoint frequency_response(const GeneratorParams& p, double acceleration_m_s2,
                                  double frequency_hz, const Load& load);

// Ceiling on extractable electrical power, reached when De matches Dp:
//   Pmax = (m*a)^2 / (8*Dp)
double max_power(const GeneratorParams& p, const Excitation& exc);

// Load resistance that realizes the matched condition De = Dp (with L = 0):
//   Rl = K^2/Dp - Rc
// Throws NonPhysicalOptimum when the coil resistance alone already exceeds
// K^2/Dp, i.e. the matched condition is unreachable with a passive load.
double optimal_load(const GeneratorParams& p);

// Operating point of the generator at resonance with a plain resistive load.
//
// `electrical_power` is the power converted out of the mechanical domain,
// De*v^2/2 -- the quantity whose maximum over Rl is max_power(). It is what
// the source model calls load power (the coil loss is not split out).
// `load_share_power` additionally applies the resistive divider Rl/|Z|, and
// `load_voltage_pk` the corresponding voltage divider; the two bookkeepings
// are both reported because measured data is usually quoted load-side.
struct ResistivePoint {
    double load_ohm = 0.0;
    double em_damping_ns_per_m = 0.0;
    double velocity_pk_m_s = 0.0;
    double displacement_pk_m = 0.0;
    double emf_pk_v = 0.0;
    double load_voltage_pk_v = 0.0;
    double electrical_power_w = 0.0;
    double load_share_power_w = 0.0;
};

// Excitation must be at resonance (caller's responsibility; the frequency in
// `exc` is used only for the divider's j*w*L term and the displacement).
ResistivePoint load_power_resistive(const GeneratorParams& p, const Excitation& exc,
                                    double load_ohm);

// ---------------------------------------------------------------------------
// Presets: two characterized reference generators. Their Dp and K are not
// directly measurable; they are recovered by inverting the matched-power and
// optimum-load relations from bench measurements (anchor values below), and
// the spring constant from the measured resonance.
struct PresetAnchors {
    double measured_max_power_w = 0.0;
    double measured_optimal_load_ohm = 0.0;
};

struct GeneratorPreset {
    std::string name;
    GeneratorParams params;
    Excitation excitation;  // characterization drive: bench acceleration at resonance
    PresetAnchors anchors;
    // Informational only (construction data); never enters the model.
    std::vector<std::pair<std::string, std::string>> notes;
};

const GeneratorPreset& macro_preset();
const GeneratorPreset& micro_preset();

// nullptr when the name is unknown. Known names: "macro", "micro".
const GeneratorPreset* find_preset(std::string_view name);
const std::vector<std::string>& preset_names();

}  // namespace emvm
