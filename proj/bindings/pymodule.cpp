#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <utility>
#include <vector>

#include "emvm/coupled.hpp"
#include "emvm/errors.hpp"
#include "emvm/generator.hpp"
#include "emvm/ladder_sim.hpp"
#include "emvm/vm_analytic.hpp"

namespace py = pybind11;

PYBIND11_MODULE(_emvm, m) {
    m.doc() = "Resonant EM vibration harvester + switched-capacitor multiplier toolkit";

    // ---- errors ---------------------------------------------------------
    static py::exception<emvm::ModelError> model_error(m, "ModelError", PyExc_RuntimeError);
    static py::exception<emvm::NonPhysicalOptimum> non_physical(m, "NonPhysicalOptimum",
                                                                model_error);
    static py::exception<emvm::NoConvergence> no_convergence(m, "NoConvergence", model_error);
    static py::exception<emvm::DegenerateFit> degenerate_fit(m, "DegenerateFit", model_error);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const emvm::NonPhysicalOptimum& e) {
            py::set_error(non_physical, e.what());
        } catch (const emvm::NoConvergence& e) {
            py::set_error(no_convergence, e.what());
        } catch (const emvm::DegenerateFit& e) {
            py::set_error(degenerate_fit, e.what());
        } catch (const emvm::ModelError& e) {
            py::set_error(model_error, e.what());
        }
    });

    // ---- generator ------------------------------------------------------
    py::class_<emvm::GeneratorParams>(m, "GeneratorParams")
        .def(py::init<>())
        .def_readwrite("mass_kg", &emvm::GeneratorParams::mass_kg)
        .def_readwrite("spring_n_per_m", &emvm::GeneratorParams::spring_n_per_m)
        .def_readwrite("parasitic_damping_ns_per_m",
                       &emvm::GeneratorParams::parasitic_damping_ns_per_m)
        .def_readwrite("transduction_v_s_per_m",
                       &emvm::GeneratorParams::transduction_v_s_per_m)
        .def_readwrite("coil_resistance_ohm", &emvm::GeneratorParams::coil_resistance_ohm)
        .def_readwrite("coil_inductance_h", &emvm::GeneratorParams::coil_inductance_h);

    py::class_<emvm::Excitation>(m, "Excitation")
        .def(py::init<>())
        .def(py::init([](double a, double f) {
                 return emvm::Excitation{a, f};
             }),
             py::arg("acceleration_m_s2"), py::arg("frequency_hz"))
        .def_readwrite("acceleration_m_s2", &emvm::Excitation::acceleration_m_s2)
        .def_readwrite("frequency_hz", &emvm::Excitation::frequency_hz);

    py::class_<emvm::Load>(m, "Load")
        .def_static("ohms", &emvm::Load::ohms, py::arg("resistance_ohm"))
        .def_static("open", &emvm::Load::open)
        .def_property_readonly("is_open", &emvm::Load::is_open)
        .def_property_readonly("resistance_ohm", [](const emvm::Load& l) {
            return l.is_open() ? std::optional<double>() : l.resistance_ohm();
        });

    py::class_<emvm::FrequencyPoint>(m, "FrequencyPoint")
        .def_readonly("displacement_m", &emvm::FrequencyPoint::displacement_m)
        .def_readonly("emf_pk_v", &emvm::FrequencyPoint::emf_pk_v)
        .def_readonly("load_voltage_pk_v", &emvm::FrequencyPoint::load_voltage_pk_v);

    py::class_<emvm::ResistivePoint>(m, "ResistivePoint")
        .def_readonly("load_ohm", &emvm::ResistivePoint::load_ohm)
        .def_readonly("em_damping_ns_per_m", &emvm::ResistivePoint::em_damping_ns_per_m)
        .def_readonly("velocity_pk_m_s", &emvm::ResistivePoint::velocity_pk_m_s)
        .def_readonly("displacement_pk_m", &emvm::ResistivePoint::displacement_pk_m)
        .def_readonly("emf_pk_v", &emvm::ResistivePoint::emf_pk_v)
        .def_readonly("load_voltage_pk_v", &emvm::ResistivePoint::load_voltage_pk_v)
        .def_readonly("electrical_power_w", &emvm::ResistivePoint::electrical_power_w)
        .def_readonly("load_share_power_w", &emvm::ResistivePoint::load_share_power_w);

    py::class_<emvm::PresetAnchors>(m, "PresetAnchors")
        .def_readonly("measured_max_power_w", &emvm::PresetAnchors::measured_max_power_w)
        .def_readonly("measured_optimal_load_ohm",
                      &emvm::PresetAnchors::measured_optimal_load_ohm);

    py::class_<emvm::GeneratorPreset>(m, "GeneratorPreset")
        .def_readonly("name", &emvm::GeneratorPreset::name)
        .def_readonly("params", &emvm::GeneratorPreset::params)
        .def_readonly("excitation", &emvm::GeneratorPreset::excitation)
        .def_readonly("anchors", &emvm::GeneratorPreset::anchors)
        .def_readonly("notes", &emvm::GeneratorPreset::notes);

    m.def("validate_generator",
          static_cast<void (*)(const emvm::GeneratorParams&)>(&emvm::validate));
    m.def("resonant_frequency", &emvm::resonant_frequency, py::arg("params"));
    m.def("em_damping", &emvm::em_damping, py::arg("params"), py::arg("load"),
          py::arg("omega_rad_s"));
    m.def("displacement_at_resonance", &emvm::displacement_at_resonance, py::arg("params"),
          py::arg("excitation"), py::arg("em_damping_ns_per_m"));
    m.def("frequency_response", &emvm::frequency_response, py::arg("params"),
          py::arg("acceleration_m_s2"), py::arg("frequency_hz"), py::arg("load"));
    m.def("max_power", &emvm::max_power, py::arg("params"), py::arg("excitation"));
    m.def("optimal_load", &emvm::optimal_load, py::arg("params"));
    m.def("load_power_resistive", &emvm::load_power_resistive, py::arg("params"),
          py::arg("excitation"), py::arg("load_ohm"));
    m.def("macro_preset", &emvm::macro_preset, py::return_value_policy::reference);
    m.def("micro_preset", &emvm::micro_preset, py::return_value_policy::reference);
    m.def("preset_names", &emvm::preset_names, py::return_value_policy::reference);
    m.def(
        "find_preset",
        [](const std::string& name) -> const emvm::GeneratorPreset* {
            return emvm::find_preset(name);
        },
        py::arg("name"), py::return_value_policy::reference);

    // ---- analytic multiplier ---------------------------------------------
    py::class_<emvm::VmDesign::SwitchLoss>(m, "SwitchLoss")
        .def(py::init<>())
        .def_readwrite("constant_w", &emvm::VmDesign::SwitchLoss::constant_w)
        .def_readwrite("per_conductance_w_ohm",
                       &emvm::VmDesign::SwitchLoss::per_conductance_w_ohm);

    py::class_<emvm::VmDesign>(m, "VmDesign")
        .def(py::init<>())
        .def(py::init([](int stages, double capacitance) {
                 emvm::VmDesign d;
                 d.stages = stages;
                 d.stage_capacitance_f = capacitance;
                 return d;
             }),
             py::arg("stages"), py::arg("stage_capacitance_f"))
        .def_readwrite("stages", &emvm::VmDesign::stages)
        .def_readwrite("stage_capacitance_f", &emvm::VmDesign::stage_capacitance_f)
        .def_readwrite("switch_on_ohm", &emvm::VmDesign::switch_on_ohm)
        .def_readwrite("switch_off_ohm", &emvm::VmDesign::switch_off_ohm)
        .def_readwrite("comparator_power_w", &emvm::VmDesign::comparator_power_w)
        .def_readwrite("supply_voltage_v", &emvm::VmDesign::supply_voltage_v)
        .def_readwrite("switch_overhead", &emvm::VmDesign::switch_overhead);

    py::class_<emvm::VmOutput>(m, "VmOutput")
        .def_readonly("volts", &emvm::VmOutput::volts)
        .def_readonly("saturated", &emvm::VmOutput::saturated);

    py::class_<emvm::VmOperatingPoint>(m, "VmOperatingPoint")
        .def_readonly("input_pk_v", &emvm::VmOperatingPoint::input_pk_v)
        .def_readonly("output_v", &emvm::VmOperatingPoint::output_v)
        .def_readonly("load_current_a", &emvm::VmOperatingPoint::load_current_a)
        .def_readonly("lambda_", &emvm::VmOperatingPoint::lambda)
        .def_readonly("eta", &emvm::VmOperatingPoint::eta)
        .def_readonly("load_power_w", &emvm::VmOperatingPoint::load_power_w)
        .def_readonly("input_power_w", &emvm::VmOperatingPoint::input_power_w)
        .def_readonly("overhead_power_w", &emvm::VmOperatingPoint::overhead_power_w)
        .def_readonly("eta_overall", &emvm::VmOperatingPoint::eta_overall);

    m.def("validate_vm", static_cast<void (*)(const emvm::VmDesign&)>(&emvm::validate));
    m.def("equivalent_resistance", &emvm::equivalent_resistance, py::arg("stages"),
          py::arg("stage_capacitance_f"), py::arg("frequency_hz"));
    m.def("output_voltage", &emvm::output_voltage, py::arg("stages"), py::arg("input_pk_v"),
          py::arg("load_current_a"), py::arg("rm_ohm"));
    m.def("loaded_output",
          static_cast<emvm::VmOperatingPoint (*)(int, double, double, double)>(
              &emvm::loaded_output),
          py::arg("stages"), py::arg("input_pk_v"), py::arg("rm_ohm"), py::arg("load_ohm"));
    m.def("loaded_output_design",
          static_cast<emvm::VmOperatingPoint (*)(const emvm::VmDesign&, double, double,
                                                 double)>(&emvm::loaded_output),
          py::arg("design"), py::arg("input_pk_v"), py::arg("frequency_hz"),
          py::arg("load_ohm"));
    m.def("input_resistance", &emvm::input_resistance, py::arg("stages"), py::arg("rm_ohm"),
          py::arg("load_ohm"));
    m.def("overhead_power", &emvm::overhead_power, py::arg("design"), py::arg("load_ohm"));
    m.def("switch_constant_for_target", &emvm::switch_constant_for_target,
          py::arg("design"), py::arg("input_pk_v"), py::arg("frequency_hz"),
          py::arg("load_ohm"), py::arg("target_eta_overall"));

    // ---- coupled ----------------------------------------------------------
    py::class_<emvm::OperatingPoint>(m, "OperatingPoint")
        .def_readonly("load_ohm", &emvm::OperatingPoint::load_ohm)
        .def_readonly("input_resistance_ohm", &emvm::OperatingPoint::input_resistance_ohm)
        .def_readonly("rm_ohm", &emvm::OperatingPoint::rm_ohm)
        .def_readonly("em_damping_ns_per_m", &emvm::OperatingPoint::em_damping_ns_per_m)
        .def_readonly("velocity_pk_m_s", &emvm::OperatingPoint::velocity_pk_m_s)
        .def_readonly("displacement_pk_m", &emvm::OperatingPoint::displacement_pk_m)
        .def_readonly("emf_pk_v", &emvm::OperatingPoint::emf_pk_v)
        .def_readonly("vm_input_pk_v", &emvm::OperatingPoint::vm_input_pk_v)
        .def_readonly("output_v", &emvm::OperatingPoint::output_v)
        .def_readonly("load_current_a", &emvm::OperatingPoint::load_current_a)
        .def_readonly("lambda_", &emvm::OperatingPoint::lambda)
        .def_readonly("eta", &emvm::OperatingPoint::eta)
        .def_readonly("load_power_w", &emvm::OperatingPoint::load_power_w)
        .def_readonly("mechanical_power_w", &emvm::OperatingPoint::mechanical_power_w)
        .def_readonly("converter_input_power_w",
                      &emvm::OperatingPoint::converter_input_power_w)
        .def_readonly("converter_load_power_w",
                      &emvm::OperatingPoint::converter_load_power_w)
        .def_readonly("overhead_power_w", &emvm::OperatingPoint::overhead_power_w)
        .def_readonly("eta_overall", &emvm::OperatingPoint::eta_overall)
        .def_readonly("energy_audit_ratio", &emvm::OperatingPoint::energy_audit_ratio);

    py::class_<emvm::LoadGrid>(m, "LoadGrid")
        .def(py::init([](double lo, double hi, int points, bool log_spaced) {
                 return emvm::LoadGrid{lo, hi, points, log_spaced};
             }),
             py::arg("min_ohm"), py::arg("max_ohm"), py::arg("points"),
             py::arg("log_spaced") = true)
        .def_readwrite("min_ohm", &emvm::LoadGrid::min_ohm)
        .def_readwrite("max_ohm", &emvm::LoadGrid::max_ohm)
        .def_readwrite("points", &emvm::LoadGrid::points)
        .def_readwrite("log_spaced", &emvm::LoadGrid::log_spaced);

    py::class_<emvm::SweepResult>(m, "SweepResult")
        .def_readonly("points", &emvm::SweepResult::points)
        .def_readonly("best_index", &emvm::SweepResult::best_index);

    py::class_<emvm::Optimum>(m, "Optimum")
        .def_readonly("load_ohm", &emvm::Optimum::load_ohm)
        .def_readonly("load_power_w", &emvm::Optimum::load_power_w)
        .def_readonly("at_boundary", &emvm::Optimum::at_boundary);

    m.def("operating_point", &emvm::operating_point, py::arg("generator"),
          py::arg("excitation"), py::arg("vm"), py::arg("load_ohm"));
    m.def("grid_points", &emvm::grid_points, py::arg("grid"));
    m.def("sweep_load", &emvm::sweep_load, py::arg("generator"), py::arg("excitation"),
          py::arg("vm"), py::arg("grid"));
    m.def("find_optimum", &emvm::find_optimum, py::arg("generator"), py::arg("excitation"),
          py::arg("vm"), py::arg("min_ohm"), py::arg("max_ohm"));

    // ---- time-domain ladder ------------------------------------------------
    py::class_<emvm::LadderSource>(m, "LadderSource")
        .def(py::init([](double vi, double f) {
                 return emvm::LadderSource{vi, f};
             }),
             py::arg("input_pk_v"), py::arg("frequency_hz"))
        .def_readwrite("input_pk_v", &emvm::LadderSource::input_pk_v)
        .def_readwrite("frequency_hz", &emvm::LadderSource::frequency_hz);

    py::class_<emvm::LadderCircuit::Branch>(m, "Branch")
        .def_readonly("a", &emvm::LadderCircuit::Branch::a)
        .def_readonly("b", &emvm::LadderCircuit::Branch::b);

    py::class_<emvm::LadderCircuit>(m, "LadderCircuit")
        .def_readonly("design", &emvm::LadderCircuit::design)
        .def_readonly("source", &emvm::LadderCircuit::source)
        .def_readonly("load_ohm", &emvm::LadderCircuit::load_ohm)
        .def_readonly("capacitors", &emvm::LadderCircuit::capacitors)
        .def_readonly("switches", &emvm::LadderCircuit::switches);

    py::class_<emvm::SimConfig>(m, "SimConfig")
        .def(py::init<>())
        .def_readwrite("steps_per_cycle", &emvm::SimConfig::steps_per_cycle)
        .def_readwrite("max_cycles", &emvm::SimConfig::max_cycles)
        .def_readwrite("convergence_tol", &emvm::SimConfig::convergence_tol);

    py::class_<emvm::TimeDomainResult>(m, "TimeDomainResult")
        .def_readonly("vo_mean", &emvm::TimeDomainResult::vo_mean)
        .def_readonly("ripple_pp", &emvm::TimeDomainResult::ripple_pp)
        .def_readonly("cycles", &emvm::TimeDomainResult::cycles)
        .def_readonly("lambda_", &emvm::TimeDomainResult::lambda)
        .def_readonly("eta", &emvm::TimeDomainResult::eta)
        .def_readonly("energy_in_j", &emvm::TimeDomainResult::energy_in_j)
        .def_readonly("energy_load_j", &emvm::TimeDomainResult::energy_load_j)
        .def_readonly("energy_switch_j", &emvm::TimeDomainResult::energy_switch_j)
        .def_readonly("energy_caps_delta_j", &emvm::TimeDomainResult::energy_caps_delta_j)
        .def_readonly("energy_audit_ratio", &emvm::TimeDomainResult::energy_audit_ratio)
        .def_readonly("t_s", &emvm::TimeDomainResult::t_s)
        .def_readonly("v_source", &emvm::TimeDomainResult::v_source)
        .def_readonly("v_out", &emvm::TimeDomainResult::v_out)
        .def_readonly("i_load", &emvm::TimeDomainResult::i_load)
        .def_readonly("cap_v", &emvm::TimeDomainResult::cap_v);

    py::class_<emvm::RmFit>(m, "RmFit")
        .def_readonly("rm_ohm", &emvm::RmFit::rm_ohm)
        .def_readonly("ideality", &emvm::RmFit::ideality);

    m.def("build_ladder", &emvm::build_ladder, py::arg("design"), py::arg("source"),
          py::arg("load_ohm"));
    m.def("simulate", &emvm::simulate, py::arg("circuit"), py::arg("config") = emvm::SimConfig{},
          py::call_guard<py::gil_scoped_release>());
    m.def(
        "extract_equivalent_resistance",
        [](const std::vector<std::pair<double, double>>& iv, int stages, double vi) {
            return emvm::extract_equivalent_resistance(iv, stages, vi);
        },
        py::arg("iv_points"), py::arg("stages"), py::arg("input_pk_v"));
}
