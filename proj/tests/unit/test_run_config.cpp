#include <string>

#include <doctest.h>

#include "emvm/errors.hpp"
#include "emvm/run_config.hpp"

using namespace emvm;

namespace {

// Expect a ConfigError whose dotted path matches exactly.
template <typename Fn>
void expect_config_error(Fn&& fn, const std::string& path) {
    try {
        fn();
        FAIL_CHECK("expected ConfigError at '" << path << "', nothing thrown");
    } catch (const ConfigError& e) {
        CHECK(e.path == path);
    }
}

}  // namespace

TEST_CASE("full document parses into every section") {
    const std::string text = R"({
        "generator": {
            "mass_kg": 0.01,
            "spring_n_per_m": 986.96,
            "parasitic_damping_ns_per_m": 0.05,
            "transduction_v_s_per_m": 3.5355339059327378,
            "coil_resistance_ohm": 50.0,
            "coil_inductance_h": 0.001
        },
        "excitation": {"acceleration_m_s2": 1.0, "frequency_hz": 50.0},
        "vm": {
            "stages": 4,
            "stage_capacitance_f": 1e-4,
            "supply_voltage_v": 2.0,
            "switch_overhead": {"2.0": {"constant_w": 1e-5, "per_conductance_w_ohm": 0.0}}
        },
        "sweep": {"min_ohm": 100.0, "max_ohm": 1e6, "points": 61, "log_spaced": true},
        "sim": {"input_voltage_pk_v": 0.58, "frequency_hz": 53.0, "load_ohm": 5000.0,
                "steps_per_cycle": 800},
        "output": {"csv_path": "out.csv", "waveform_path": "wave.csv", "decimation": 10}
    })";
    const RunConfig cfg = parse_run_config(text);

    REQUIRE(cfg.generator.has_value());
    CHECK(cfg.generator->mass_kg == 0.01);
    CHECK(cfg.generator->coil_inductance_h == 0.001);
    CHECK_FALSE(cfg.preset_name.has_value());

    REQUIRE(cfg.excitation.has_value());
    CHECK(cfg.excitation->acceleration_m_s2 == 1.0);
    CHECK(cfg.excitation->frequency_hz == 50.0);

    REQUIRE(cfg.vm.has_value());
    CHECK(cfg.vm->stages == 4);
    CHECK(cfg.vm->switch_overhead.at(2.0).constant_w == 1e-5);

    REQUIRE(cfg.sweep.has_value());
    CHECK(cfg.sweep->points == 61);
    CHECK(cfg.sweep->log_spaced);

    REQUIRE(cfg.sim.has_value());
    CHECK(cfg.sim->load_ohm == 5000.0);
    CHECK(cfg.sim->config.steps_per_cycle == 800);
    CHECK(cfg.sim->config.max_cycles == 5000);  // default preserved

    CHECK(cfg.output.csv_path == "out.csv");
    CHECK(cfg.output.waveform_path == "wave.csv");
    CHECK(cfg.output.decimation == 10);
}

TEST_CASE("preset reference replaces inline parameters") {
    const RunConfig cfg = parse_run_config(R"({"generator": {"preset": "macro"}})");
    REQUIRE(cfg.preset_name.has_value());
    CHECK(*cfg.preset_name == "macro");
    CHECK_FALSE(cfg.generator.has_value());
}

TEST_CASE("unknown keys are rejected with their dotted path") {
    expect_config_error(
        [] { parse_run_config(R"({"generatr": {}})"); }, "generatr");
    expect_config_error(
        [] {
            parse_run_config(R"({"generator": {"preset": "macro", "mass_kg": 1.0}})");
        },
        "generator.mass_kg");
    expect_config_error(
        [] {
            parse_run_config(
                R"({"sweep": {"min_ohm": 1, "max_ohm": 2, "points": 5, "spacing": "log"}})");
        },
        "sweep.spacing");
    expect_config_error(
        [] {
            parse_run_config(
                R"({"vm": {"stages": 2, "stage_capacitance_f": 1e-4,
                           "switch_overhead": {"2.0": {"constant": 1.0}}}})");
        },
        "vm.switch_overhead.2.0.constant");
}

TEST_CASE("missing required fields name the field") {
    expect_config_error(
        [] {
            parse_run_config(R"({"generator": {
                "spring_n_per_m": 1.0, "parasitic_damping_ns_per_m": 0.1,
                "transduction_v_s_per_m": 1.0, "coil_resistance_ohm": 1.0}})");
        },
        "generator.mass_kg");
    expect_config_error(
        [] { parse_run_config(R"({"vm": {"stages": 4}})"); },
        "vm.stage_capacitance_f");
    expect_config_error(
        [] { parse_run_config(R"({"sim": {"frequency_hz": 50.0}})"); },
        "sim.input_voltage_pk_v");
}

TEST_CASE("type mismatches name the field") {
    expect_config_error(
        [] {
            parse_run_config(R"({"generator": {
                "mass_kg": "heavy", "spring_n_per_m": 1.0,
                "parasitic_damping_ns_per_m": 0.1, "transduction_v_s_per_m": 1.0,
                "coil_resistance_ohm": 1.0}})");
        },
        "generator.mass_kg");
    expect_config_error(
        [] {
            parse_run_config(
                R"({"vm": {"stages": 4.5, "stage_capacitance_f": 1e-4}})");
        },
        "vm.stages");
    expect_config_error(
        [] { parse_run_config(R"({"excitation": {"frequency_hz": true}})"); },
        "excitation.frequency_hz");
    expect_config_error([] { parse_run_config(R"({"output": {"decimation": 0}})"); },
                        "output.decimation");
}

TEST_CASE("frequency accepts the literal string resonance") {
    const RunConfig cfg = parse_run_config(
        R"({"excitation": {"acceleration_m_s2": 1.0, "frequency_hz": "resonance"}})");
    REQUIRE(cfg.excitation.has_value());
    CHECK_FALSE(cfg.excitation->frequency_hz.has_value());
}

TEST_CASE("switch_overhead keys must be positive voltages") {
    expect_config_error(
        [] {
            parse_run_config(
                R"({"vm": {"stages": 2, "stage_capacitance_f": 1e-4,
                           "switch_overhead": {"standard": {"constant_w": 1e-5}}}})");
        },
        "vm.switch_overhead.standard");
    expect_config_error(
        [] {
            parse_run_config(
                R"({"vm": {"stages": 2, "stage_capacitance_f": 1e-4,
                           "switch_overhead": {"-2.0": {"constant_w": 1e-5}}}})");
        },
        "vm.switch_overhead.-2.0");
}

TEST_CASE("semantic validation surfaces as config errors") {
    expect_config_error(
        [] { parse_run_config(R"({"generator": {"preset": "nano"}})"); },
        "generator.preset");
    expect_config_error(
        [] { parse_run_config(R"({"vm": {"stages": 0, "stage_capacitance_f": 1e-4}})"); },
        "vm");
    expect_config_error(
        [] {
            parse_run_config(R"({"sweep": {"min_ohm": 10.0, "max_ohm": 1.0, "points": 5}})");
        },
        "sweep");
    expect_config_error(
        [] {
            parse_run_config(
                R"({"sim": {"input_voltage_pk_v": 0.5, "frequency_hz": -1.0}})");
        },
        "sim.frequency_hz");
    expect_config_error(
        [] {
            parse_run_config(
                R"({"sim": {"input_voltage_pk_v": 0.5, "frequency_hz": 50.0,
                            "steps_per_cycle": 4}})");
        },
        "sim.steps_per_cycle");
}

TEST_CASE("malformed JSON is reported document-wide") {
    try {
        parse_run_config("{not json");
        FAIL_CHECK("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.path.empty());
        CHECK(std::string(e.what()).find("invalid JSON") != std::string::npos);
    }
    expect_config_error([] { parse_run_config("[1, 2, 3]"); }, "");
}

TEST_CASE("resolve_generator") {
    SUBCASE("preset carries its own excitation") {
        const ResolvedGenerator r =
            resolve_generator(parse_run_config(R"({"generator": {"preset": "micro"}})"));
        CHECK(r.label == "micro");
        CHECK(r.excitation.acceleration_m_s2 == 0.647);
        CHECK(r.excitation.frequency_hz == 53.0);
    }

    SUBCASE("excitation overrides apply on top of a preset") {
        const ResolvedGenerator r = resolve_generator(parse_run_config(
            R"({"generator": {"preset": "macro"},
                "excitation": {"acceleration_m_s2": 1.0, "frequency_hz": 12.0}})"));
        CHECK(r.excitation.acceleration_m_s2 == 1.0);
        CHECK(r.excitation.frequency_hz == 12.0);
    }

    SUBCASE("resonance resolves against the actual parameters") {
        const ResolvedGenerator r = resolve_generator(parse_run_config(
            R"({"generator": {"preset": "macro"},
                "excitation": {"frequency_hz": "resonance"}})"));
        CHECK(r.excitation.frequency_hz == doctest::Approx(14.1).epsilon(1e-9));
        CHECK(r.excitation.acceleration_m_s2 == 0.405);  // preset value kept
    }

    SUBCASE("inline generator demands an acceleration") {
        expect_config_error(
            [] {
                resolve_generator(parse_run_config(R"({"generator": {
                    "mass_kg": 0.01, "spring_n_per_m": 100.0,
                    "parasitic_damping_ns_per_m": 0.1,
                    "transduction_v_s_per_m": 1.0, "coil_resistance_ohm": 10.0}})"));
            },
            "excitation.acceleration_m_s2");
    }

    SUBCASE("empty document has no generator at all") {
        expect_config_error([] { resolve_generator(parse_run_config("{}")); },
                            "generator");
    }
}
