#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include <doctest.h>

#include "emvm/errors.hpp"
#include "emvm/ladder_sim.hpp"

using namespace emvm;

namespace {

VmDesign design(int stages) {
    VmDesign d;
    d.stages = stages;
    d.stage_capacitance_f = 1e-4;
    return d;
}

SimConfig fast_config(int steps_per_cycle = 800) {
    SimConfig cfg;
    cfg.steps_per_cycle = steps_per_cycle;
    return cfg;
}

constexpr double kVi = 0.58;
constexpr double kFreq = 53.0;

}  // namespace

TEST_CASE("ladder topology by stage count") {
    const LadderSource src{kVi, kFreq};

    SUBCASE("one cell is a peak rectifier") {
        const LadderCircuit c = build_ladder(design(1), src, 1000.0);
        REQUIRE(c.capacitors.size() == 1);
        CHECK(c.capacitors[0].a == 1);
        CHECK(c.capacitors[0].b == 0);
        CHECK(c.switches[0].a == -1);
        CHECK(c.switches[0].b == 1);
    }

    SUBCASE("two cells form the classic doubler") {
        const LadderCircuit c = build_ladder(design(2), src, 1000.0);
        REQUIRE(c.capacitors.size() == 2);
        CHECK(c.capacitors[0].a == 1);
        CHECK(c.capacitors[0].b == -1);  // coupling cap rides the source
        CHECK(c.capacitors[1].a == 2);
        CHECK(c.capacitors[1].b == 0);  // smoothing cap to ground
        CHECK(c.switches[0].a == 0);
        CHECK(c.switches[0].b == 1);
        CHECK(c.switches[1].a == 1);
        CHECK(c.switches[1].b == 2);
    }

    SUBCASE("three cells start the chain at the source") {
        const LadderCircuit c = build_ladder(design(3), src, 1000.0);
        CHECK(c.capacitors[0].a == 1);
        CHECK(c.capacitors[0].b == 0);  // odd n: odd nodes carry the DC column
        CHECK(c.capacitors[1].a == 2);
        CHECK(c.capacitors[1].b == -1);
        CHECK(c.capacitors[2].a == 3);
        CHECK(c.capacitors[2].b == 0);
        CHECK(c.switches[0].a == -1);
        CHECK(c.switches[0].b == 1);
    }

    SUBCASE("four cells alternate coupling and smoothing") {
        const LadderCircuit c = build_ladder(design(4), src, 1000.0);
        REQUIRE(c.capacitors.size() == 4);
        CHECK(c.capacitors[0].a == 1);
        CHECK(c.capacitors[0].b == -1);
        CHECK(c.capacitors[1].a == 2);
        CHECK(c.capacitors[1].b == 0);
        CHECK(c.capacitors[2].a == 3);
        CHECK(c.capacitors[2].b == 1);
        CHECK(c.capacitors[3].a == 4);
        CHECK(c.capacitors[3].b == 0);
        for (int k = 0; k < 4; ++k) {
            CHECK(c.switches[static_cast<std::size_t>(k)].a == k);
            CHECK(c.switches[static_cast<std::size_t>(k)].b == k + 1);
        }
    }

    SUBCASE("rejects bad inputs") {
        CHECK_THROWS_AS(build_ladder(design(4), LadderSource{0.58, 0.0}, 100.0),
                        std::invalid_argument);
        CHECK_THROWS_AS(build_ladder(design(4), src, -1.0), std::invalid_argument);
        CHECK_THROWS_AS(build_ladder(design(0), src, 100.0), std::invalid_argument);
    }
}

TEST_CASE("no-load output climbs to n times the drive amplitude") {
    for (int n : {1, 2, 3, 4}) {
        const LadderCircuit c = build_ladder(design(n), LadderSource{kVi, kFreq}, 0.0);
        const TimeDomainResult r = simulate(c, fast_config());
        CHECK(r.lambda == doctest::Approx(static_cast<double>(n)).epsilon(0.02));
        CHECK(r.eta == doctest::Approx(r.lambda / n).epsilon(1e-12));
        for (double i : r.i_load) CHECK(i == 0.0);
        CHECK(r.energy_load_j == 0.0);
    }
}

TEST_CASE("four-stage run against the independently derived reference") {
    // reference values from a from-scratch implicit-integration prototype of
    // the same network (800 steps/cycle)
    const LadderCircuit open_circuit =
        build_ladder(design(4), LadderSource{kVi, kFreq}, 0.0);
    const TimeDomainResult no_load = simulate(open_circuit, fast_config());
    CHECK(no_load.vo_mean == doctest::Approx(2.319663).epsilon(1e-3));
    CHECK(no_load.cycles > 4);
    CHECK(no_load.cycles < 200);

    const LadderCircuit loaded = build_ladder(design(4), LadderSource{kVi, kFreq}, 5000.0);
    const TimeDomainResult r = simulate(loaded, fast_config());
    CHECK(r.vo_mean == doctest::Approx(1.872065).epsilon(1e-3));
    CHECK(r.ripple_pp == doctest::Approx(0.05935).epsilon(0.02));
    CHECK(r.energy_audit_ratio == doctest::Approx(1.0).epsilon(0.01));
    CHECK(r.energy_in_j > r.energy_load_j);
    CHECK(r.energy_switch_j > 0.0);
}

TEST_CASE("mean output rises monotonically with load resistance") {
    double prev = 0.0;
    for (double rl : {5000.0, 10000.0, 20000.0}) {
        const TimeDomainResult r =
            simulate(build_ladder(design(4), LadderSource{kVi, kFreq}, rl), fast_config());
        CHECK(r.vo_mean > prev);
        prev = r.vo_mean;
        CHECK(r.energy_audit_ratio == doctest::Approx(1.0).epsilon(0.01));
    }
}

TEST_CASE("capacitor voltages stay within the ladder's physical bound") {
    const TimeDomainResult r = simulate(
        build_ladder(design(4), LadderSource{kVi, kFreq}, 10000.0), fast_config());
    for (const auto& cell : r.cap_v) {
        for (double v : cell) {
            CHECK(std::abs(v) <= 4 * kVi * 1.05);
        }
    }
}

TEST_CASE("halving the step size moves the answer by well under a percent") {
    const LadderCircuit c = build_ladder(design(4), LadderSource{kVi, kFreq}, 10000.0);
    const TimeDomainResult coarse = simulate(c, fast_config(800));
    const TimeDomainResult fine = simulate(c, fast_config(1600));
    CHECK(std::abs(fine.vo_mean - coarse.vo_mean) / fine.vo_mean < 0.005);
}

TEST_CASE("repeated runs are bit-identical") {
    const LadderCircuit c = build_ladder(design(4), LadderSource{kVi, kFreq}, 5000.0);
    const TimeDomainResult a = simulate(c, fast_config());
    const TimeDomainResult b = simulate(c, fast_config());
    CHECK(a.vo_mean == b.vo_mean);
    CHECK(a.ripple_pp == b.ripple_pp);
    CHECK(a.cycles == b.cycles);
    CHECK(a.energy_in_j == b.energy_in_j);
}

TEST_CASE("zero drive converges in the minimum number of cycles") {
    const LadderCircuit c = build_ladder(design(4), LadderSource{0.0, kFreq}, 5000.0);
    const TimeDomainResult r = simulate(c, fast_config());
    CHECK(r.vo_mean == 0.0);
    CHECK(r.cycles == 4);  // one seed cycle + three within-tolerance repeats
    CHECK(r.lambda == 0.0);
    CHECK(r.energy_audit_ratio == 1.0);
}

TEST_CASE("exhausting max_cycles raises NoConvergence") {
    SimConfig cfg = fast_config();
    cfg.max_cycles = 2;  // charge-up takes dozens of cycles
    const LadderCircuit c = build_ladder(design(4), LadderSource{kVi, kFreq}, 5000.0);
    CHECK_THROWS_AS(simulate(c, cfg), NoConvergence);
}

TEST_CASE("simulation config validation") {
    const LadderCircuit c = build_ladder(design(4), LadderSource{kVi, kFreq}, 5000.0);
    SimConfig cfg;
    cfg.steps_per_cycle = 4;
    CHECK_THROWS_AS(simulate(c, cfg), std::invalid_argument);
    cfg = SimConfig{};
    cfg.convergence_tol = 0.0;
    CHECK_THROWS_AS(simulate(c, cfg), std::invalid_argument);
    cfg = SimConfig{};
    cfg.max_cycles = 0;
    CHECK_THROWS_AS(simulate(c, cfg), std::invalid_argument);
}

TEST_CASE("source-resistance extraction") {
    SUBCASE("recovers an exact synthetic line") {
        // Vo = 2.32 - 1150 * I
        std::vector<std::pair<double, double>> iv;
        for (double i : {1e-5, 5e-5, 1e-4, 4e-4}) {
            iv.emplace_back(i, 2.32 - 1150.0 * i);
        }
        const RmFit fit = extract_equivalent_resistance(iv, 4, 0.58);
        CHECK(fit.rm_ohm == doctest::Approx(1150.0).epsilon(1e-9));
        CHECK(fit.ideality == doctest::Approx(1.0).epsilon(1e-9));
    }

    SUBCASE("rejects degenerate inputs") {
        std::vector<std::pair<double, double>> one = {{1e-4, 2.0}};
        CHECK_THROWS_AS(extract_equivalent_resistance(one, 4, 0.58), DegenerateFit);
        std::vector<std::pair<double, double>> same = {{1e-4, 2.0}, {1e-4, 2.1}};
        CHECK_THROWS_AS(extract_equivalent_resistance(same, 4, 0.58), DegenerateFit);
    }
}
