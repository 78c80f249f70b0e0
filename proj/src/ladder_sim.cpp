#include "emvm/ladder_sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "emvm/errors.hpp"

namespace emvm {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Dense LU with partial pivoting; the systems here are tiny (one row per
// ladder node), so no library dependency is warranted.
struct LuFactor {
    int n = 0;
    std::vector<double> lu;   // row-major
    std::vector<int> pivot;   // row swapped with i at step i

    static LuFactor factor(const std::vector<double>& matrix, int n) {
        LuFactor f;
        f.n = n;
        f.lu = matrix;
        f.pivot.resize(static_cast<std::size_t>(n));
        auto at = [&](int r, int c) -> double& {
            return f.lu[static_cast<std::size_t>(r) * n + c];
        };
        for (int i = 0; i < n; ++i) {
            int p = i;
            double best = std::abs(at(i, i));
            for (int r = i + 1; r < n; ++r) {
                if (std::abs(at(r, i)) > best) {
                    best = std::abs(at(r, i));
                    p = r;
                }
            }
            if (!(best > 0.0)) {
                throw ModelError("singular conductance matrix: floating node in ladder");
            }
            f.pivot[static_cast<std::size_t>(i)] = p;
            if (p != i) {
                for (int c = 0; c < n; ++c) std::swap(at(i, c), at(p, c));
            }
            const double inv = 1.0 / at(i, i);
            for (int r = i + 1; r < n; ++r) {
                const double m = at(r, i) * inv;
                at(r, i) = m;
                for (int c = i + 1; c < n; ++c) at(r, c) -= m * at(i, c);
            }
        }
        return f;
    }

    void solve(std::vector<double>& b) const {
        auto at = [&](int r, int c) {
            return lu[static_cast<std::size_t>(r) * n + c];
        };
        for (int i = 0; i < n; ++i) {
            const int p = pivot[static_cast<std::size_t>(i)];
            if (p != i) std::swap(b[static_cast<std::size_t>(i)], b[static_cast<std::size_t>(p)]);
            for (int r = i + 1; r < n; ++r) {
                b[static_cast<std::size_t>(r)] -= at(r, i) * b[static_cast<std::size_t>(i)];
            }
        }
        for (int i = n - 1; i >= 0; --i) {
            double v = b[static_cast<std::size_t>(i)];
            for (int c = i + 1; c < n; ++c) v -= at(i, c) * b[static_cast<std::size_t>(c)];
            b[static_cast<std::size_t>(i)] = v / at(i, i);
        }
    }
};

}  // namespace

LadderCircuit build_ladder(const VmDesign& d, const LadderSource& s, double load_ohm) {
    validate(d);
    if (!(s.frequency_hz > 0.0) || !std::isfinite(s.frequency_hz)) {
        throw std::invalid_argument("source frequency_hz must be positive and finite");
    }
    if (s.input_pk_v < 0.0 || !std::isfinite(s.input_pk_v)) {
        throw std::invalid_argument("source input_pk_v must be non-negative and finite");
    }
    if (load_ohm < 0.0 || !std::isfinite(load_ohm)) {
        throw std::invalid_argument("load_ohm must be non-negative (0 = open) and finite");
    }

    LadderCircuit c;
    c.design = d;
    c.source = s;
    c.load_ohm = load_ohm;
    const int n = d.stages;
    c.capacitors.reserve(static_cast<std::size_t>(n));
    c.switches.reserve(static_cast<std::size_t>(n));
    for (int k = 1; k <= n; ++k) {
        if (k % 2 == n % 2) {
            c.capacitors.push_back({k, 0});  // smoothing, straight to ground
        } else {
            c.capacitors.push_back({k, k >= 3 ? k - 2 : -1});  // coupling ladder
        }
        const int from = (k == 1) ? (n % 2 == 0 ? 0 : -1) : k - 1;
        c.switches.push_back({from, k});
    }
    return c;
}

TimeDomainResult simulate(const LadderCircuit& c, const SimConfig& config) {
    validate(c.design);
    const int n = c.design.stages;
    if (n > 63) throw std::invalid_argument("ladder simulation supports at most 63 stages");
    if (config.steps_per_cycle < 8) {
        throw std::invalid_argument("steps_per_cycle must be at least 8");
    }
    if (config.max_cycles < 1) throw std::invalid_argument("max_cycles must be at least 1");
    if (!(config.convergence_tol > 0.0)) {
        throw std::invalid_argument("convergence_tol must be positive");
    }
    if (c.capacitors.size() != static_cast<std::size_t>(n) ||
        c.switches.size() != static_cast<std::size_t>(n)) {
        throw std::invalid_argument("circuit must carry one capacitor and one switch per cell");
    }

    const double period = 1.0 / c.source.frequency_hz;
    const double h = period / config.steps_per_cycle;
    const double gc = c.design.stage_capacitance_f / h;
    const double g_on = 1.0 / c.design.switch_on_ohm;
    const double g_off = 1.0 / c.design.switch_off_ohm;
    const bool open_load = !(c.load_ohm > 0.0);
    const double g_load = open_load ? 0.0 : 1.0 / c.load_ohm;
    const double vi = c.source.input_pk_v;
    const double omega = kTwoPi * c.source.frequency_hz;
    const int spc = config.steps_per_cycle;

    const auto node_index = [n](int node) {
        if (node < -1 || node > n) throw std::invalid_argument("branch touches unknown node");
        return node;
    };
    for (const auto& br : c.capacitors) {
        node_index(br.a);
        node_index(br.b);
    }
    for (const auto& br : c.switches) {
        node_index(br.a);
        node_index(br.b);
    }

    // Conductance matrix per switch-state word, LU-factored once and reused:
    // the matrix depends only on which switches conduct.
    std::unordered_map<std::uint64_t, LuFactor> factor_cache;
    const auto factor_for = [&](std::uint64_t state) -> const LuFactor& {
        auto it = factor_cache.find(state);
        if (it != factor_cache.end()) return it->second;
        std::vector<double> matrix(static_cast<std::size_t>(n) * n, 0.0);
        const auto stamp_g = [&](int a, int b, double g) {
            if (a > 0) matrix[static_cast<std::size_t>(a - 1) * n + (a - 1)] += g;
            if (b > 0) matrix[static_cast<std::size_t>(b - 1) * n + (b - 1)] += g;
            if (a > 0 && b > 0) {
                matrix[static_cast<std::size_t>(a - 1) * n + (b - 1)] -= g;
                matrix[static_cast<std::size_t>(b - 1) * n + (a - 1)] -= g;
            }
        };
        for (const auto& br : c.capacitors) stamp_g(br.a, br.b, gc);
        for (std::size_t i = 0; i < c.switches.size(); ++i) {
            stamp_g(c.switches[i].a, c.switches[i].b,
                    (state >> i) & 1u ? g_on : g_off);
        }
        if (!open_load) matrix[static_cast<std::size_t>(n - 1) * n + (n - 1)] += g_load;
        return factor_cache.emplace(state, LuFactor::factor(matrix, n)).first->second;
    };

    std::vector<double> u(static_cast<std::size_t>(n), 0.0);  // cap branch voltages
    std::vector<double> u_new(static_cast<std::size_t>(n), 0.0);
    std::vector<double> x(static_cast<std::size_t>(n), 0.0);  // node voltages 1..n
    std::uint64_t state = 0;

    const auto node_voltage = [&](int node, double vs) {
        if (node == 0) return 0.0;
        if (node == -1) return vs;
        return x[static_cast<std::size_t>(node - 1)];
    };

    const auto solve_state = [&](double vs, std::uint64_t st) {
        std::fill(x.begin(), x.end(), 0.0);
        for (std::size_t i = 0; i < c.capacitors.size(); ++i) {
            const auto& br = c.capacitors[i];
            const double hist = gc * u[i];  // flows b -> a
            if (br.a > 0) x[static_cast<std::size_t>(br.a - 1)] += hist;
            if (br.b > 0) x[static_cast<std::size_t>(br.b - 1)] -= hist;
            if (br.a == -1 && br.b > 0) x[static_cast<std::size_t>(br.b - 1)] += gc * vs;
            if (br.b == -1 && br.a > 0) x[static_cast<std::size_t>(br.a - 1)] += gc * vs;
        }
        for (std::size_t i = 0; i < c.switches.size(); ++i) {
            const auto& br = c.switches[i];
            const double g = (st >> i) & 1u ? g_on : g_off;
            if (br.a == -1 && br.b > 0) x[static_cast<std::size_t>(br.b - 1)] += g * vs;
            if (br.b == -1 && br.a > 0) x[static_cast<std::size_t>(br.a - 1)] += g * vs;
        }
        factor_for(st).solve(x);
    };

    // Ideal-diode consistency: re-solve until every switch state agrees with
    // the sign of its branch voltage. Flipping all inconsistent switches at
    // once nearly always settles immediately; if the state word ever repeats
    // (chatter around a commutation instant), fall back to flipping one
    // switch at a time, which cannot cycle for this network class.
    std::unordered_set<std::uint64_t> seen;
    const auto settle = [&](double vs) {
        seen.clear();
        bool flip_all = true;
        const int cap = 4 * n + 24;
        for (int iter = 0; iter < cap; ++iter) {
            if (flip_all && !seen.insert(state).second) flip_all = false;
            solve_state(vs, state);
            std::uint64_t next = state;
            for (std::size_t i = 0; i < c.switches.size(); ++i) {
                const auto& br = c.switches[i];
                const double vf = node_voltage(br.a, vs) - node_voltage(br.b, vs);
                const bool on = (state >> i) & 1u;
                if (on && vf < 0.0) {
                    next &= ~(std::uint64_t{1} << i);
                } else if (!on && vf > 0.0) {
                    next |= std::uint64_t{1} << i;
                }
                if (!flip_all && next != state) break;  // one flip per pass
            }
            if (next == state) return;
            state = next;
        }
        // Accept the last consistent-enough solution: chatter this persistent
        // only happens with branch voltages at rounding level.
        solve_state(vs, state);
    };

    TimeDomainResult result;
    result.t_s.resize(static_cast<std::size_t>(spc));
    result.v_source.resize(static_cast<std::size_t>(spc));
    result.v_out.resize(static_cast<std::size_t>(spc));
    result.i_load.resize(static_cast<std::size_t>(spc));
    result.cap_v.assign(static_cast<std::size_t>(n),
                        std::vector<double>(static_cast<std::size_t>(spc), 0.0));

    double prev_mean = 0.0;
    bool have_prev = false;
    int streak = 0;

    for (int cycle = 0; cycle < config.max_cycles; ++cycle) {
        double sum_vo = 0.0;
        double vo_max = -1e300;
        double vo_min = 1e300;
        double e_in = 0.0;
        double e_load = 0.0;
        double e_switch = 0.0;
        const std::vector<double> u_start = u;

        for (int s = 0; s < spc; ++s) {
            const double t =
                (static_cast<double>(cycle) * spc + s + 1) * h;
            const double vs = vi * std::sin(omega * t);
            settle(vs);

            for (std::size_t i = 0; i < c.capacitors.size(); ++i) {
                u_new[i] = node_voltage(c.capacitors[i].a, vs) -
                           node_voltage(c.capacitors[i].b, vs);
            }
            const double vout = x[static_cast<std::size_t>(n - 1)];
            const double i_out = vout * g_load;
            e_load += vout * i_out * h;

            double i_source = 0.0;
            for (std::size_t i = 0; i < c.capacitors.size(); ++i) {
                const double ib = gc * (u_new[i] - u[i]);  // current a -> b
                if (c.capacitors[i].a == -1) i_source += ib;
                if (c.capacitors[i].b == -1) i_source -= ib;
            }
            for (std::size_t i = 0; i < c.switches.size(); ++i) {
                const auto& br = c.switches[i];
                const double vf = node_voltage(br.a, vs) - node_voltage(br.b, vs);
                const double g = (state >> i) & 1u ? g_on : g_off;
                e_switch += vf * vf * g * h;
                const double ib = vf * g;
                if (br.a == -1) i_source += ib;
                if (br.b == -1) i_source -= ib;
            }
            e_in += vs * i_source * h;

            u.swap(u_new);
            sum_vo += vout;
            vo_max = std::max(vo_max, vout);
            vo_min = std::min(vo_min, vout);

            const auto si = static_cast<std::size_t>(s);
            result.t_s[si] = t;
            result.v_source[si] = vs;
            result.v_out[si] = vout;
            result.i_load[si] = i_out;
            for (std::size_t i = 0; i < u.size(); ++i) result.cap_v[i][si] = u[i];
        }

        const double mean = sum_vo / spc;
        double caps_delta = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) {
            caps_delta += 0.5 * c.design.stage_capacitance_f *
                          (u[i] * u[i] - u_start[i] * u_start[i]);
        }

        if (have_prev) {
            const double denom = std::max(std::abs(mean), 1e-30);
            if (std::abs(mean - prev_mean) / denom < config.convergence_tol) {
                ++streak;
            } else {
                streak = 0;
            }
        }
        prev_mean = mean;
        have_prev = true;

        if (streak >= 3) {
            result.vo_mean = mean;
            result.ripple_pp = vo_max - vo_min;
            result.cycles = cycle + 1;
            result.lambda = vi > 0.0 ? mean / vi : 0.0;
            result.eta = result.lambda / n;
            result.energy_in_j = e_in;
            result.energy_load_j = e_load;
            result.energy_switch_j = e_switch;
            result.energy_caps_delta_j = caps_delta;
            const double spent = e_load + e_switch + caps_delta;
            result.energy_audit_ratio = spent != 0.0 ? e_in / spent : 1.0;
            return result;
        }
    }

    throw NoConvergence("ladder simulation did not reach periodic steady state within max_cycles");
}

RmFit extract_equivalent_resistance(std::span<const std::pair<double, double>> iv_points,
                                    int stages, double input_pk_v) {
    if (stages < 1) throw std::invalid_argument("stages must be >= 1");
    if (!(input_pk_v > 0.0)) throw std::invalid_argument("input_pk_v must be positive");
    if (iv_points.size() < 2) {
        throw DegenerateFit("source-resistance fit needs at least two (I, Vo) points");
    }

    double mean_i = 0.0;
    double mean_v = 0.0;
    for (const auto& [i, v] : iv_points) {
        mean_i += i;
        mean_v += v;
    }
    mean_i /= static_cast<double>(iv_points.size());
    mean_v /= static_cast<double>(iv_points.size());

    double var_i = 0.0;
    double cov_iv = 0.0;
    for (const auto& [i, v] : iv_points) {
        var_i += (i - mean_i) * (i - mean_i);
        cov_iv += (i - mean_i) * (v - mean_v);
    }
    if (!(var_i > 0.0)) {
        throw DegenerateFit("source-resistance fit needs two distinct load currents");
    }

    const double slope = cov_iv / var_i;  // dVo/dI, negative for a real source
    RmFit fit;
    fit.rm_ohm = -slope;
    const double intercept = mean_v - slope * mean_i;
    fit.ideality = intercept / (stages * input_pk_v);
    return fit;
}

}  // namespace emvm
