// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Criteria group into closed-form checks (1-3), pattern-formation
// runs (4-5), spectral theorems (6-7) and the numeric property suite (8).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <string>
#include <vector>

#include "ridgeline/dynamics.hpp"
#include "ridgeline/linestab.hpp"
#include "ridgeline/rng.hpp"

using namespace ridgeline;

namespace {

int failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
    std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion, detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

ForcePair fig5f_pair() {
    ForcePair pair;
    pair.fs = {ExpCoeff{0.1, 100.0}, 0.5, 0.0, CutoffMode::ShiftThenBlend};
    pair.fl = {ExpSumCoeff{0.13, -0.03, 100.0, 10.0}, 0.5, 0.0, CutoffMode::ShiftThenBlend};
    return pair;
}

ForcePair fig3b_pair() {
    ForcePair pair;
    pair.fs = {LinearCoeff{-0.2, 0.1}, 0.3};
    pair.fl = {LinearCoeff{-3.0, 0.1}, 0.3};
    return pair;
}

ForcePair kc_pair(double chi, double r_cutoff, CutoffMode mode) {
    const KuckenAttraction att{35.0, 95.0};
    const KuckenRepulsion rep{270.0, 0.1, 100.0};
    ForcePair pair;
    pair.fs = make_kucken_pair_member(chi, att, rep, r_cutoff, 0.0, mode);
    pair.fl = make_kucken_pair_member(1.0, att, rep, r_cutoff, 0.0, mode);
    return pair;
}

double elapsed_s(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// --- criterion 1: exponential-family sign change ---------------------------

void criterion_1() {
    const auto start = std::chrono::steady_clock::now();
    const double c = 0.1, es = 100.0, rc = 0.1;
    bool nonpositive_below = true;
    int first_positive = 0;
    for (int m = 1; m <= 73723; ++m) {
        const double value = closed_form_exponential(m, c, es, rc);
        if (value > 0.0) {
            first_positive = m;
            if (m < 73723) nonpositive_below = false;
            break;
        }
    }
    const double wall = elapsed_s(start);
    const double at_threshold = closed_form_exponential(73723, c, es, rc);

    // The sign flips exactly at m = 73723. The value the paper reports there,
    // 8.3225e-15, equals the bare integral; the doubled (eigenvalue)
    // convention gives twice that, so the bare value carries the comparison.
    const double paper_value = 8.3225e-15;
    const bool bare_matches = std::abs(at_threshold - paper_value) <= 0.01 * paper_value;
    const bool doubled_matches =
        std::abs(2.0 * at_threshold - paper_value) <= 0.01 * paper_value;

    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "exponential sign change at m=%d (scan %.2fs), value %.5e vs paper %.1e "
                  "(bare %s, x2 %s)",
                  first_positive, wall, at_threshold, paper_value,
                  bare_matches ? "matches" : "off", doubled_matches ? "matches" : "off");
    report(1, nonpositive_below && first_positive == 73723 && wall < 5.0 && bare_matches, buf);
}

// --- criterion 2: high-wave integrals of the shifted pair -------------------

void criterion_2() {
    const auto pair = kc_pair(0.2, 0.5, CutoffMode::ShiftThenBlend);
    const auto hw = highwave_check(pair);
    const double closed = 2.0 * 270.0 / 1e6 + 0.1 / 100.0 - 35.0 / (95.0 * 95.0);

    const double int_fs_sfs = integrate(
        [&](double s) {
            const auto fs = eval(pair.fs, s);
            return fs.value + fs.deriv * s;
        },
        0.0, 0.5, 0.5 / 64.0);

    const double shift = eval_raw(pair.fs, 0.5);
    const bool shift_ok = std::abs(shift - 4.8144e-21) <= 1e-3 * 4.8144e-21;

    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "int f_l = %.6e (closed form %.6e), int(f_s + s f_s') = %.2e, "
                  "shift constant = %.5e",
                  hw.int_fl, closed, int_fs_sfs, shift);
    report(2,
           hw.int_fl < 0.0 && std::abs(hw.int_fl - closed) < 1e-6 &&
               std::abs(int_fs_sfs) < 1e-12 && shift_ok,
           buf);
}

// --- criterion 3: a0 threshold scan ----------------------------------------

void criterion_3() {
    const auto start = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;

    const auto scan_max = [](double rc) {
        const auto scan = linear_threshold_a0(0.1, rc, 0.0, 10000);
        double max_q = 0.0;
        for (const auto& [m, q] : scan.curve) max_q = std::max(max_q, q);
        return std::pair{max_q, scan.curve.back().second};
    };

    const auto [max_half, tail_half] = scan_max(0.5);
    ok &= std::abs(0.5 * max_half - 2.0) <= 1e-3;
    for (const double rc : {0.1, 0.2, 0.3, 0.4}) {
        const auto [max_q, tail] = scan_max(rc);
        ok &= rc * max_q > 2.0;
        ok &= std::abs(tail - 2.0 / rc) <= 0.01 * (2.0 / rc);
    }
    ok &= std::abs(tail_half - 4.0) <= 0.04;
    const double wall = elapsed_s(start);
    ok &= wall < 1.0;

    char buf[256];
    std::snprintf(buf, sizeof(buf), "Rc*max(h/g) = %.6f at Rc=0.5, tails at 2/Rc (scan %.2fs)",
                  0.5 * max_half, wall);
    report(3, ok, buf);
}

// --- criteria 4 & 5: stationary patterns ------------------------------------

struct PatternStats {
    double max_x_dev = 0.0;   // max |x - delta/2|
    double y_span = 0.0;      // max y - min y
    double nn_min = 0.0;      // nearest-neighbor vertical spacing
    double nn_max = 0.0;
    double largest_gap = 0.0; // largest sorted-y gap (torus-aware)
};

PatternStats pattern_stats(const ParticleState& state) {
    PatternStats stats;
    std::vector<double> ys;
    double y_lo = 1e300, y_hi = -1e300;
    for (const auto& p : state.positions) {
        stats.max_x_dev = std::max(stats.max_x_dev, std::abs(p.x - 0.5));
        ys.push_back(p.y);
        y_lo = std::min(y_lo, p.y);
        y_hi = std::max(y_hi, p.y);
    }
    stats.y_span = y_hi - y_lo;
    std::sort(ys.begin(), ys.end());
    stats.nn_min = 1e300;
    for (std::size_t i = 0; i < ys.size(); ++i) {
        const double gap =
            i + 1 < ys.size() ? ys[i + 1] - ys[i] : ys.front() + 1.0 - ys.back();
        stats.largest_gap = std::max(stats.largest_gap, gap);
        stats.nn_min = std::min(stats.nn_min, gap);
        stats.nn_max = std::max(stats.nn_max, gap);
    }
    return stats;
}

void criterion_4() {
    const auto start = std::chrono::steady_clock::now();
    SimConfig config;
    config.pair = fig5f_pair();
    config.field = TensorField::canonical(0.2);
    config.integrator = DormandPrinceParams{1e-10, 1e-5, 0.5, 500.0};
    config.t_max = 2e6;
    config.stationary_tol = 1e-6;
    config.method = ForceMethod::CellList;

    const auto result = simulate(init_circle(600, {0.5, 0.5}, 0.005), config);
    const double wall = elapsed_s(start);
    const auto stats = pattern_stats(result.final_state);

    const double target = 1.0 / 600.0;
    const bool spacing_ok =
        stats.nn_min > 0.75 * target && stats.nn_max < 1.25 * target;
    const bool ok = result.termination == Termination::Stationary &&
                    stats.max_x_dev < 5e-3 && stats.y_span > 0.95 && spacing_ok;

    char buf[320];
    std::snprintf(buf, sizeof(buf),
                  "vertical line: %s at t=%.0f (%.0fs wall, %llu steps), max|x-0.5|=%.2e, "
                  "y-span=%.4f, nn spacing [%.2e, %.2e] vs 1/600=%.2e",
                  result.termination == Termination::Stationary ? "stationary" : "time-exhausted",
                  result.final_state.time, wall,
                  static_cast<unsigned long long>(result.steps), stats.max_x_dev, stats.y_span,
                  stats.nn_min, stats.nn_max, target);
    report(4, ok, buf);
}

void criterion_5() {
    const auto start = std::chrono::steady_clock::now();
    SimConfig config;
    config.pair = fig3b_pair();
    config.field = TensorField::canonical(0.2);
    config.integrator = DormandPrinceParams{1e-10, 1e-6, 0.1, 20.0};
    config.t_max = 4000.0;
    config.stationary_tol = 1e-8;
    config.method = ForceMethod::CellList;

    const auto result = simulate(init_circle(600, {0.5, 0.5}, 0.005), config);
    const double wall = elapsed_s(start);
    const auto stats = pattern_stats(result.final_state);

    const bool ok = stats.largest_gap > 5.0 / 600.0 && stats.max_x_dev < 5e-3;
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "clustered line: largest y-gap %.4f (needs > %.4f), max|x-0.5|=%.2e "
                  "(t=%.0f, %.0fs wall)",
                  stats.largest_gap, 5.0 / 600.0, stats.max_x_dev, result.final_state.time,
                  wall);
    report(5, ok, buf);
}

// --- criterion 6: horizontal-line instability -------------------------------

void criterion_6() {
    struct Entry {
        const char* name;
        ForcePair pair;
    };
    std::vector<Entry> shipped;
    shipped.push_back({"exp_shifted", fig5f_pair()});
    shipped.push_back({"linear", fig3b_pair()});
    shipped.push_back({"kucken chi=0.2", kc_pair(0.2, 0.5, CutoffMode::ShiftThenBlend)});
    {
        ForcePair algebraic;
        algebraic.fs = {AlgebraicCoeff{100.0, 2.0, 1.0}, 0.1};
        algebraic.fl = {LinearCoeff{-3.0, 0.1}, 0.1};
        shipped.push_back({"algebraic", algebraic});
    }
    {
        ForcePair expsum;
        expsum.fs = {ExpSumCoeff{0.13, -0.03, 10.0, 100.0}, 0.5, 0.0, CutoffMode::ShiftThenBlend};
        expsum.fl = {LinearCoeff{-3.0, 0.1}, 0.5};
        shipped.push_back({"exp_sum", expsum});
    }

    bool ok = true;
    std::string detail = "Re lambda_2(1) > 0 for";
    for (const auto& entry : shipped) {
        const auto [l1, l2] = horizontal_line_eigs(1, entry.pair);
        ok &= l2.real() > 0.0;
        char buf[96];
        std::snprintf(buf, sizeof(buf), " %s (%.2e)", entry.name, l2.real());
        detail += buf;
    }
    report(6, ok, detail);
}

// --- criterion 7: rotated-line sweep ----------------------------------------

void criterion_7() {
    const auto pair = fig5f_pair();
    const auto near1 = rotated_line_highwave(std::atan(1.0 / 3.0), pair);
    const auto near2 = rotated_line_highwave(std::atan(1.0 / 2.0), pair);
    const auto mirror1 = rotated_line_highwave(M_PI - std::atan(1.0 / 3.0), pair);
    const auto mirror2 = rotated_line_highwave(M_PI - std::atan(1.0 / 2.0), pair);
    const auto vertical = rotated_line_highwave(M_PI_2, pair);

    const bool ok = near1.trace > 0.0 && near2.trace > 0.0 && mirror1.trace > 0.0 &&
                    mirror2.trace > 0.0 && vertical.trace <= 0.0;
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "trace(M): arctan(1/3) %.3e, arctan(1/2) %.3e, mirrors %.3e/%.3e, "
                  "pi/2 %.3e",
                  near1.trace, near2.trace, mirror1.trace, mirror2.trace, vertical.trace);
    report(7, ok, buf);
}

// --- criterion 8: property suite --------------------------------------------

void criterion_8() {
    bool ok = true;
    std::string detail;

    // cell list vs brute force, bit exact, N = 200, 20 seeds
    {
        SimConfig config;
        config.pair = fig3b_pair();
        config.field = TensorField::canonical(0.2);
        bool exact = true;
        for (std::uint64_t seed = 0; seed < 20 && exact; ++seed) {
            ParticleState state;
            for (int i = 0; i < 200; ++i)
                state.positions.push_back(
                    {uniform01(4000 + seed, 2 * i), uniform01(4000 + seed, 2 * i + 1)});
            const auto brute = rhs(state, config, ForceMethod::BruteForce);
            const auto cells = rhs(state, config, ForceMethod::CellList);
            for (int j = 0; j < 200; ++j)
                exact &= brute[j].x == cells[j].x && brute[j].y == cells[j].y;
        }
        ok &= exact;
        detail += exact ? "cell-list bit-exact" : "cell-list MISMATCH";
    }

    // jacobian vs central finite differences
    {
        const auto pair = fig5f_pair();
        const auto field = TensorField::canonical(0.2);
        double worst = 0.0;
        int tested = 0;
        for (int i = 0; tested < 100 && i < 2000; ++i) {
            const Vec2 d{0.9 * (uniform01(41, 2 * i) - 0.5), 0.9 * (uniform01(41, 2 * i + 1) - 0.5)};
            const double r = d.norm();
            if (r < 1e-3 || r > 0.499) continue;
            ++tested;
            const Mat2 jac = force_jacobian(d, field, pair);
            const double h = 1e-7;
            const Vec2 fx1 = total_force({d.x + h, d.y}, field, pair);
            const Vec2 fx0 = total_force({d.x - h, d.y}, field, pair);
            const Vec2 fy1 = total_force({d.x, d.y + h}, field, pair);
            const Vec2 fy0 = total_force({d.x, d.y - h}, field, pair);
            const double scale = std::max({1.0, std::abs(jac.a11), std::abs(jac.a22)});
            worst = std::max(worst, std::abs((fx1.x - fx0.x) / (2 * h) - jac.a11) / scale);
            worst = std::max(worst, std::abs((fy1.x - fy0.x) / (2 * h) - jac.a12) / scale);
            worst = std::max(worst, std::abs((fx1.y - fx0.y) / (2 * h) - jac.a21) / scale);
            worst = std::max(worst, std::abs((fy1.y - fy0.y) / (2 * h) - jac.a22) / scale);
        }
        ok &= worst < 1e-6 && tested == 100;
        char buf[64];
        std::snprintf(buf, sizeof(buf), ", jacobian-fd %.1e", worst);
        detail += buf;
    }

    // discrete -> continuum eigenvalue convergence: the error at least halves
    // per doubling (measured rate is second order, factor ~4)
    {
        ForcePair pair;
        pair.fs = {ExpCoeff{0.1, 10.0}, 0.5, 0.03, CutoffMode::ShiftThenBlend};
        pair.fl = {LinearCoeff{-3.0, 0.1}, 0.5, 0.03, CutoffMode::BlendToZero};
        const auto [c1, c2] = vertical_line_eigs_continuum(3, pair);
        double prev = 0.0;
        bool halves = true;
        std::string factors;
        for (int n : {200, 400, 800, 1600}) {
            const auto [d1, d2] = vertical_line_eigs_discrete(n, 3, pair);
            const double err = std::max(std::abs(d1 - c1), std::abs(d2 - c2));
            if (prev > 0.0) {
                halves &= prev / err > 1.6;
                char buf[16];
                std::snprintf(buf, sizeof(buf), " %.2f", prev / err);
                factors += buf;
            }
            prev = err;
        }
        ok &= halves;
        detail += ", eig-convergence factors" + factors;
    }

    // closed forms vs quadrature
    {
        double worst = 0.0;
        for (int m : {1, 7, 50, 333}) {
            {
                const auto pair = fig3b_pair();
                const auto [l1, l2] = vertical_line_eigs_continuum(m, pair);
                const double cf1 = 2.0 * closed_form_linear(m, -3.0, 0.1, 0.3);
                const double cf2 = 2.0 * closed_form_linear(m, -0.4, 0.1, 0.3);
                worst = std::max(worst, std::abs(l1.real() - cf1) / std::abs(cf1));
                worst = std::max(worst, std::abs(l2.real() - cf2) / std::abs(cf2));
            }
            {
                ForcePair pair;
                pair.fs = {ExpCoeff{0.1, 100.0}, 0.1, 0.0, CutoffMode::ShiftThenBlend};
                pair.fl = {LinearCoeff{-3.0, 0.1}, 0.1};
                const auto [l1, l2] = vertical_line_eigs_continuum(m, pair);
                const double cf = 2.0 * closed_form_exponential(m, 0.1, 100.0, 0.1);
                worst = std::max(worst, std::abs(l2.real() - cf) / std::abs(cf));
            }
        }
        ok &= worst < 1e-8;
        char buf[64];
        std::snprintf(buf, sizeof(buf), ", closed-form-vs-quadrature %.1e", worst);
        detail += buf;
    }

    // center-of-mass drift per euler step
    {
        SimConfig config;
        config.pair = fig3b_pair();
        config.field = TensorField::canonical(0.2);
        ParticleState state;
        for (int i = 0; i < 100; ++i)
            state.positions.push_back({uniform01(71, 2 * i), uniform01(71, 2 * i + 1)});
        double worst = 0.0;
        for (int it = 0; it < 10; ++it) {
            const auto v = rhs(state, config);
            Vec2 drift{0.0, 0.0};
            for (const auto& vi : v) drift += 1e-3 * vi;
            worst = std::max(worst, std::max(std::abs(drift.x), std::abs(drift.y)));
            state = detail::euler_advance(state, v, 1e-3, 1.0);
        }
        ok &= worst < 1e-12;
        char buf[48];
        std::snprintf(buf, sizeof(buf), ", com-drift %.1e", worst);
        detail += buf;
    }

    // oddness and periodicity, exact
    {
        const auto pair = fig5f_pair();
        const auto field = TensorField::canonical(0.2);
        bool exact = true;
        for (int i = 0; i < 100; ++i) {
            const Vec2 d{static_cast<double>(splitmix64(9000 + 2 * i) >> 44) / 1048576.0 - 0.5,
                         static_cast<double>(splitmix64(9001 + 2 * i) >> 44) / 1048576.0 - 0.5};
            if (d.norm() < 1e-6) continue;
            const Vec2 f = total_force(d, field, pair);
            const Vec2 g = total_force(-d, field, pair);
            exact &= g.x == -f.x && g.y == -f.y;
            for (int kx = -1; kx <= 1; ++kx) {
                for (int ky = -1; ky <= 1; ++ky) {
                    const Vec2 shifted = wrap_displacement({d.x + kx, d.y + ky}, 1.0);
                    const Vec2 h = total_force(shifted, field, pair);
                    exact &= h.x == f.x && h.y == f.y;
                }
            }
        }
        ok &= exact;
        detail += exact ? ", oddness+periodicity exact" : ", oddness/periodicity BROKEN";
    }

    report(8, ok, detail);
}

} // namespace

int main(int argc, char** argv) {
    const bool quick = argc > 1 && std::string(argv[1]) == "--quick";
    criterion_1();
    criterion_2();
    criterion_3();
    if (!quick) {
        criterion_4();
        criterion_5();
    } else {
        std::printf("SKIP criterion 4: --quick\nSKIP criterion 5: --quick\n");
    }
    criterion_6();
    criterion_7();
    criterion_8();
    if (failures > 0) {
        std::printf("%d criterion(s) failed\n", failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
