#ifndef RIDGELINE_LINESTAB_HPP
#define RIDGELINE_LINESTAB_HPP

#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ridgeline/dynamics.hpp"
#include "ridgeline/field.hpp"
#include "ridgeline/quadrature.hpp"
#include "ridgeline/rng.hpp"
#include "ridgeline/vec2.hpp"

namespace ridgeline {

using Complex = std::complex<double>;

// N particles equispaced along a torus-closing straight line of angle theta.
// `axis` is the exact integer direction vector (l(theta) * (cos, sin)); using
// it keeps the generated positions exact rationals of the domain size.
struct LineAnsatz {
    int n = 2;
    double theta = M_PI_2;
    double length_factor = 1.0;
    int winding = 1;
    double domain_size = 1.0;
    Vec2 axis{0.0, 1.0};
};

// Admissible angles close the torus with an integer winding: the four
// principal angles, plus arctan branches with integer tangent or cotangent.
inline LineAnsatz make_line_ansatz(int n, double theta, double delta = 1.0) {
    if (n < 2) throw std::invalid_argument("line ansatz: need at least two particles");
    LineAnsatz ansatz;
    ansatz.n = n;
    ansatz.domain_size = delta;
    ansatz.theta = theta;

    constexpr double angle_tol = 1e-12;
    constexpr double integer_tol = 1e-9;
    const auto near = [&](double a, double b) { return std::abs(a - b) < angle_tol; };

    if (near(theta, 0.0)) {
        ansatz.axis = {1.0, 0.0};
        ansatz.length_factor = 1.0;
        ansatz.winding = 1;
        return ansatz;
    }
    if (near(theta, M_PI_4)) {
        ansatz.axis = {1.0, 1.0};
        ansatz.length_factor = std::sqrt(2.0);
        ansatz.winding = 1;
        return ansatz;
    }
    if (near(theta, M_PI_2)) {
        ansatz.axis = {0.0, 1.0};
        ansatz.length_factor = 1.0;
        ansatz.winding = 1;
        return ansatz;
    }
    if (near(theta, 3.0 * M_PI_4)) {
        ansatz.axis = {-1.0, 1.0};
        ansatz.length_factor = std::sqrt(2.0);
        ansatz.winding = 1;
        return ansatz;
    }
    if (theta < 0.0 || theta >= M_PI)
        throw std::invalid_argument("line ansatz: theta must lie in [0, pi)");

    const double t = std::tan(theta);
    const double c = std::cos(theta) / std::sin(theta);
    if (theta > M_PI_4 && theta < 3.0 * M_PI_4) {
        // middle branch: integer tangent
        const double tr = std::round(t);
        if (std::abs(t - tr) < integer_tol * std::max(1.0, std::abs(t)) && std::abs(tr) >= 2.0) {
            const double sign = theta < M_PI_2 ? 1.0 : -1.0;
            ansatz.axis = {sign, sign * tr};
            ansatz.winding = static_cast<int>(std::abs(tr));
            ansatz.length_factor = std::sqrt(1.0 + tr * tr);
            return ansatz;
        }
    } else {
        // outer branches: integer cotangent
        const double cr = std::round(c);
        if (std::abs(c - cr) < integer_tol * std::max(1.0, std::abs(c)) && std::abs(cr) >= 2.0) {
            ansatz.axis = {cr, 1.0};
            ansatz.winding = static_cast<int>(std::abs(cr));
            ansatz.length_factor = std::sqrt(1.0 + cr * cr);
            return ansatz;
        }
    }
    throw std::invalid_argument(
        "line ansatz: theta = " + std::to_string(theta) +
        " is not admissible: not a principal angle, tan(theta) = " + std::to_string(t) +
        " not an integer, cot(theta) = " + std::to_string(c) + " not an integer");
}

// All admissible angles in [0, pi) with winding number <= max_n, sorted.
inline std::vector<double> admissible_angles(int max_n) {
    if (max_n < 1) throw std::invalid_argument("admissible_angles: max_n must be >= 1");
    std::vector<double> angles{0.0, M_PI_4, M_PI_2, 3.0 * M_PI_4};
    for (int k = 2; k <= max_n; ++k) {
        const double n = static_cast<double>(k);
        angles.push_back(std::atan(n));             // (pi/4, pi/2), tan = n
        angles.push_back(M_PI - std::atan(n));      // (pi/2, 3pi/4), tan = -n
        angles.push_back(std::atan(1.0 / n));       // (0, pi/4), cot = n
        angles.push_back(M_PI - std::atan(1.0 / n)); // (3pi/4, pi), cot = -n
    }
    std::sort(angles.begin(), angles.end());
    angles.erase(std::unique(angles.begin(), angles.end(),
                             [](double a, double b) { return std::abs(a - b) < 1e-12; }),
                 angles.end());
    return angles;
}

// Positions x_k = (k/N) * l(theta) * (cos theta, sin theta), wrapped.
inline std::vector<Vec2> line_positions(const LineAnsatz& ansatz) {
    std::vector<Vec2> positions;
    positions.reserve(ansatz.n);
    const double scale = ansatz.domain_size / static_cast<double>(ansatz.n);
    for (int k = 1; k <= ansatz.n; ++k)
        positions.push_back(
            wrap_position(static_cast<double>(k) * scale * ansatz.axis, ansatz.domain_size));
    return positions;
}

// Line positions plus seeded uniform jitter in [-jitter, jitter]^2.
inline ParticleState init_line(const LineAnsatz& ansatz, double jitter, std::uint64_t seed) {
    ParticleState state;
    state.positions = line_positions(ansatz);
    if (jitter != 0.0) {
        for (std::size_t j = 0; j < state.positions.size(); ++j) {
            state.positions[j].x += uniform_symmetric(seed, 2 * j, jitter);
            state.positions[j].y += uniform_symmetric(seed, 2 * j + 1, jitter);
            state.positions[j] = wrap_position(state.positions[j], ansatz.domain_size);
        }
    }
    return state;
}

// Largest net force magnitude over the configuration; a steady state has
// residual below tolerance.
inline double steady_residual(const std::vector<Vec2>& positions, const TensorField& field,
                              const ForcePair& pair) {
    const int n = static_cast<int>(positions.size());
    double residual = 0.0;
    for (int j = 0; j < n; ++j) {
        Vec2 sum{0.0, 0.0};
        for (int k = 0; k < n; ++k) {
            if (k == j) continue;
            const Vec2 d = wrap_displacement(positions[j] - positions[k], pair.domain_size);
            if (d.norm() < kCoincidenceTol) detail::throw_coincident(j, k);
            if (d.norm() >= pair.r_cutoff()) continue;
            sum += total_force(d, field, pair);
        }
        residual = std::max(residual, (1.0 / n * sum).norm());
    }
    return residual;
}

// Continuum steady-state condition for the vertical line: |integral of
// F((0,s)) over one cutoff interval|, zero by oddness.
inline double continuum_steady_residual(const TensorField& field, const ForcePair& pair) {
    const double rc = pair.r_cutoff();
    const double eps = pair.fs.epsilon;
    const double maxw = (rc - eps) / 32.0;
    const std::vector<double> splits{-(rc - eps), 0.0, rc - eps};
    const auto component = [&](auto pick) {
        return integrate(
            [&](double s) {
                const Vec2 d{0.0, s};
                return std::abs(s) < kCoincidenceTol ? 0.0 : pick(total_force(d, field, pair));
            },
            -rc, rc, maxw, splits);
    };
    const double fx = component([](Vec2 f) { return f.x; });
    const double fy = component([](Vec2 f) { return f.y; });
    return Vec2{fx, fy}.norm();
}

struct Mat2c {
    Complex a11, a12, a21, a22;

    Complex trace() const { return a11 + a22; }
    Complex det() const { return a11 * a22 - a12 * a21; }
    std::pair<Complex, Complex> eigenvalues() const {
        const Complex t = trace();
        const Complex disc = std::sqrt(t * t - 4.0 * det());
        return {0.5 * (t + disc), 0.5 * (t - disc)};
    }
};

// Stability matrix M(j, m) of a steady configuration given in ansatz order:
// column i = (1/N) sum_{k != j} (1 - e^{2 pi i m (k-j)/N}) dF/dd_i(x_j - x_k).
inline Mat2c stability_matrix(const std::vector<Vec2>& positions, const TensorField& field,
                              const ForcePair& pair, int j, int m) {
    const int n = static_cast<int>(positions.size());
    if (j < 0 || j >= n) throw std::invalid_argument("stability_matrix: index out of range");
    Mat2c result{};
    for (int k = 0; k < n; ++k) {
        if (k == j) continue;
        const Vec2 d = wrap_displacement(positions[j] - positions[k], pair.domain_size);
        if (d.norm() < kCoincidenceTol) detail::throw_coincident(j, k);
        const Complex factor =
            1.0 - std::polar(1.0, 2.0 * M_PI * m * static_cast<double>(k - j) / n);
        if (d.norm() >= pair.r_cutoff()) continue;
        const Mat2 jac = force_jacobian(d, field, pair);
        result.a11 += factor * jac.a11;
        result.a21 += factor * jac.a21;
        result.a12 += factor * jac.a12;
        result.a22 += factor * jac.a22;
    }
    const double inv_n = 1.0 / n;
    result.a11 *= inv_n;
    result.a12 *= inv_n;
    result.a21 *= inv_n;
    result.a22 *= inv_n;
    return result;
}

// Eigenvalues of the single vertical line for finite N:
//   lambda_1 = (1/N) sum_k f_l(|d_Nk|) (1 - e^{2 pi i m k / N})
//   lambda_2 = same with f_s + f_s' |d_Nk|
// over k = ceil(N/2) .. N-1+ceil(N/2) with d_Nk = (0, (N-k)/N). The k = N
// term has wrapped distance zero but a vanishing complex factor; it is
// skipped without evaluating the coefficients.
inline std::pair<Complex, Complex> vertical_line_eigs_discrete(int n, int m,
                                                               const ForcePair& pair) {
    const int k_begin = (n + 1) / 2;
    Complex lambda1{0.0, 0.0}, lambda2{0.0, 0.0};
    for (int k = k_begin; k <= n - 1 + k_begin; ++k) {
        if (k == n) continue;
        const double dist = std::abs(static_cast<double>(n - k)) / n * pair.domain_size;
        const Complex factor = 1.0 - std::polar(1.0, 2.0 * M_PI * m * static_cast<double>(k) / n);
        const ValueDeriv fl = eval(pair.fl, dist);
        const ValueDeriv fs = eval(pair.fs, dist);
        lambda1 += fl.value * factor;
        lambda2 += (fs.value + fs.deriv * dist) * factor;
    }
    const double inv_n = 1.0 / n;
    return {lambda1 * inv_n, lambda2 * inv_n};
}

struct QuadratureSpec {
    int min_nodes = 2000;      // total nodes across the integration interval
    double nodes_per_mrc = 40; // additional resolution per unit of m * R_c
};

namespace detail {

inline double oscillation_panel_width(const ForcePair& pair, int m, const QuadratureSpec& quad,
                                      double interval_length) {
    const double rc = pair.r_cutoff();
    const double eps = pair.fs.epsilon;
    const double nodes =
        std::max(static_cast<double>(quad.min_nodes), quad.nodes_per_mrc * m * rc);
    double w = std::min((rc - eps) / 32.0, 1.0 / (8.0 * std::max(1, m)));
    w = std::min(w, interval_length * 16.0 / nodes);
    return w;
}

template <typename G>
Complex eigenvalue_integral(const ForcePair& pair, int m, const QuadratureSpec& quad, G&& g) {
    const double rc = pair.r_cutoff();
    const double eps = pair.fs.epsilon;
    const double maxw = oscillation_panel_width(pair, m, quad, 2.0 * rc);
    const std::vector<double> splits{-(rc - eps), 0.0, rc - eps};
    const double re = integrate(
        [&](double s) { return g(s) * (1.0 - std::cos(2.0 * M_PI * m * s)); }, -rc, rc, maxw,
        splits);
    const double im = integrate([&](double s) { return g(s) * std::sin(2.0 * M_PI * m * s); },
                                -rc, rc, maxw, splits);
    return {re, im};
}

} // namespace detail

// Continuum-limit eigenvalues of the vertical line:
//   lambda_1(m) = int_{-Rc}^{Rc} f_l(|s|) (1 - e^{-2 pi i m s}) ds
//   lambda_2(m) = same with f_s + f_s' |s|.
inline std::pair<Complex, Complex> vertical_line_eigs_continuum(int m, const ForcePair& pair,
                                                                const QuadratureSpec& quad = {}) {
    const Complex lambda1 = detail::eigenvalue_integral(
        pair, m, quad, [&](double s) { return eval(pair.fl, std::abs(s)).value; });
    const Complex lambda2 = detail::eigenvalue_integral(pair, m, quad, [&](double s) {
        const ValueDeriv fs = eval(pair.fs, std::abs(s));
        return fs.value + fs.deriv * std::abs(s);
    });
    return {lambda1, lambda2};
}

// int_0^R (a s + b)(1 - cos(2 pi m s)) ds in closed form.
inline double closed_form_linear(int m, double a, double b, double r) {
    const double pm = M_PI * m;
    const double tpm = 2.0 * pm;
    const double s = std::sin(tpm * r);
    const double c = std::cos(tpm * r);
    return (tpm * (pm * r * (a * r + 2.0 * b) - (a * r + b) * s) + a - a * c) /
           (4.0 * pm * pm);
}

// int_0^{Rc} (f_s + s f_s')(1 - cos(2 pi m s)) ds in closed form for the
// shifted exponential f_s = c e^{-e_s s} - c e^{-e_s Rc} (eps -> 0). The real
// part of the continuum eigenvalue lambda_2(m) is twice this value.
inline double closed_form_exponential(int m, double c, double e_s, double r_c) {
    const double tpm = 2.0 * M_PI * m;
    const double tpm2 = tpm * tpm;
    const double es2 = e_s * e_s;
    const double es3 = es2 * e_s;
    const double den = es2 + tpm2;
    const double pref = -(c * e_s * std::exp(-e_s * r_c)) / (tpm * den * den);
    const double bracket = tpm * (es3 * r_c + tpm2 * (e_s * r_c - 2.0)) * std::cos(tpm * r_c) -
                           (es3 + tpm2 * es2 * r_c + 3.0 * tpm2 * e_s + tpm2 * tpm2 * r_c) *
                               std::sin(tpm * r_c) +
                           2.0 * tpm2 * tpm * std::exp(e_s * r_c);
    return pref * bracket;
}

struct HighWaveReport {
    double int_fl = 0.0;  // int_0^{Rc} f_l ds
    double fs_at_rc = 0.0;
    bool passes = false;
};

// Necessary high-wave number stability conditions of the vertical line:
// int f_l <= 0 and f_s(R_c) = 0.
inline HighWaveReport highwave_check(const ForcePair& pair) {
    const double rc = pair.r_cutoff();
    const double eps = pair.fl.epsilon;
    HighWaveReport report;
    report.int_fl = integrate([&](double s) { return eval(pair.fl, s).value; }, 0.0, rc,
                              (rc - eps) / 32.0, {rc - eps});
    report.fs_at_rc = eval(pair.fs, rc).value;
    report.passes = report.int_fl <= 0.0 && std::abs(report.fs_at_rc) <= 1e-12;
    return report;
}

// Eigenvalues of the single horizontal line:
//   lambda_1(m) = 2 int_0^{Rc} (f_l + f_l' s)(1 - e^{-2 pi i m s}) ds
//   lambda_2(m) = 2 int_0^{Rc} f_s (1 - e^{-2 pi i m s}) ds.
inline std::pair<Complex, Complex> horizontal_line_eigs(int m, const ForcePair& pair,
                                                        const QuadratureSpec& quad = {}) {
    const double rc = pair.r_cutoff();
    const double eps = pair.fs.epsilon;
    const double maxw = detail::oscillation_panel_width(pair, m, quad, rc);
    const std::vector<double> splits{rc - eps};
    const auto complex_integral = [&](auto&& g) -> Complex {
        const double re = integrate(
            [&](double s) { return g(s) * (1.0 - std::cos(2.0 * M_PI * m * s)); }, 0.0, rc, maxw,
            splits);
        const double im = integrate([&](double s) { return g(s) * std::sin(2.0 * M_PI * m * s); },
                                    0.0, rc, maxw, splits);
        return {re, im};
    };
    const Complex lambda1 = 2.0 * complex_integral([&](double s) {
        const ValueDeriv fl = eval(pair.fl, s);
        return fl.value + fl.deriv * s;
    });
    const Complex lambda2 =
        2.0 * complex_integral([&](double s) { return eval(pair.fs, s).value; });
    return {lambda1, lambda2};
}

struct RotatedLineReport {
    double theta = 0.0;
    double i11 = 0.0, i12 = 0.0, i21 = 0.0, i22 = 0.0;
    double trace = 0.0;
    double det = 0.0;
    bool stable_necessary = false;
};

// High-wave limit of the stability matrix of the rotated line:
//   I11 = 2 int f_l + 2 cos^2(theta) int f_l' s,  I12 = 2 sin cos int f_s' s,
//   I21 = 2 sin cos int f_l' s,                   I22 = 2 int f_s + 2 sin^2 int f_s' s.
// Stability requires trace <= 0 and det >= 0.
inline RotatedLineReport rotated_line_highwave(double theta, const ForcePair& pair,
                                               const QuadratureSpec& quad = {}) {
    (void)quad;
    const double rc = pair.r_cutoff();
    const double eps = pair.fs.epsilon;
    const double maxw = (rc - eps) / 32.0;
    const std::vector<double> splits{rc - eps};
    const auto quad_int = [&](auto&& g) { return integrate(g, 0.0, rc, maxw, splits); };

    const double int_fl = quad_int([&](double s) { return eval(pair.fl, s).value; });
    const double int_fs = quad_int([&](double s) { return eval(pair.fs, s).value; });
    const double int_fl_ds = quad_int([&](double s) { return eval(pair.fl, s).deriv * s; });
    const double int_fs_ds = quad_int([&](double s) { return eval(pair.fs, s).deriv * s; });

    const double sc = std::sin(theta) * std::cos(theta);
    RotatedLineReport report;
    report.theta = theta;
    report.i11 = 2.0 * int_fl + 2.0 * std::cos(theta) * std::cos(theta) * int_fl_ds;
    report.i12 = 2.0 * sc * int_fs_ds;
    report.i21 = 2.0 * sc * int_fl_ds;
    report.i22 = 2.0 * int_fs + 2.0 * std::sin(theta) * std::sin(theta) * int_fs_ds;
    report.trace = report.i11 + report.i22;
    report.det = report.i11 * report.i22 - report.i12 * report.i21;
    report.stable_necessary = report.trace <= 0.0 && report.det >= 0.0;
    return report;
}

struct A0Scan {
    double a0 = 0.0;
    int argmax_m = 0;
    std::vector<std::pair<int, double>> curve; // (m, h/g)
    std::vector<int> skipped;                  // m with vanishing denominator
};

// Linear-coefficient stability threshold: the line is stable against the
// first-order terms iff a <= a0 = -b max_m h_eps(m)/g_eps(m), with
//   g_eps(m) = 2 pi m (pi m R^2 - R sin(2 pi m R)) + 1 - cos(2 pi m R)
//   h_eps(m) = 2 pi m (2 pi m R - sin(2 pi m R)),  R = R_c - eps.
inline A0Scan linear_threshold_a0(double b, double r_cutoff, double epsilon, int m_max) {
    if (!(b > 0.0)) throw std::invalid_argument("linear_threshold_a0: b must be positive");
    if (m_max < 1) throw std::invalid_argument("linear_threshold_a0: m_max must be >= 1");
    const double r = r_cutoff - epsilon;
    A0Scan scan;
    scan.curve.reserve(m_max);
    double best = -1.0;
    for (int m = 1; m <= m_max; ++m) {
        const double tpm = 2.0 * M_PI * m;
        const double s = std::sin(tpm * r);
        const double c = std::cos(tpm * r);
        const double g = tpm * (M_PI * m * r * r - r * s) + 1.0 - c;
        const double h = tpm * (tpm * r - s);
        if (g <= 0.0) {
            scan.skipped.push_back(m);
            continue;
        }
        const double q = h / g;
        scan.curve.emplace_back(m, q);
        if (q > best) {
            best = q;
            scan.argmax_m = m;
        }
    }
    scan.a0 = -b * best;
    return scan;
}

enum class Verdict { Stable, Unstable, Inconclusive };

struct ModeEigenvalues {
    int m = 0;
    Complex lambda1;
    Complex lambda2;
};

struct SpectrumSource {
    bool continuum = false;
    int n = 0; // particle count for the discrete spectrum
};

struct StabilitySpectrum {
    std::vector<ModeEigenvalues> modes;
    SpectrumSource source;
    Verdict verdict = Verdict::Inconclusive;
};

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Stable: return "stable";
        case Verdict::Unstable: return "unstable";
        default: return "inconclusive";
    }
}

// Classify the vertical line over a mode range through the discrete
// (N-particle) or continuum eigenvalues. Real parts within
// 1e-12 * max(1, scale at m = 1) of zero count as zero; a spectrum with such
// modes and no positive mode is Inconclusive, never Stable.
inline StabilitySpectrum classify_vertical_line(const ForcePair& pair,
                                                std::optional<int> discrete_n, int m_min,
                                                int m_max, const QuadratureSpec& quad = {}) {
    if (m_min < 1 || m_max < m_min)
        throw std::invalid_argument("classify_vertical_line: bad mode range");
    if (discrete_n && m_max > *discrete_n - 1)
        throw std::invalid_argument("classify_vertical_line: discrete modes must stay in 1..N-1");

    StabilitySpectrum spectrum;
    spectrum.source = discrete_n ? SpectrumSource{false, *discrete_n} : SpectrumSource{true, 0};
    const auto eigs = [&](int m) {
        return discrete_n ? vertical_line_eigs_discrete(*discrete_n, m, pair)
                          : vertical_line_eigs_continuum(m, pair, quad);
    };

    const auto [s1, s2] = eigs(1);
    const double zero_tol = 1e-12 * std::max(1.0, std::max(std::abs(s1), std::abs(s2)));

    bool any_positive = false;
    bool any_zero = false;
    spectrum.modes.reserve(m_max - m_min + 1);
    for (int m = m_min; m <= m_max; ++m) {
        const auto [l1, l2] = eigs(m);
        spectrum.modes.push_back({m, l1, l2});
        for (const double re : {l1.real(), l2.real()}) {
            if (re > zero_tol)
                any_positive = true;
            else if (re >= -zero_tol)
                any_zero = true;
        }
    }
    spectrum.verdict = any_positive ? Verdict::Unstable
                                    : (any_zero ? Verdict::Inconclusive : Verdict::Stable);
    return spectrum;
}

} // namespace ridgeline

#endif
