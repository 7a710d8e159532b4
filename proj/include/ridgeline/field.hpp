#ifndef RIDGELINE_FIELD_HPP
#define RIDGELINE_FIELD_HPP

#include <cmath>
#include <stdexcept>
#include <string>

#include "ridgeline/coeffs.hpp"
#include "ridgeline/vec2.hpp"

namespace ridgeline {

// Spatially homogeneous anisotropy: orthonormal directions s, l and weight
// chi in [0, 1]. The canonical choice is s = (0, 1), l = (1, 0); any other
// admissible field is a rotation of it.
struct TensorField {
    Vec2 s{0.0, 1.0};
    Vec2 l{1.0, 0.0};
    double chi = 1.0;

    static TensorField canonical(double chi = 1.0) { return {{0.0, 1.0}, {1.0, 0.0}, chi}; }

    static TensorField rotated(double angle, double chi = 1.0) {
        const Mat2 r = rotation(angle);
        return {r * Vec2{0.0, 1.0}, r * Vec2{1.0, 0.0}, chi};
    }

    void validate() const {
        constexpr double tol = 1e-12;
        if (std::abs(s.norm() - 1.0) > tol || std::abs(l.norm() - 1.0) > tol)
            throw std::invalid_argument("tensor field: s and l must be unit vectors");
        if (std::abs(dot(s, l)) > tol)
            throw std::invalid_argument("tensor field: s and l must be orthogonal");
        if (chi < 0.0 || chi > 1.0)
            throw std::invalid_argument("tensor field: chi must lie in [0, 1]");
    }
};

// The two radial coefficients of the decomposed total force plus the periodic
// domain size. Both coefficients must share one cutoff radius <= delta/2.
struct ForcePair {
    CoefficientSpec fs;
    CoefficientSpec fl;
    double domain_size = 1.0;

    double r_cutoff() const { return fs.r_cutoff; }

    void validate() const {
        if (fs.r_cutoff != fl.r_cutoff)
            throw std::invalid_argument("force pair: f_s and f_l cutoffs differ");
        if (!(fs.r_cutoff > 0.0) || fs.r_cutoff > 0.5 * domain_size)
            throw std::invalid_argument("force pair: R_c must lie in (0, delta/2]");
        if (fs.epsilon < 0.0 || fs.epsilon >= fs.r_cutoff || fl.epsilon < 0.0 ||
            fl.epsilon >= fl.r_cutoff)
            throw std::invalid_argument("force pair: epsilon must lie in [0, R_c)");
    }
};

// Minimal-image wrap: d + k*delta with both components in [-delta/2, delta/2).
inline double wrap_coordinate(double d, double delta) {
    double w = d - delta * std::floor(d / delta + 0.5);
    if (w < -0.5 * delta) w += delta;
    if (w >= 0.5 * delta) w -= delta;
    return w;
}

inline Vec2 wrap_displacement(Vec2 d, double delta) {
    return {wrap_coordinate(d.x, delta), wrap_coordinate(d.y, delta)};
}

// Wrap a position into the fundamental cell [0, delta).
inline double wrap_position_coordinate(double x, double delta) {
    double w = x - delta * std::floor(x / delta);
    if (w >= delta) w -= delta;
    if (w < 0.0) w = 0.0;
    return w;
}

inline Vec2 wrap_position(Vec2 x, double delta) {
    return {wrap_position_coordinate(x.x, delta), wrap_position_coordinate(x.y, delta)};
}

inline constexpr double kCoincidenceTol = 1e-12;

// Total anisotropic force F(d) = f_s(|d|)(s.d)s + f_l(|d|)(l.d)l for an
// already wrapped displacement d != 0. Zero for |d| >= R_c.
inline Vec2 total_force(Vec2 d, const TensorField& field, const ForcePair& pair) {
    const double r = d.norm();
    if (r < kCoincidenceTol)
        throw std::domain_error("total_force: zero displacement (self-interaction?)");
    if (r >= pair.r_cutoff()) return {0.0, 0.0};
    const double fs = eval(pair.fs, r).value;
    const double fl = eval(pair.fl, r).value;
    const double sd = dot(field.s, d);
    const double ld = dot(field.l, d);
    return fs * sd * field.s + fl * ld * field.l;
}

// Derivative matrix of the total force at a wrapped displacement d != 0.
// Column i is dF/dd_i. For the canonical field:
//   dF/dd1 = (f_l + f_l' d1^2/|d|, f_s' d1 d2/|d|)
//   dF/dd2 = (f_l' d1 d2/|d|,      f_s + f_s' d2^2/|d|)
// Rotated fields are handled by conjugating with Q = [l s].
inline Mat2 force_jacobian(Vec2 d, const TensorField& field, const ForcePair& pair) {
    const double r = d.norm();
    if (r < kCoincidenceTol)
        throw std::domain_error("force_jacobian: zero displacement (self-interaction?)");
    if (r >= pair.r_cutoff()) return {};

    const Mat2 q{field.l.x, field.s.x, field.l.y, field.s.y};
    const Vec2 dc = q.transpose() * d; // displacement in canonical coordinates

    const ValueDeriv fs = eval(pair.fs, r);
    const ValueDeriv fl = eval(pair.fl, r);
    const Mat2 jc{fl.value + fl.deriv * dc.x * dc.x / r, fl.deriv * dc.x * dc.y / r,
                  fs.deriv * dc.x * dc.y / r, fs.value + fs.deriv * dc.y * dc.y / r};
    return q * jc * q.transpose();
}

} // namespace ridgeline

#endif
