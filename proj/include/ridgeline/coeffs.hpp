#ifndef RIDGELINE_COEFFS_HPP
#define RIDGELINE_COEFFS_HPP

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace ridgeline {

// Radial force-coefficient families. Each family defines an analytic value
// f(r) and derivative f'(r) on [0, inf); the cutoff construction turns it
// into a compactly supported C^1 coefficient on [0, R_c].

struct KuckenRepulsion {
    double alpha = 0.0;
    double beta = 0.0;
    double e_r = 0.0; // decay rate
};

struct KuckenAttraction {
    double gamma = 0.0;
    double e_a = 0.0;
};

struct LinearCoeff {
    double a = 0.0; // slope
    double b = 0.0; // value at r = 0
};

struct AlgebraicCoeff {
    double a = 0.0;
    double b = 0.0; // decay exponent
    double c = 1.0;
};

struct ExpCoeff {
    double c = 0.0;
    double e_s = 0.0;
};

struct ExpSumCoeff {
    double c1 = 0.0;
    double c2 = 0.0;
    double e1 = 0.0;
    double e2 = 0.0;
};

struct CoefficientSpec;

struct CompositeCoeff {
    std::vector<std::pair<double, CoefficientSpec>> terms;
};

using CoeffFamily = std::variant<KuckenRepulsion, KuckenAttraction, LinearCoeff,
                                 AlgebraicCoeff, ExpCoeff, ExpSumCoeff, CompositeCoeff>;

// How the analytic family is joined to zero at the cutoff radius.
//
// BlendToZero keeps the raw value up to R_c - eps and bridges value and slope
// to zero with a cubic on (R_c - eps, R_c). ShiftThenBlend first subtracts the
// constant f(R_c - eps) so the value at the joint is already zero, then the
// cubic carries only the slope. eps = 0 means the hard-truncation limit: raw
// (respectively raw - raw(R_c)) on [0, R_c), identically zero from R_c on.
enum class CutoffMode { BlendToZero, ShiftThenBlend };

struct CoefficientSpec {
    CoeffFamily family;
    double r_cutoff = 0.5;
    double epsilon = 0.0;
    CutoffMode cutoff_mode = CutoffMode::BlendToZero;
};

struct ValueDeriv {
    double value = 0.0;
    double deriv = 0.0;
};

// Analytic family value, ignoring cutoff and shift.
inline double eval_raw(const CoefficientSpec& spec, double r) {
    return std::visit(
        [&](const auto& f) -> double {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, KuckenRepulsion>) {
                return (f.alpha * r * r + f.beta) * std::exp(-f.e_r * r);
            } else if constexpr (std::is_same_v<T, KuckenAttraction>) {
                return -f.gamma * r * std::exp(-f.e_a * r);
            } else if constexpr (std::is_same_v<T, LinearCoeff>) {
                return f.a * r + f.b;
            } else if constexpr (std::is_same_v<T, AlgebraicCoeff>) {
                const double base = 1.0 + f.a * r;
                if (base <= 0.0)
                    throw std::domain_error("algebraic coefficient: 1 + a*r <= 0 at r = " +
                                            std::to_string(r));
                return f.c * std::pow(base, -f.b);
            } else if constexpr (std::is_same_v<T, ExpCoeff>) {
                return f.c * std::exp(-f.e_s * r);
            } else if constexpr (std::is_same_v<T, ExpSumCoeff>) {
                return f.c1 * std::exp(-f.e1 * r) + f.c2 * std::exp(-f.e2 * r);
            } else {
                double sum = 0.0;
                for (const auto& [w, member] : f.terms) sum += w * eval_raw(member, r);
                return sum;
            }
        },
        spec.family);
}

// Analytic family derivative, ignoring cutoff and shift.
inline double eval_raw_deriv(const CoefficientSpec& spec, double r) {
    return std::visit(
        [&](const auto& f) -> double {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, KuckenRepulsion>) {
                return (2.0 * f.alpha * r - f.e_r * (f.alpha * r * r + f.beta)) *
                       std::exp(-f.e_r * r);
            } else if constexpr (std::is_same_v<T, KuckenAttraction>) {
                return -f.gamma * (1.0 - f.e_a * r) * std::exp(-f.e_a * r);
            } else if constexpr (std::is_same_v<T, LinearCoeff>) {
                return f.a;
            } else if constexpr (std::is_same_v<T, AlgebraicCoeff>) {
                const double base = 1.0 + f.a * r;
                if (base <= 0.0)
                    throw std::domain_error("algebraic coefficient: 1 + a*r <= 0 at r = " +
                                            std::to_string(r));
                return -f.a * f.b * f.c * std::pow(base, -f.b - 1.0);
            } else if constexpr (std::is_same_v<T, ExpCoeff>) {
                return -f.c * f.e_s * std::exp(-f.e_s * r);
            } else if constexpr (std::is_same_v<T, ExpSumCoeff>) {
                return -f.c1 * f.e1 * std::exp(-f.e1 * r) - f.c2 * f.e2 * std::exp(-f.e2 * r);
            } else {
                double sum = 0.0;
                for (const auto& [w, member] : f.terms) sum += w * eval_raw_deriv(member, r);
                return sum;
            }
        },
        spec.family);
}

// Value and derivative with the cutoff construction applied. Compactly
// supported: identically (0, 0) for r >= r_cutoff.
inline ValueDeriv eval(const CoefficientSpec& spec, double r) {
    if (const auto* comp = std::get_if<CompositeCoeff>(&spec.family)) {
        ValueDeriv sum;
        for (const auto& [w, member] : comp->terms) {
            const ValueDeriv vd = eval(member, r);
            sum.value += w * vd.value;
            sum.deriv += w * vd.deriv;
        }
        return sum;
    }

    const double rc = spec.r_cutoff;
    const double eps = spec.epsilon;
    if (r >= rc) return {0.0, 0.0};

    const double joint = rc - eps;
    const bool shifted = spec.cutoff_mode == CutoffMode::ShiftThenBlend;

    if (eps == 0.0) {
        const double shift = shifted ? eval_raw(spec, rc) : 0.0;
        return {eval_raw(spec, r) - shift, eval_raw_deriv(spec, r)};
    }

    if (r <= joint) {
        const double shift = shifted ? eval_raw(spec, joint) : 0.0;
        return {eval_raw(spec, r) - shift, eval_raw_deriv(spec, r)};
    }

    // Cubic tail on (R_c - eps, R_c); u = r - R_c in (-eps, 0).
    const double u = r - rc;
    const double u2 = u * u;
    const double u3 = u2 * u;
    const double fpj = eval_raw_deriv(spec, joint);
    const double slope_cubic = u3 / (eps * eps) + u2 / eps;
    const double slope_cubic_d = 3.0 * u2 / (eps * eps) + 2.0 * u / eps;
    if (shifted) return {fpj * slope_cubic, fpj * slope_cubic_d};

    const double fj = eval_raw(spec, joint);
    const double value_cubic = 2.0 * u3 / (eps * eps * eps) + 3.0 * u2 / (eps * eps);
    const double value_cubic_d = 6.0 * u2 / (eps * eps * eps) + 6.0 * u / (eps * eps);
    return {fpj * slope_cubic + fj * value_cubic, fpj * slope_cubic_d + fj * value_cubic_d};
}

enum class CoeffRole { AlongS, AlongL };

// Report-only admissibility check against the modelling assumptions for the
// given role. Returns a list of violated conditions; empty means admissible.
// Sign behaviour is sampled on a uniform grid of [0, R_c).
inline std::vector<std::string> check_family_admissibility(const CoefficientSpec& spec,
                                                           CoeffRole role) {
    std::vector<std::string> violations;
    const double rc = spec.r_cutoff;
    constexpr int kGrid = 10000;

    if (role == CoeffRole::AlongS) {
        if (eval(spec, 0.0).value <= 0.0) violations.push_back("f(0) <= 0: not repulsive at contact");
        for (int i = 0; i < kGrid; ++i) {
            const double r = rc * static_cast<double>(i) / kGrid;
            if (eval(spec, r).value < 0.0) {
                violations.push_back("f < 0 at r = " + std::to_string(r) +
                                     ": not purely repulsive on [0, R_c)");
                break;
            }
        }
        if (const auto* alg = std::get_if<AlgebraicCoeff>(&spec.family)) {
            if (!(alg->b > 1.0))
                violations.push_back("algebraic: b <= 1 (necessary condition b > 1 fails)");
            else if (!(2.0 / (alg->a * (alg->b - 1.0)) < rc))
                violations.push_back("algebraic: 2/(a(b-1)) >= R_c (necessary condition fails)");
        }
        if (const auto* es = std::get_if<ExpSumCoeff>(&spec.family)) {
            if (!(es->c1 > 0.0 && es->c1 > std::abs(es->c2)))
                violations.push_back("exp_sum along s: requires c1 > 0 and c1 > |c2|");
            if (!(0.0 < es->e1 && es->e1 <= es->e2))
                violations.push_back("exp_sum along s: requires 0 < e1 <= e2");
        }
    } else {
        if (eval(spec, 0.0).value <= 0.0) violations.push_back("f(0) <= 0: not short-range repulsive");
        bool attractive_somewhere = false;
        for (int i = 0; i < kGrid; ++i) {
            const double r = rc * static_cast<double>(i) / kGrid;
            if (eval(spec, r).value < 0.0) {
                attractive_somewhere = true;
                break;
            }
        }
        if (!attractive_somewhere)
            violations.push_back("f >= 0 on [0, R_c): no long-range attraction");
        if (const auto* es = std::get_if<ExpSumCoeff>(&spec.family)) {
            if (!(es->c1 > 0.0 && es->c2 < 0.0 && es->c1 > std::abs(es->c2)))
                violations.push_back("exp_sum along l: requires c1 > 0 > c2 and c1 > |c2|");
            if (!(es->e1 > es->e2 && es->e2 > 0.0))
                violations.push_back("exp_sum along l: requires e1 > e2 > 0");
        }
    }

    std::visit(
        [&](const auto& f) {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, KuckenRepulsion>) {
                if (f.alpha < 0.0 || f.beta < 0.0 || f.e_r < 0.0)
                    violations.push_back("kucken_repulsion: parameters must be nonnegative");
            } else if constexpr (std::is_same_v<T, KuckenAttraction>) {
                if (f.gamma < 0.0 || f.e_a < 0.0)
                    violations.push_back("kucken_attraction: parameters must be nonnegative");
            }
        },
        spec.family);

    return violations;
}

// chi*f_A + f_R with shared cutoff parameters; chi enters as a composite
// weight so the evaluation path is the same as any other composite.
inline CoefficientSpec make_kucken_pair_member(double weight_attraction,
                                               const KuckenAttraction& fa,
                                               const KuckenRepulsion& fr, double r_cutoff,
                                               double epsilon, CutoffMode mode) {
    CoefficientSpec attraction{fa, r_cutoff, epsilon, mode};
    CoefficientSpec repulsion{fr, r_cutoff, epsilon, mode};
    CompositeCoeff comp;
    comp.terms.emplace_back(weight_attraction, std::move(attraction));
    comp.terms.emplace_back(1.0, std::move(repulsion));
    return CoefficientSpec{std::move(comp), r_cutoff, epsilon, mode};
}

} // namespace ridgeline

#endif
