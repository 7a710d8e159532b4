#ifndef RIDGELINE_QUADRATURE_HPP
#define RIDGELINE_QUADRATURE_HPP

#include <algorithm>
#include <cmath>
#include <vector>

namespace ridgeline {

struct QuadNode {
    double x; // node on [-1, 1]
    double w;
};

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration on P_n.
inline std::vector<QuadNode> gauss_legendre(int n) {
    std::vector<QuadNode> nodes(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1);
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) < 1e-15) break;
        }
        nodes[i] = {-z, 2.0 / ((1.0 - z * z) * pp * pp)};
        nodes[n - 1 - i] = {z, nodes[i].w};
    }
    return nodes;
}

inline const std::vector<QuadNode>& gauss_legendre_16() {
    static const std::vector<QuadNode> nodes = gauss_legendre(16);
    return nodes;
}

// Composite 16-point Gauss-Legendre over [a, b]. The interval is first cut at
// the given split points (integrand kinks must not sit inside a panel), then
// each segment is divided into panels no wider than max_panel_width.
template <typename F>
double integrate(F&& f, double a, double b, double max_panel_width,
                 std::vector<double> splits = {}) {
    if (!(b > a)) return 0.0;
    splits.push_back(a);
    splits.push_back(b);
    std::sort(splits.begin(), splits.end());
    splits.erase(std::unique(splits.begin(), splits.end()), splits.end());

    const auto& gl = gauss_legendre_16();
    double total = 0.0;
    for (std::size_t s = 0; s + 1 < splits.size(); ++s) {
        const double lo = std::max(a, splits[s]);
        const double hi = std::min(b, splits[s + 1]);
        if (!(hi > lo)) continue;
        const int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) / max_panel_width)));
        const double h = (hi - lo) / panels;
        for (int p = 0; p < panels; ++p) {
            const double mid = lo + (p + 0.5) * h;
            const double half = 0.5 * h;
            double acc = 0.0;
            for (const auto& node : gl) acc += node.w * f(mid + half * node.x);
            total += half * acc;
        }
    }
    return total;
}

} // namespace ridgeline

#endif
