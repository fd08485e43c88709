#ifndef CURRENTS_QUADRATURE_HPP
#define CURRENTS_QUADRATURE_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace currents {

/// Panel boundaries a = t_0 < ... < t_P = b in geometric progression, with at
/// least panels_per_decade panels for every factor of ten covered.
inline std::vector<double> geometric_nodes(double a, double b, int panels_per_decade) {
    if (!(a > 0.0) || !(b > a)) {
        throw std::invalid_argument("geometric_nodes requires 0 < a < b");
    }
    const double decades = std::log10(b / a);
    const int panels = std::max(1, static_cast<int>(std::ceil(decades * panels_per_decade)));
    std::vector<double> nodes(static_cast<std::size_t>(panels) + 1);
    const double ratio = std::pow(b / a, 1.0 / panels);
    nodes[0] = a;
    for (int j = 1; j < panels; ++j) {
        nodes[static_cast<std::size_t>(j)] = nodes[static_cast<std::size_t>(j) - 1] * ratio;
    }
    nodes[static_cast<std::size_t>(panels)] = b;
    return nodes;
}

/// Panel boundaries in arithmetic progression.
inline std::vector<double> linear_nodes(double a, double b, int panels) {
    if (!(b > a) || panels < 1) {
        throw std::invalid_argument("linear_nodes requires a < b and panels >= 1");
    }
    std::vector<double> nodes(static_cast<std::size_t>(panels) + 1);
    for (int j = 0; j <= panels; ++j) {
        nodes[static_cast<std::size_t>(j)] =
            a + (b - a) * (static_cast<double>(j) / static_cast<double>(panels));
    }
    nodes[static_cast<std::size_t>(panels)] = b;
    return nodes;
}

/// Composite Simpson over the given panel boundaries: each panel [t_j, t_j+1]
/// contributes (h/6)(f(t_j) + 4 f(mid) + f(t_j+1)).
template <class F>
double composite_simpson(const std::vector<double>& nodes, F&& f) {
    if (nodes.size() < 2) {
        throw std::invalid_argument("composite_simpson requires at least one panel");
    }
    double total = 0.0;
    double fa = f(nodes[0]);
    for (std::size_t j = 0; j + 1 < nodes.size(); ++j) {
        const double a = nodes[j];
        const double b = nodes[j + 1];
        const double fb = f(b);
        total += (b - a) / 6.0 * (fa + 4.0 * f(0.5 * (a + b)) + fb);
        fa = fb;
    }
    return total;
}

}  // namespace currents

#endif
