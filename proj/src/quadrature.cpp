#include "quadrature.hpp"

#include "twotier/summation.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace twotier::detail {

namespace {

constexpr int kOrder = 20;
constexpr int kMaxDepth = 40;

struct Rule {
    std::array<double, kOrder> nodes{};
    std::array<double, kOrder> weights{};
};

// Roots of P_n by Newton iteration from the Chebyshev-like initial guess.
Rule make_rule() {
    Rule rule;
    for (int i = 0; i < kOrder; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (kOrder + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= kOrder; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = kOrder * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        rule.nodes[i] = x;
        rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

const Rule& rule() {
    static const Rule r = make_rule();
    return r;
}

double panel(const std::function<double(double)>& f, double a, double b) {
    const auto& r = rule();
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    CompensatedSum acc;
    for (int i = 0; i < kOrder; ++i) acc.add(r.weights[i] * f(mid + half * r.nodes[i]));
    return half * acc.value();
}

double refine(const std::function<double(double)>& f, double a, double b, double whole, double tol,
              int depth) {
    const double mid = 0.5 * (a + b);
    const double left = panel(f, a, mid);
    const double right = panel(f, mid, b);
    if (depth >= kMaxDepth || std::abs(left + right - whole) <= tol) return left + right;
    return refine(f, a, mid, left, 0.5 * tol, depth + 1) + refine(f, mid, b, right, 0.5 * tol, depth + 1);
}

} // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol) {
    return refine(f, a, b, panel(f, a, b), abs_tol, 0);
}

} // namespace twotier::detail
