#include "arproc/quad.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "arproc/errors.hpp"

namespace arproc {

namespace {

// Gauss-Kronrod 7/15 nodes and weights on [-1,1].
const double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
const double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
const double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct Segment {
    double lo, hi;
    Complex value;
    double error;
};

Segment gk15(const std::function<Complex(double)>& f, double lo, double hi) {
    const double c = 0.5 * (lo + hi);
    const double h = 0.5 * (hi - lo);
    Complex fc = f(c);
    Complex resk = fc * kWgk[7];
    Complex resg = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        double x = h * kXgk[j];
        Complex fsum = f(c - x) + f(c + x);
        resk += fsum * kWgk[j];
        if (j % 2 == 1) resg += fsum * kWg[j / 2];
    }
    Segment s;
    s.lo = lo;
    s.hi = hi;
    s.value = resk * h;
    double diff = std::abs(resk - resg) * std::abs(h);
    s.error = std::pow(200.0 * diff, 1.5);
    if (!(s.error < diff)) s.error = diff;
    s.error = std::max(s.error, 1e-300);
    return s;
}

struct SegmentCmp {
    bool operator()(const Segment& a, const Segment& b) const { return a.error < b.error; }
};

Complex adaptive(const std::function<Complex(double)>& f, double lo, double hi,
                 const QuadRule& rule, const std::vector<double>& splits) {
    std::priority_queue<Segment, std::vector<Segment>, SegmentCmp> heap;
    Complex total = 0.0;
    double err_total = 0.0;

    std::vector<double> pts = {lo};
    for (double s : splits)
        if (s > lo && s < hi) pts.push_back(s);
    pts.push_back(hi);
    std::sort(pts.begin(), pts.end());
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        Segment seg = gk15(f, pts[i], pts[i + 1]);
        total += seg.value;
        err_total += seg.error;
        heap.push(seg);
    }

    int used = static_cast<int>(pts.size()) - 1;
    while (used < rule.max_subdivisions) {
        double tol = std::max(rule.abs_tol, rule.rel_tol * std::abs(total));
        if (err_total <= tol) return total;
        Segment worst = heap.top();
        heap.pop();
        double mid = 0.5 * (worst.lo + worst.hi);
        if (mid <= worst.lo || mid >= worst.hi) {
            // interval at machine resolution; accept its contribution as-is
            err_total -= worst.error;
            continue;
        }
        Segment left = gk15(f, worst.lo, mid);
        Segment right = gk15(f, mid, worst.hi);
        total += left.value + right.value - worst.value;
        err_total += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++used;
    }
    double tol = std::max(rule.abs_tol, rule.rel_tol * std::abs(total));
    if (err_total <= tol) return total;
    throw ToleranceNotMet("integrate: refinement budget exhausted", total.real(), total.imag(),
                          err_total);
}

}  // namespace

Complex integrate(const std::function<Complex(double)>& f, double lo, double hi,
                  const QuadRule& rule) {
    if (!(lo < hi)) throw DomainError("integrate: requires lo < hi");
    if (rule.abs_tol <= 0 || rule.rel_tol <= 0 || rule.max_subdivisions < 1)
        throw DomainError("integrate: invalid QuadRule");

    const bool lo_inf = std::isinf(lo);
    const bool hi_inf = std::isinf(hi);
    if (!lo_inf && !hi_inf) return adaptive(f, lo, hi, rule, rule.singularity_hints);

    if (!lo_inf && hi_inf) {
        // t = lo + u/(1-u), u in (0,1)
        auto g = [&](double u) {
            double d = 1.0 - u;
            return f(lo + u / d) / (d * d);
        };
        std::vector<double> splits;
        for (double s : rule.singularity_hints)
            if (s > lo) splits.push_back((s - lo) / (1.0 + s - lo));
        return adaptive(g, 0.0, 1.0, rule, splits);
    }
    if (lo_inf && !hi_inf) {
        auto g = [&](double u) {
            double d = 1.0 - u;
            return f(hi - u / d) / (d * d);
        };
        std::vector<double> splits;
        for (double s : rule.singularity_hints)
            if (s < hi) splits.push_back((hi - s) / (1.0 + hi - s));
        return adaptive(g, 0.0, 1.0, rule, splits);
    }
    // t = u/(1-u^2), u in (-1,1)
    auto g = [&](double u) {
        double d = 1.0 - u * u;
        return f(u / d) * (1.0 + u * u) / (d * d);
    };
    return adaptive(g, -1.0, 1.0, rule, {0.0});
}

double integrate_real(const std::function<double(double)>& f, double lo, double hi,
                      const QuadRule& rule) {
    return integrate([&](double t) { return Complex(f(t), 0.0); }, lo, hi, rule).real();
}

double integrate_power_endpoint(const std::function<double(double)>& g, double a, double b,
                                double gamma, bool at_lower, const QuadRule& rule) {
    if (!(a < b)) throw DomainError("integrate_power_endpoint: requires a < b");
    if (!(gamma > 0.0 && gamma <= 1.0))
        throw DomainError("integrate_power_endpoint: gamma must lie in (0,1]");
    const double inv_g = 1.0 / gamma;
    const double wmax = std::pow(b - a, gamma);
    // w = (x - endpoint)^gamma: the (x-e)^(gamma-1) dx factor becomes dw/gamma.
    auto h = [&](double w) {
        double off = std::pow(w, inv_g);
        double x = at_lower ? a + off : b - off;
        return g(x) * inv_g;
    };
    return integrate_real(h, 0.0, wmax, rule);
}

}  // namespace arproc
