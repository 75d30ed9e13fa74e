#include "arproc/pchip.hpp"

#include <algorithm>
#include <cmath>

#include "arproc/errors.hpp"

namespace arproc {

Pchip::Pchip(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
    const size_t n = x_.size();
    if (n < 2 || y_.size() != n) throw DomainError("Pchip: need at least two matching nodes");
    for (size_t i = 1; i < n; ++i)
        if (!(x_[i] > x_[i - 1])) throw DomainError("Pchip: grid must be strictly increasing");

    std::vector<double> h(n - 1), delta(n - 1);
    for (size_t i = 0; i + 1 < n; ++i) {
        h[i] = x_[i + 1] - x_[i];
        delta[i] = (y_[i + 1] - y_[i]) / h[i];
    }

    d_.assign(n, 0.0);
    // Fritsch-Carlson slopes: weighted harmonic mean where secants agree in sign.
    for (size_t i = 1; i + 1 < n; ++i) {
        if (delta[i - 1] * delta[i] > 0.0) {
            double w1 = 2.0 * h[i] + h[i - 1];
            double w2 = h[i] + 2.0 * h[i - 1];
            d_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }
    auto end_slope = [](double h0, double h1, double d0, double d1) {
        double d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (d * d0 <= 0.0) return 0.0;
        if (d0 * d1 < 0.0 && std::fabs(d) > 3.0 * std::fabs(d0)) return 3.0 * d0;
        return d;
    };
    d_[0] = (n == 2) ? delta[0] : end_slope(h[0], h[1], delta[0], delta[1]);
    d_[n - 1] = (n == 2) ? delta[0] : end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);

    cum_.assign(n, 0.0);
    for (size_t i = 0; i + 1 < n; ++i) cum_[i + 1] = cum_[i] + segment_integral(int(i), x_[i + 1]);
}

int Pchip::segment(double t) const {
    auto it = std::upper_bound(x_.begin(), x_.end(), t);
    int i = int(it - x_.begin()) - 1;
    return std::clamp(i, 0, int(x_.size()) - 2);
}

double Pchip::operator()(double t) const {
    t = std::clamp(t, x_.front(), x_.back());
    int i = segment(t);
    double h = x_[i + 1] - x_[i];
    double u = (t - x_[i]) / h;
    double h00 = (1.0 + 2.0 * u) * (1.0 - u) * (1.0 - u);
    double h10 = u * (1.0 - u) * (1.0 - u);
    double h01 = u * u * (3.0 - 2.0 * u);
    double h11 = u * u * (u - 1.0);
    return h00 * y_[i] + h * h10 * d_[i] + h01 * y_[i + 1] + h * h11 * d_[i + 1];
}

// Exact integral of the cubic segment i from x_i to t.
double Pchip::segment_integral(int i, double t) const {
    double h = x_[i + 1] - x_[i];
    double u = (t - x_[i]) / h;
    double u2 = u * u, u3 = u2 * u, u4 = u3 * u;
    // antiderivatives of the Hermite basis on [0,1]
    double H00 = u - u3 + 0.5 * u4;
    double H10 = 0.5 * u2 - (2.0 / 3.0) * u3 + 0.25 * u4;
    double H01 = u3 - 0.5 * u4;
    double H11 = 0.25 * u4 - u3 / 3.0;
    return h * (H00 * y_[i] + h * H10 * d_[i] + H01 * y_[i + 1] + h * H11 * d_[i + 1]);
}

double Pchip::integral_from_start(double t) const {
    t = std::clamp(t, x_.front(), x_.back());
    int i = segment(t);
    return cum_[i] + segment_integral(i, t);
}

std::vector<double> chebyshev_grid(double hi, int n) {
    if (n < 2 || !(hi > 0.0)) throw DomainError("chebyshev_grid: need n >= 2, hi > 0");
    std::vector<double> g(n);
    for (int k = 0; k < n; ++k)
        g[k] = 0.5 * hi * (1.0 - std::cos(M_PI * double(k) / double(n - 1)));
    g.front() = 0.0;
    g.back() = hi;
    return g;
}

}  // namespace arproc
