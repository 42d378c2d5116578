#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace emdx {

// Natural cubic spline through (x, y) knots with strictly increasing x.
// Two knots degenerate to linear interpolation.
class CubicSpline {
public:
    CubicSpline(std::vector<double> x, std::vector<double> y)
        : x_(std::move(x)), y_(std::move(y)) {
        const std::size_t n = x_.size();
        if (n < 2 || y_.size() != n)
            throw std::invalid_argument("spline needs >= 2 knots with matching y");
        for (std::size_t i = 1; i < n; ++i)
            if (!(x_[i] > x_[i - 1]))
                throw std::invalid_argument("spline knots must be strictly increasing");
        m_.assign(n, 0.0);
        if (n == 2) return;

        // Tridiagonal solve for second derivatives, natural end conditions.
        std::vector<double> diag(n, 0.0), rhs(n, 0.0), upper(n, 0.0);
        diag[0] = 1.0;
        diag[n - 1] = 1.0;
        for (std::size_t i = 1; i + 1 < n; ++i) {
            double h0 = x_[i] - x_[i - 1];
            double h1 = x_[i + 1] - x_[i];
            diag[i] = 2.0 * (h0 + h1);
            upper[i] = h1;
            rhs[i] = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
        }
        // Thomas algorithm; first and last rows are identity.
        std::vector<double> lower(n, 0.0);
        for (std::size_t i = 1; i + 1 < n; ++i) lower[i] = x_[i] - x_[i - 1];
        for (std::size_t i = 1; i < n; ++i) {
            double w = lower[i] / diag[i - 1];
            diag[i] -= w * upper[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
        m_[n - 1] = rhs[n - 1] / diag[n - 1];
        for (std::size_t i = n - 1; i-- > 0;)
            m_[i] = (rhs[i] - upper[i] * m_[i + 1]) / diag[i];
    }

    double operator()(double t) const {
        const std::size_t n = x_.size();
        std::size_t j = segment(t);
        double h = x_[j + 1] - x_[j];
        if (n == 2) {
            double w = (t - x_[0]) / h;
            return y_[0] * (1.0 - w) + y_[1] * w;
        }
        double a = (x_[j + 1] - t) / h;
        double b = (t - x_[j]) / h;
        return a * y_[j] + b * y_[j + 1] +
               ((a * a * a - a) * m_[j] + (b * b * b - b) * m_[j + 1]) * h * h / 6.0;
    }

private:
    std::size_t segment(double t) const {
        // Clamped extrapolation: reuse the end segments outside the knot range.
        if (t <= x_.front()) return 0;
        if (t >= x_.back()) return x_.size() - 2;
        std::size_t lo = 0, hi = x_.size() - 1;
        while (hi - lo > 1) {
            std::size_t mid = (lo + hi) / 2;
            (x_[mid] <= t ? lo : hi) = mid;
        }
        return lo;
    }

    std::vector<double> x_, y_, m_;
};

}  // namespace emdx
