// Real polynomials in one variable, the test functions of the linear
// spectral statistics.  Coefficients are stored lowest order first.
#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace gs {

struct Poly {
    std::vector<double> coeff;  // coeff[k] multiplies x^k

    Poly() = default;
    explicit Poly(std::vector<double> c) : coeff(std::move(c)) { trim(); }

    static Poly x() { return Poly({0.0, 1.0}); }
    static Poly x2() { return Poly({0.0, 0.0, 1.0}); }

    // Accepts "x", "x2", "x3", ... as used on the command line.
    static Poly named(std::string_view name) {
        if (name.empty() || name.front() != 'x')
            throw std::invalid_argument("unknown test function: " + std::string(name));
        int deg = 1;
        if (name.size() > 1) {
            deg = 0;
            for (std::size_t i = 1; i < name.size(); ++i) {
                const char c = name[i];
                if (c < '0' || c > '9')
                    throw std::invalid_argument("unknown test function: " + std::string(name));
                deg = 10 * deg + (c - '0');
            }
        }
        if (deg < 1 || deg > 8)
            throw std::invalid_argument("test function degree out of range: " + std::string(name));
        std::vector<double> c(static_cast<std::size_t>(deg) + 1, 0.0);
        c.back() = 1.0;
        return Poly(std::move(c));
    }

    int degree() const { return static_cast<int>(coeff.size()) - 1; }

    double operator()(double x) const {
        double s = 0.0;
        for (std::size_t k = coeff.size(); k-- > 0;) s = s * x + coeff[k];
        return s;
    }

    std::complex<double> operator()(std::complex<double> z) const {
        std::complex<double> s = 0.0;
        for (std::size_t k = coeff.size(); k-- > 0;) s = s * z + coeff[k];
        return s;
    }

  private:
    void trim() {
        while (coeff.size() > 1 && coeff.back() == 0.0) coeff.pop_back();
    }
};

}  // namespace gs
