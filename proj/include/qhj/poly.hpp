#pragma once

#include "qhj/exact.hpp"

#include <utility>
#include <vector>

namespace qhj {

// Dense polynomial with complex coefficients, ascending degree.
class Poly {
public:
    Poly() = default;
    explicit Poly(std::vector<cplx> coeffs);
    Poly(std::initializer_list<cplx> coeffs);
    static Poly constant(cplx c);
    static Poly monomial(int degree, cplx c = 1.0);
    static Poly from_roots(const std::vector<cplx>& roots);

    int degree() const;
    cplx coeff(int k) const;
    const std::vector<cplx>& coeffs() const { return c_; }
    cplx operator()(cplx y) const;
    Poly derivative() const;
    double max_abs() const;
    Poly trimmed(double rel_tol = 0.0) const;

    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    Poly& operator*=(const Poly& o);
    Poly& operator*=(cplx s);
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(Poly a, const Poly& b) { return a *= b; }
    friend Poly operator*(Poly a, cplx s) { return a *= s; }
    friend Poly operator*(cplx s, Poly a) { return a *= s; }

    // Long division; returns (quotient, remainder).
    std::pair<Poly, Poly> divmod(const Poly& divisor) const;

private:
    std::vector<cplx> c_;
};

enum class Parity { even, odd, none };

const char* to_string(Parity p);

// Polynomial factor P_n of a wavefunction in the mapped variable.
struct PolynomialOnT {
    std::vector<cplx> coeffs;
    Parity parity = Parity::none;

    int degree() const;
    cplx operator()(cplx t) const;
    cplx leading() const;
};

}  // namespace qhj
