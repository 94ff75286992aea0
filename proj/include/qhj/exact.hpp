#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <optional>
#include <string>

namespace qhj {

using cplx = std::complex<double>;
using Rational = boost::multiprecision::cpp_rational;

// A number that stays a Gaussian rational (p/q + i r/s) as long as every
// operation allows it, and otherwise degrades to a complex double.
class Exact {
public:
    Exact();
    Exact(int v);
    Exact(long v);
    Exact(long long v);
    Exact(Rational re, Rational im = Rational(0));

    static Exact numeric(cplx v);
    // Exact when a rational with denominator <= 10^6 reproduces v bit for bit.
    static Exact from_double(double v);
    // Accepts "3", "-0.25", "7/2", "1e-3".
    static Exact parse(const std::string& text);

    bool is_exact() const { return exact_; }
    const Rational& re_q() const { return re_; }
    const Rational& im_q() const { return im_; }
    cplx value() const { return v_; }
    double real() const { return v_.real(); }
    double imag() const { return v_.imag(); }
    bool is_real(double tol = 1e-12) const;
    bool is_zero(double tol = 0.0) const;

    // Integer value if the number is (within tol, for numeric values) an integer.
    std::optional<long long> as_integer(double tol = 1e-9) const;

    std::string str() const;

    Exact operator-() const;
    Exact& operator+=(const Exact& o);
    Exact& operator-=(const Exact& o);
    Exact& operator*=(const Exact& o);
    Exact& operator/=(const Exact& o);

    friend Exact operator+(Exact a, const Exact& b) { return a += b; }
    friend Exact operator-(Exact a, const Exact& b) { return a -= b; }
    friend Exact operator*(Exact a, const Exact& b) { return a *= b; }
    friend Exact operator/(Exact a, const Exact& b) { return a /= b; }

private:
    void sync();

    bool exact_ = true;
    Rational re_{0};
    Rational im_{0};
    cplx v_{0.0, 0.0};
};

// Principal square root; exact when the argument is real and |arg| is a perfect rational square.
Exact sqrt(const Exact& x);

// Exact equality when both sides are exact, otherwise |a-b| <= tol * max(1, |a|, |b|).
bool same_value(const Exact& a, const Exact& b, double tol = 1e-10);

// Ordering used for residue branches: larger real part first, ties by larger imaginary part.
bool branch_before(const Exact& a, const Exact& b);

std::string format_double(double v);
std::string format_complex(cplx v);

}  // namespace qhj
