#include "qhj/exact.hpp"

#include "qhj/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace qhj {

namespace {

using boost::multiprecision::cpp_int;

double to_double(const Rational& q) { return q.convert_to<double>(); }

std::optional<cpp_int> exact_isqrt(const cpp_int& n) {
    if (n < 0) return std::nullopt;
    cpp_int r = boost::multiprecision::sqrt(n);
    if (r * r == n) return r;
    return std::nullopt;
}

std::optional<Rational> rational_sqrt(const Rational& q) {
    auto num = exact_isqrt(boost::multiprecision::numerator(q));
    auto den = exact_isqrt(boost::multiprecision::denominator(q));
    if (!num || !den) return std::nullopt;
    return Rational(*num, *den);
}

std::string rational_str(const Rational& q) {
    std::ostringstream os;
    os << boost::multiprecision::numerator(q);
    if (boost::multiprecision::denominator(q) != 1) os << "/" << boost::multiprecision::denominator(q);
    return os.str();
}

}  // namespace

Exact::Exact() { sync(); }
Exact::Exact(int v) : re_(v) { sync(); }
Exact::Exact(long v) : re_(v) { sync(); }
Exact::Exact(long long v) : re_(v) { sync(); }
Exact::Exact(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) { sync(); }

void Exact::sync() {
    if (exact_) v_ = cplx(to_double(re_), to_double(im_));
}

Exact Exact::numeric(cplx v) {
    Exact e;
    e.exact_ = false;
    e.re_ = 0;
    e.im_ = 0;
    e.v_ = v;
    return e;
}

Exact Exact::from_double(double v) {
    if (!std::isfinite(v)) throw Error(ErrorKind::parameter_domain, "non-finite parameter value");
    if (v == std::floor(v) && std::fabs(v) < 9e15) return Exact(static_cast<long long>(v));
    // Continued-fraction convergents, accepted only on an exact round trip.
    double x = std::fabs(v);
    long long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    double r = x;
    for (int it = 0; it < 40; ++it) {
        double a = std::floor(r);
        if (a > 1e15) break;
        long long ai = static_cast<long long>(a);
        long long h2 = ai * h1 + h0;
        long long k2 = ai * k1 + k0;
        if (k2 > 1000000) break;
        h0 = h1; h1 = h2; k0 = k1; k1 = k2;
        if (static_cast<double>(h1) / static_cast<double>(k1) == x) {
            Rational q(h1, k1);
            return Exact(v < 0 ? Rational(-q) : q);
        }
        double frac = r - a;
        if (frac == 0.0) break;
        r = 1.0 / frac;
    }
    return numeric(cplx(v, 0.0));
}

Exact Exact::parse(const std::string& text) {
    auto slash = text.find('/');
    try {
        if (slash != std::string::npos) {
            long long p = std::stoll(text.substr(0, slash));
            long long q = std::stoll(text.substr(slash + 1));
            if (q == 0) throw Error(ErrorKind::parameter_domain, "zero denominator in '" + text + "'");
            return Exact(Rational(p, q));
        }
        size_t used = 0;
        double v = std::stod(text, &used);
        if (used != text.size()) throw Error(ErrorKind::schema, "not a number: '" + text + "'");
        // Decimal strings without exponent are converted digit by digit so 0.3 is exactly 3/10.
        if (text.find_first_of("eE") == std::string::npos) {
            std::string s = text;
            bool neg = !s.empty() && s[0] == '-';
            if (!s.empty() && (s[0] == '-' || s[0] == '+')) s = s.substr(1);
            auto dot = s.find('.');
            std::string digits = dot == std::string::npos ? s : s.substr(0, dot) + s.substr(dot + 1);
            size_t scale = dot == std::string::npos ? 0 : s.size() - dot - 1;
            // cpp_int reads a leading 0 as an octal prefix.
            digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size() - 1));
            if (!digits.empty() && digits.size() < 30) {
                cpp_int num(digits);
                cpp_int den = boost::multiprecision::pow(cpp_int(10), static_cast<unsigned>(scale));
                Rational q(num, den);
                return Exact(neg ? Rational(-q) : q);
            }
        }
        return from_double(v);
    } catch (const std::invalid_argument&) {
        throw Error(ErrorKind::schema, "not a number: '" + text + "'");
    } catch (const std::out_of_range&) {
        throw Error(ErrorKind::schema, "number out of range: '" + text + "'");
    }
}

bool Exact::is_real(double tol) const {
    if (exact_) return im_ == 0;
    return std::fabs(v_.imag()) <= tol * std::max(1.0, std::abs(v_));
}

bool Exact::is_zero(double tol) const {
    if (exact_) return re_ == 0 && im_ == 0;
    return std::abs(v_) <= tol;
}

std::optional<long long> Exact::as_integer(double tol) const {
    if (exact_) {
        if (im_ != 0 || boost::multiprecision::denominator(re_) != 1) return std::nullopt;
        return boost::multiprecision::numerator(re_).convert_to<long long>();
    }
    double r = std::round(v_.real());
    if (std::fabs(v_.real() - r) <= tol && std::fabs(v_.imag()) <= tol) return static_cast<long long>(r);
    return std::nullopt;
}

std::string Exact::str() const {
    if (!exact_) return format_complex(v_);
    if (im_ == 0) return rational_str(re_);
    std::string s;
    if (re_ != 0) s = rational_str(re_) + (im_ > 0 ? "+" : "");
    if (denominator(im_) == 1) return s + rational_str(im_) + "i";
    // Parenthesized so that 1/8 i does not read as 1/(8i).
    return s + (im_ < 0 ? "-(" : "(") + rational_str(abs(im_)) + ")i";
}

Exact Exact::operator-() const {
    if (!exact_) return numeric(-v_);
    return Exact(-re_, -im_);
}

Exact& Exact::operator+=(const Exact& o) {
    if (exact_ && o.exact_) {
        re_ += o.re_;
        im_ += o.im_;
        sync();
    } else {
        *this = numeric(v_ + o.v_);
    }
    return *this;
}

Exact& Exact::operator-=(const Exact& o) { return *this += -o; }

Exact& Exact::operator*=(const Exact& o) {
    if (exact_ && o.exact_) {
        Rational re = re_ * o.re_ - im_ * o.im_;
        Rational im = re_ * o.im_ + im_ * o.re_;
        re_ = re;
        im_ = im;
        sync();
    } else {
        *this = numeric(v_ * o.v_);
    }
    return *this;
}

Exact& Exact::operator/=(const Exact& o) {
    if (o.is_zero()) throw Error(ErrorKind::parameter_domain, "division by zero");
    if (exact_ && o.exact_) {
        Rational den = o.re_ * o.re_ + o.im_ * o.im_;
        Rational re = (re_ * o.re_ + im_ * o.im_) / den;
        Rational im = (im_ * o.re_ - re_ * o.im_) / den;
        re_ = re;
        im_ = im;
        sync();
    } else {
        *this = numeric(v_ / o.v_);
    }
    return *this;
}

Exact sqrt(const Exact& x) {
    if (x.is_exact() && x.im_q() == 0) {
        const Rational& q = x.re_q();
        if (q >= 0) {
            if (auto r = rational_sqrt(q)) return Exact(*r);
        } else {
            if (auto r = rational_sqrt(Rational(-q))) return Exact(Rational(0), *r);
        }
    }
    return Exact::numeric(std::sqrt(x.value()));
}

bool same_value(const Exact& a, const Exact& b, double tol) {
    if (a.is_exact() && b.is_exact()) return a.re_q() == b.re_q() && a.im_q() == b.im_q();
    double scale = std::max({1.0, std::abs(a.value()), std::abs(b.value())});
    return std::abs(a.value() - b.value()) <= tol * scale;
}

bool branch_before(const Exact& a, const Exact& b) {
    if (a.is_exact() && b.is_exact()) {
        if (a.re_q() != b.re_q()) return a.re_q() > b.re_q();
        return a.im_q() > b.im_q();
    }
    const double tol = 1e-12 * std::max({1.0, std::abs(a.value()), std::abs(b.value())});
    if (std::fabs(a.real() - b.real()) > tol) return a.real() > b.real();
    return a.imag() > b.imag();
}

std::string format_double(double v) {
    if (v == 0.0) return "0";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_complex(cplx v) {
    if (v.imag() == 0.0) return format_double(v.real());
    std::string s = format_double(v.real());
    std::string im = format_double(v.imag());
    if (im[0] != '-') im = "+" + im;
    return s + im + "i";
}

}  // namespace qhj
