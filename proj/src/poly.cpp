#include "qhj/poly.hpp"

#include "qhj/errors.hpp"

#include <algorithm>
#include <cmath>

namespace qhj {

Poly::Poly(std::vector<cplx> coeffs) : c_(std::move(coeffs)) {}
Poly::Poly(std::initializer_list<cplx> coeffs) : c_(coeffs) {}

Poly Poly::constant(cplx c) { return Poly({c}); }

Poly Poly::monomial(int degree, cplx c) {
    std::vector<cplx> v(static_cast<size_t>(degree) + 1, 0.0);
    v.back() = c;
    return Poly(std::move(v));
}

Poly Poly::from_roots(const std::vector<cplx>& roots) {
    Poly p = constant(1.0);
    for (cplx r : roots) p *= Poly({-r, 1.0});
    return p;
}

int Poly::degree() const {
    for (int k = static_cast<int>(c_.size()) - 1; k >= 0; --k)
        if (c_[k] != cplx(0.0)) return k;
    return -1;
}

cplx Poly::coeff(int k) const {
    if (k < 0 || k >= static_cast<int>(c_.size())) return 0.0;
    return c_[k];
}

cplx Poly::operator()(cplx y) const {
    cplx acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * y + *it;
    return acc;
}

Poly Poly::derivative() const {
    if (c_.size() <= 1) return Poly();
    std::vector<cplx> d(c_.size() - 1);
    for (size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * static_cast<double>(k);
    return Poly(std::move(d));
}

double Poly::max_abs() const {
    double m = 0.0;
    for (cplx v : c_) m = std::max(m, std::abs(v));
    return m;
}

Poly Poly::trimmed(double rel_tol) const {
    double cut = rel_tol * max_abs();
    std::vector<cplx> v = c_;
    while (!v.empty() && std::abs(v.back()) <= cut) v.pop_back();
    return Poly(std::move(v));
}

Poly& Poly::operator+=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0.0);
    for (size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    return *this;
}

Poly& Poly::operator-=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0.0);
    for (size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
    return *this;
}

Poly& Poly::operator*=(const Poly& o) {
    if (c_.empty() || o.c_.empty()) {
        c_.clear();
        return *this;
    }
    std::vector<cplx> r(c_.size() + o.c_.size() - 1, 0.0);
    for (size_t i = 0; i < c_.size(); ++i)
        for (size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
    c_ = std::move(r);
    return *this;
}

Poly& Poly::operator*=(cplx s) {
    for (cplx& v : c_) v *= s;
    return *this;
}

std::pair<Poly, Poly> Poly::divmod(const Poly& divisor) const {
    int dd = divisor.degree();
    if (dd < 0) throw Error(ErrorKind::parameter_domain, "polynomial division by zero");
    std::vector<cplx> rem = c_;
    int nd = degree();
    if (nd < dd) return {Poly(), Poly(rem)};
    std::vector<cplx> q(static_cast<size_t>(nd - dd) + 1, 0.0);
    cplx lead = divisor.c_[dd];
    for (int k = nd; k >= dd; --k) {
        cplx f = rem[k] / lead;
        q[k - dd] = f;
        for (int i = 0; i <= dd; ++i) rem[k - dd + i] -= f * divisor.c_[i];
        rem[k] = 0.0;
    }
    rem.resize(static_cast<size_t>(dd));
    return {Poly(std::move(q)), Poly(std::move(rem))};
}

const char* to_string(Parity p) {
    switch (p) {
        case Parity::even: return "even";
        case Parity::odd: return "odd";
        default: return "none";
    }
}

int PolynomialOnT::degree() const {
    for (int k = static_cast<int>(coeffs.size()) - 1; k >= 0; --k)
        if (coeffs[k] != cplx(0.0)) return k;
    return -1;
}

cplx PolynomialOnT::operator()(cplx t) const {
    cplx acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * t + *it;
    return acc;
}

cplx PolynomialOnT::leading() const {
    int d = degree();
    return d < 0 ? cplx(0.0) : coeffs[d];
}

}  // namespace qhj
