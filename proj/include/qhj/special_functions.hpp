#pragma once

#include <complex>

namespace qhj {

struct JacobiTriple {
    double sn;
    double cn;
    double dn;
};

// Complete elliptic integral of the first kind, parameter convention m = k^2, 0 <= m < 1.
double elliptic_K(double m);

// sn, cn, dn at (x, m), 0 <= m < 1.
JacobiTriple jacobi_elliptic(double x, double m);

// P_n^{(alpha,beta)}(t) by the three-term recurrence; complex parameters and argument allowed.
std::complex<double> jacobi_polynomial(int n, std::complex<double> alpha, std::complex<double> beta,
                                       std::complex<double> t);
double jacobi_polynomial(int n, double alpha, double beta, double t);

// Associated Laguerre L_n^{(k)}(y) by the three-term recurrence.
std::complex<double> laguerre(int n, std::complex<double> k, std::complex<double> y);
double laguerre(int n, double k, double y);

}  // namespace qhj
