#pragma once

// Weierstrass functions of the lattice Z omega1 + Z omega2 through Jacobi theta
// series on an SL2(Z)-reduced basis.

#include "legendre/modular.hpp"
#include "legendre/periods.hpp"

namespace legendre {

struct BettiCoords {
    double b1 = 0.0, b2 = 0.0;
    cplx B1, B2, A;
};

BettiCoords betti_of(cplx z, cplx omega1, cplx omega2);

struct LatticePoint {
    cplx z;
    BettiCoords b;
    bool in_fundamental_domain = false;
};

class Lattice {
public:
    // Quasi-periods are recomputed from theta series; PeriodData supplies the basis.
    explicit Lattice(const PeriodData &pd);
    Lattice(cplx omega1, cplx omega2);

    cplx omega1() const { return w1_; }
    cplx omega2() const { return w2_; }
    cplx eta1() const { return e1_; }
    cplx eta2() const { return e2_; }
    cplx g2() const { return g2_; }
    cplx g3() const { return g3_; }

    LatticePoint locate(cplx z) const;

    cplx wp(cplx z) const;
    cplx wp_prime(cplx z) const;
    cplx zeta(cplx z) const;
    cplx sigma(cplx z) const;
    cplx phi(cplx z) const;
    // Logarithms are exact up to an additive 2 pi i k.
    cplx log_sigma(cplx z) const;
    cplx log_phi(cplx z) const;
    // d/dz log phi = -z eta1/omega1 + pi i/omega1 + zeta
    cplx dlog_phi(cplx z) const;

    // eta(m omega1 + n omega2)
    cplx eta_of(long long m, long long n) const { return double(m) * e1_ + double(n) * e2_; }

private:
    cplx w1_, w2_, e1_, e2_;
    // reduced basis W1, W2 = W1 tau, quasi-periods H1, H2, nome q = exp(i pi tau)
    cplx W1_, W2_, H1_, H2_, tau_, q_;
    Mat2 M_; // (W2, W1) = M (w2, w1)
    cplx theta1p0_;
    cplx g2_, g3_;

    void init(cplx omega1, cplx omega2);
    struct Theta {
        cplx t, t1, t2, t3; // theta1 and its first three v-derivatives
    };
    Theta theta1(cplx v) const;
    // z = z0 + m W1 + n W2 with z0 in the centred parallelogram of the reduced basis
    void reduce(cplx z, cplx &z0, long long &m, long long &n) const;
    void check_pole(cplx z0) const;
};

// psi_n(z~) with phi(z~ + n omega2) = (-1)^n exp(psi_n) phi(z~), any integer n.
cplx psi_n_eval(long long n, cplx z_tilde, cplx omega1, cplx omega2);

// Im(omega eta), omega = omega1 + omega2, eta = eta1 + eta2.
double im_omega_eta(const PeriodData &pd);

// #{r in [0, 1/2): theta(r) in Z} for theta(r) = Im(r eta omega)/pi read as an
// affine function vanishing at r = 0; equivalently the integers k with
// k / (2X) in [0, 1/2), X = Im(eta omega)/(2 pi).
long long psi_lambda_zero_count(const PeriodData &pd);

} // namespace legendre
