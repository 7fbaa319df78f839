#include "legendre/weierstrass.hpp"

#include <cmath>
#include <numbers>

namespace legendre {

namespace {
constexpr double pi = std::numbers::pi;
const cplx I(0.0, 1.0);
} // namespace

BettiCoords betti_of(cplx z, cplx omega1, cplx omega2)
{
    BettiCoords b;
    b.A = omega1 * std::conj(omega2) - omega2 * std::conj(omega1);
    b.B1 = std::conj(omega2) * z - omega2 * std::conj(z);
    b.B2 = omega1 * std::conj(z) - std::conj(omega1) * z;
    // B1/A and B2/A are real; drop the rounding residue in the imaginary part
    b.b1 = (b.B1 / b.A).real();
    b.b2 = (b.B2 / b.A).real();
    return b;
}

Lattice::Lattice(const PeriodData &pd) { init(pd.omega1, pd.omega2); }

Lattice::Lattice(cplx omega1, cplx omega2) { init(omega1, omega2); }

void Lattice::init(cplx omega1, cplx omega2)
{
    w1_ = omega1;
    w2_ = omega2;
    cplx t0 = omega2 / omega1;
    if (!(t0.imag() > 0.0))
        throw error(errc::not_upper_half_plane, "omega2/omega1 must lie in the upper half plane");
    TauReduction red = reduce_tau_standard(t0);
    M_ = red.matrix;
    W2_ = double(M_.a) * omega2 + double(M_.b) * omega1;
    W1_ = double(M_.c) * omega2 + double(M_.d) * omega1;
    tau_ = W2_ / W1_;
    q_ = std::exp(I * pi * tau_);
    Theta th = theta1(0.0);
    theta1p0_ = th.t1;
    H1_ = -pi * pi * th.t3 / (3.0 * W1_ * th.t1);
    H2_ = (H1_ * W2_ - 2.0 * pi * I) / W1_;
    e2_ = double(M_.d) * H2_ - double(M_.b) * H1_;
    e1_ = -double(M_.c) * H2_ + double(M_.a) * H1_;
    cplx r1 = wp(0.5 * W1_), r2 = wp(0.5 * W2_), r3 = wp(0.5 * (W1_ + W2_));
    g2_ = 2.0 * (r1 * r1 + r2 * r2 + r3 * r3);
    g3_ = 4.0 * r1 * r2 * r3;
}

Lattice::Theta Lattice::theta1(cplx v) const
{
    Theta th{0.0, 0.0, 0.0, 0.0};
    double growth = std::exp(std::abs(v.imag()));
    for (int n = 0; n < 200; ++n) {
        double k = 2.0 * n + 1.0;
        double h = n + 0.5;
        cplx A = std::exp(I * pi * tau_ * (h * h));
        if (n % 2)
            A = -A;
        cplx ep = std::exp(I * k * v), em = std::exp(-I * k * v);
        cplx s = (ep - em) / I, c = ep + em;
        th.t += A * s;
        th.t1 += A * k * c;
        th.t2 -= A * k * k * s;
        th.t3 -= A * k * k * k * c;
        double bound = std::abs(A) * std::pow(growth, k) * k * k * k;
        if (n > 0 && bound < 1e-18 * (std::abs(th.t1) + std::abs(th.t3)))
            break;
    }
    return th;
}

void Lattice::reduce(cplx z, cplx &z0, long long &m, long long &n) const
{
    cplx r = z / W1_;
    double y = r.imag() / tau_.imag();
    double x = r.real() - y * tau_.real();
    n = std::llround(y);
    m = std::llround(x);
    z0 = z - double(m) * W1_ - double(n) * W2_;
}

void Lattice::check_pole(cplx z0) const
{
    if (std::abs(z0) <= 1e-12 * std::abs(W1_))
        throw error(errc::pole_at_lattice_point, "argument lies on the lattice");
}

LatticePoint Lattice::locate(cplx z) const
{
    LatticePoint p;
    p.z = z;
    p.b = betti_of(z, w1_, w2_);
    p.in_fundamental_domain =
        p.b.b1 >= 0.0 && p.b.b1 < 1.0 && p.b.b2 >= 0.0 && p.b.b2 < 1.0 && (p.b.b1 != 0.0 || p.b.b2 != 0.0);
    return p;
}

cplx Lattice::wp(cplx z) const
{
    cplx z0;
    long long m, n;
    reduce(z, z0, m, n);
    check_pole(z0);
    Theta th = theta1(pi * z0 / W1_);
    cplx a = th.t1 / th.t;
    cplx k = pi / W1_;
    return -H1_ / W1_ - k * k * (th.t2 / th.t - a * a);
}

cplx Lattice::wp_prime(cplx z) const
{
    cplx z0;
    long long m, n;
    reduce(z, z0, m, n);
    check_pole(z0);
    Theta th = theta1(pi * z0 / W1_);
    cplx a = th.t1 / th.t;
    cplx k = pi / W1_;
    return -k * k * k * (th.t3 / th.t - 3.0 * (th.t2 / th.t) * a + 2.0 * a * a * a);
}

cplx Lattice::zeta(cplx z) const
{
    cplx z0;
    long long m, n;
    reduce(z, z0, m, n);
    check_pole(z0);
    Theta th = theta1(pi * z0 / W1_);
    return H1_ * z0 / W1_ + (pi / W1_) * th.t1 / th.t + double(m) * H1_ + double(n) * H2_;
}

cplx Lattice::log_sigma(cplx z) const
{
    cplx z0;
    long long m, n;
    reduce(z, z0, m, n);
    Theta th = theta1(pi * z0 / W1_);
    if (th.t == 0.0)
        throw error(errc::pole_at_lattice_point, "sigma vanishes on the lattice");
    cplx ls = H1_ * z0 * z0 / (2.0 * W1_) + std::log(W1_ / pi) + std::log(th.t) - std::log(theta1p0_);
    cplx w = double(m) * W1_ + double(n) * W2_;
    cplx h = double(m) * H1_ + double(n) * H2_;
    double parity = double((m + n + m * n) % 2);
    return ls + h * (z0 + 0.5 * w) + I * pi * parity;
}

cplx Lattice::sigma(cplx z) const
{
    cplx z0;
    long long m, n;
    reduce(z, z0, m, n);
    if (std::abs(z0) <= 1e-300)
        return 0.0;
    return std::exp(log_sigma(z));
}

cplx Lattice::log_phi(cplx z) const
{
    return -0.5 * z * z * e1_ / w1_ + pi * I * z / w1_ + log_sigma(z);
}

cplx Lattice::phi(cplx z) const
{
    cplx z0;
    long long m, n;
    reduce(z, z0, m, n);
    if (std::abs(z0) <= 1e-300)
        return 0.0;
    return std::exp(log_phi(z));
}

cplx Lattice::dlog_phi(cplx z) const { return -z * e1_ / w1_ + pi * I / w1_ + zeta(z); }

cplx psi_n_eval(long long n, cplx z_tilde, cplx omega1, cplx omega2)
{
    if (std::llabs(n) > 1000000)
        throw error(errc::invalid_argument, "|n| must not exceed 10^6");
    long long nn = n * (n - 1); // exact: |n(n-1)| < 2^63
    return -2.0 * pi * I * double(n) * z_tilde / omega1 - pi * I * double(nn) * omega2 / omega1;
}

double im_omega_eta(const PeriodData &pd)
{
    return ((pd.omega1 + pd.omega2) * (pd.eta1 + pd.eta2)).imag();
}

long long psi_lambda_zero_count(const PeriodData &pd)
{
    double X = std::abs(im_omega_eta(pd)) / (2.0 * pi);
    // k = 0, 1, ... with k < X
    return static_cast<long long>(std::ceil(X));
}

} // namespace legendre
