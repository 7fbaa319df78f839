#pragma once

// Complex path quadrature for integrands p(X)/sqrt((X-e0)(X-e1)(X-e2)) with
// the square root continued along the path, plus series summation with a
// geometric tail bound.

#include <array>
#include <complex>
#include <functional>
#include <vector>

#include "legendre/errors.hpp"

namespace legendre {

using cplx = std::complex<double>;

inline std::array<cplx, 3> legendre_branch_points(cplx lam) { return {cplx(0.0), cplx(1.0), lam}; }

// Sheet bookkeeping: r[k] is a continued square root of X - e[k]; the kernel
// root is sign * r[0] * r[1] * r[2].
struct SheetState {
    std::array<cplx, 3> r{};
    double sign = 1.0;
};

struct KernelPoint {
    cplx X;
    std::array<cplx, 3> d; // X - e[k], computed from the nearest segment end
    std::array<cplx, 3> r; // continued roots of d[k]
    cplx s;                // continued root of d[0] d[1] d[2]
};

using Integrand = std::function<cplx(const KernelPoint &)>;

struct QuadratureResult {
    cplx value{0.0};
    double abs_error_estimate = 0.0;
    long evaluations = 0;
};

// A polyline. When `ray` is set the path continues from the last vertex to
// infinity along `ray_direction`. `branch_seed` is the kernel root at the
// start vertex; when the start vertex is itself a branch point it is the root
// at the midpoint of the first segment instead.
struct ContourPath {
    std::vector<cplx> vertices;
    bool ray = false;
    cplx ray_direction{-1.0, 0.0};
    std::array<bool, 2> endpoint_singular{false, false};
    cplx branch_seed{1.0, 0.0};
};

struct EngineOptions {
    double tol = 1e-10;
    double guard = 1e-8;
    int max_depth = 48;
};

class SqrtKernel {
public:
    explicit SqrtKernel(std::array<cplx, 3> e, double guard = 1e-8);

    const std::array<cplx, 3> &branch_points() const { return e_; }
    double guard() const { return guard_; }

    cplx polynomial(cplx X) const { return (X - e_[0]) * (X - e_[1]) * (X - e_[2]); }
    int branch_index(cplx X, double radius) const; // -1 if X is not within radius of a branch point

    // Principal roots at a regular point, overall sign chosen to reproduce s_value.
    SheetState seed(cplx X, cplx s_value) const;
    SheetState principal(cplx X) const;

    // Continue the state known at `from` along the straight line to `to`.
    SheetState carry(cplx from, const SheetState &st, cplx to) const;
    cplx root(cplx /*X*/, const SheetState &st) const { return st.sign * st.r[0] * st.r[1] * st.r[2]; }

    // Integral of f(kp) dX along the segment a -> b. The state at `a` must be
    // known and `a` must be regular; `b` may be a branch point.
    QuadratureResult segment(cplx a, cplx b, const SheetState &at_a, const Integrand &f, double tol,
                             int max_depth = 48) const;

    // Integral of f(kp) dX from a regular point a to infinity along dir.
    QuadratureResult ray(cplx a, cplx dir, const SheetState &at_a, const Integrand &f, double tol,
                         int max_depth = 48) const;

    // Distance from a branch point (other than the segment ends) to the segment.
    double clearance(cplx a, cplx b) const;

private:
    std::array<cplx, 3> e_;
    double guard_;

    QuadratureResult leaf(cplx a0, const SheetState &st0, cplx p, cplx q, const Integrand &f, double tol,
                          int depth, int max_depth) const;
};

QuadratureResult integrate(const ContourPath &path, const std::array<cplx, 3> &branch_points, const Integrand &f,
                           const EngineOptions &opt = {});

// Integral of numerator(X) dX / sqrt((X-e0)(X-e1)(X-e2)); numerator
// coefficients in increasing degree.
QuadratureResult integrate_sqrt_kernel(const ContourPath &path, const std::vector<cplx> &numerator,
                                       const std::array<cplx, 3> &branch_points, double tol = 1e-10);

// Kernel root at the end vertex after continuation along the path.
cplx continue_branch(const ContourPath &path, const std::array<cplx, 3> &branch_points, double guard = 1e-8);

// Sum of coeff(n) x^n, stopping when the geometric majorant of the tail is below tol.
cplx sum_power_series(const std::function<cplx(long)> &coeff, cplx x, double tol, double majorant_ratio,
                      long max_terms = 1000000);

// Plain tanh-sinh on [0, 1]; g receives (u, 1 - u).
QuadratureResult tanh_sinh_unit(const std::function<cplx(double, double)> &g, double tol, int max_level = 9);

} // namespace legendre
