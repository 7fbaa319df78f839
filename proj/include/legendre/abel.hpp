#pragma once

// The abelian integral z(lambda, xi) on the slit plane
// X_lambda = C \ ((-inf, 0] u [0, lambda] u [1, inf)), Betti coordinates,
// the phi-logarithm L, graph reconstruction and monodromy.
//
// Branch: z(xi) = int_xi^-inf dX / (2 s) on (-inf, 0) with s = i sqrt(-X) sqrt(1-X) sqrt(lambda-X),
// read as the boundary value from below and continued into X_lambda. With
// this choice z -> omega2/2 at 0, z -> omega1/2 at 1 and z -> (omega1+omega2)/2 at lambda.

#include <array>
#include <string>
#include <vector>

#include "legendre/weierstrass.hpp"

namespace legendre {

// V7, V8, V9 are the slits (-inf, 0], L_lambda, [1, inf); V10 is (0, 1) off L_lambda.
enum class Region { V1 = 1, V2, V3, V4, V5, V6, V7, V8, V9, V10 };
enum class Side { interior, north, south };

int region_index(Region r);
bool is_slit(Region r);
const char *region_name(Region r);
const char *side_name(Side s);

// North is Im > 0 for the real slits and the left of 0 -> lambda on L_lambda.
struct SlitPlanePoint {
    cplx xi;
    Region region = Region::V1;
    Side side = Side::interior;
};

Region classify_region(cplx lam, cplx xi);
SlitPlanePoint make_point(cplx lam, cplx xi, Side side = Side::interior);
// Unit vector pointing from a slit into the requested side.
cplx side_normal(cplx lam, Region slit, Side side);
// -1 unless xi is within `radius` of 0 (0), 1 (1) or lambda (2).
int branch_point_index(cplx lam, cplx xi, double radius);

struct AbelValue {
    cplx z;    // abelian integral
    cplx zeta; // zeta_lambda(z), via the integral of the second kind
    cplx s;    // continued kernel root at xi (0 at a branch point)
};

// Per-lambda routing data: a visibility graph of waypoints in X_lambda with
// z, zeta and the kernel root precomputed at every waypoint.
class AbelMap {
public:
    explicit AbelMap(cplx lam, double tol = 1e-11);
    AbelMap(cplx lam, const PeriodData &pd, double tol = 1e-11);

    cplx lambda() const { return lam_; }
    const PeriodData &periods() const { return pd_; }
    const Lattice &lattice() const { return lat_; }
    double tol() const { return tol_; }

    AbelValue eval(const SlitPlanePoint &p) const;
    cplx z(const SlitPlanePoint &p) const { return eval(p).z; }

    // Polyline inside X_lambda (except possibly its end) from the waypoint
    // x_c = (1 + Re lambda)/2 to the target, together with the kernel root
    // at its first vertex.
    struct Route {
        std::vector<cplx> vertices;
        cplx s_start;
        bool end_is_branch_point = false;
    };
    Route route_from_center(const SlitPlanePoint &p) const;
    cplx center() const { return nodes_[center_].X; }

    size_t node_count() const { return nodes_.size(); }

private:
    struct Node {
        cplx X;
        cplx z, zeta, s;
        int parent = -1;
    };
    cplx lam_;
    PeriodData pd_;
    Lattice lat_;
    double tol_;
    std::vector<Node> nodes_;
    int center_ = 0;

    void build();
    bool visible(cplx a, cplx b) const;
    // best node from which the straight segment to X is admissible
    int pick_node(cplx X) const;
    std::vector<cplx> approach(const SlitPlanePoint &p, int &node, bool &to_branch) const;
    std::vector<int> tree_path(int node) const;
};

cplx abel_z(cplx lam, const SlitPlanePoint &xi, double tol = 1e-11);
BettiCoords betti(const AbelMap &map, const SlitPlanePoint &xi);

// Both one-sided limits at a slit point. Across (-inf, 0) the two sides
// differ by a loop around {0, lambda}: z_N - z_S = +-omega1. Across L_lambda
// and [1, inf) the root changes sign: z_N + z_S = +-(omega1 + omega2), +-omega1.
struct NorthSouthSample {
    cplx xi;
    Region region = Region::V7;
    cplx z_north, z_south;
    double relation_residual = 0.0; // in units of |omega1|
    double betti_gap = 0.0;         // max_i ||b_i(N)| - |b_i(S)||
    bool ok = false;
};
NorthSouthSample north_south(const AbelMap &map, cplx xi);

// Lemmas on the three slits: |B1|, |B2| against 14 log|l|^-1 + 36,
// 13 log|l|^-1 + 65 and 5 log|l|^-1 + 25. The slit values are the limits
// used by the explicit boundary formulas, which are our south-side limits.
enum class Boundary { neg_axis, L_lambda, one_infty };
struct NumeratorSample {
    cplx xi;
    double absB1 = 0.0, absB2 = 0.0, bound = 0.0;
    bool ok = false;
};
struct NumeratorReport {
    Boundary boundary;
    std::vector<NumeratorSample> samples;
    double max_ratio = 0.0; // max over samples of max(|B1|,|B2|)/bound
    bool ok = true;
};
double numerator_bound(Boundary b, cplx lam);
NumeratorReport numerator_bound_check(const AbelMap &map, Boundary boundary, int samples);

// L is built from nested integrals along the route from 1:
// I = int_1^X dX/(2s), J = int_1^X (X - (l+1)/3) dX/(2s), K = int_1^X J dI,
// giving L = -eta1 I^2/(2 omega1) - K - pi i I/omega1.
struct LogPhiTerms {
    cplx L;       // log phi(z(xi)) - log phi(omega1/2), continued from xi = 1
    cplx z;       // omega1/2 - I
    cplx int_q;   // int_1^xi dX / (2 sqrt(X(X-l)))
    cplx R;       // the remainder of the second-kind double integral
    cplx R_phi;   // lambda R_phi term
    cplx LL1_residual; // L - (-int_q - R - R_phi + z pi i/omega1 - pi i/2)
};
LogPhiTerms log_phi_terms(const AbelMap &map, const SlitPlanePoint &xi);
cplx log_phi_L(const AbelMap &map, const SlitPlanePoint &xi);
cplx log_phi_L(cplx lam, const SlitPlanePoint &xi, double tol = 1e-11);
// log phi(z(xi)) - log phi(omega2/2), continued from 0 inside the disc |xi| <= 2|lambda|.
cplx log_phi_L_tilde(const AbelMap &map, const SlitPlanePoint &xi);

struct BoundCheck {
    std::string name;
    bool applicable = false;
    double value = 0.0, bound = 0.0;
    bool ok = true;
};
struct RTermsReport {
    std::vector<BoundCheck> checks;
    bool ok = true;
};
RTermsReport R_terms_bound_check(const AbelMap &map, cplx xi);

// int over the arc |X| = |xi| from |xi| to xi (shorter way) of |dX / (2 sqrt(X(X-1)(X-l)))|.
double arc_integral_abs(cplx lam, cplx xi);
// int_0^X straight of |dX / (2 sqrt(...))|.
double radial_integral_abs(cplx lam, cplx X);

struct WpGraphPoint {
    Region region = Region::V1;
    long long m = 0, n = 0;
    int branch = 1; // +1: z* = z + m w1 + n w2, -1: -z* = z + m w1 + n w2
    bool explicit_point = false;
    cplx xi;     // wp(z) + (l+1)/3
    cplx value;  // wp(z)
    double residual = 0.0;
};
WpGraphPoint reconstruct_wp_graph(const AbelMap &map, cplx z);
cplx reconstruct_zeta_graph(const AbelMap &map, cplx z, WpGraphPoint *info = nullptr);

// Group S2 x| Z^2 acting on Betti pairs by b -> sign b + translation.
// Product g * h applies g first, then h.
struct MonodromyElement {
    int sign = 1;
    long long t1 = 0, t2 = 0;
    MonodromyElement operator*(const MonodromyElement &h) const
    {
        return {sign * h.sign, h.sign * t1 + h.t1, h.sign * t2 + h.t2};
    }
    MonodromyElement inverse() const { return {sign, -sign * t1, -sign * t2}; }
    bool operator==(const MonodromyElement &o) const = default;
    std::array<double, 2> apply(std::array<double, 2> b) const
    {
        return {sign * b[0] + double(t1), sign * b[1] + double(t2)};
    }
};
std::string to_string(const MonodromyElement &g);

// Tokens g1, g2, g3 and their inverses g1^-1 / g1', separated by spaces or '*'.
std::vector<int> parse_word(const std::string &word);
MonodromyElement monodromy_rho(const std::vector<int> &word); // letters +-1, +-2, +-3
MonodromyElement monodromy_generator(int i);

// Closed polygon around one puncture, based in X_lambda.
ContourPath standard_loop(cplx lam, int puncture, int vertices = 64);
std::array<int, 3> winding_numbers(const ContourPath &loop, cplx lam);

struct MonodromyNumeric {
    MonodromyElement element;
    int puncture = -1;
    std::array<double, 2> b_start{}, b_end{};
    double residual = 0.0;
};
MonodromyNumeric monodromy_numeric(const AbelMap &map, const ContourPath &loop);

// Macintyre chain on V_j: finite-difference partials of u + i v = -2 z against
// Re s/|g|, Im s/|g| and the algebraic identities between f1..f5.
struct ChainAuditSample {
    cplx xi;
    double partial_residual = 0.0;
    double algebraic_residual = 0.0;
};
struct ChainAuditReport {
    Region region;
    std::vector<ChainAuditSample> samples;
    double max_partial = 0.0, max_algebraic = 0.0;
    bool ok = true;
};
ChainAuditReport chain_derivative_audit(const AbelMap &map, Region region, int samples, unsigned long long seed = 1);

// Deterministic sample of a point in region V_j (with a side for the slits).
SlitPlanePoint sample_region(cplx lam, Region region, unsigned long long key);

} // namespace legendre
