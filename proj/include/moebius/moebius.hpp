#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>

namespace moebius {

using Complex = std::complex<double>;

constexpr double kDefaultTol = 1e-9;

// Circles of radius beyond this are represented as lines.
constexpr double kLineRadiusThreshold = 1e6;

class Error : public std::runtime_error {
public:
    enum class Code {
        SingularMatrix,
        AmbiguousClassification,
        IsIdentity,
        DegenerateImage,
        NonRealCenters,
        PointAtInfinity,
    };

    Error(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Code code() const { return code_; }

private:
    Code code_;
};

// Point of the Riemann sphere in homogeneous coordinates (z1 : z2).
// Canonical representative: the coordinate of maximal modulus equals 1,
// preferring z2 on ties so finite points read (z, 1). Infinity is (1, 0).
struct SpherePoint {
    Complex z1{0.0, 0.0};
    Complex z2{1.0, 0.0};

    SpherePoint() = default;
    SpherePoint(Complex a, Complex b);          // canonicalizes; throws on (0,0)
    static SpherePoint from_complex(Complex z) { return SpherePoint(z, Complex(1.0)); }
    static SpherePoint infinity() { return SpherePoint(Complex(1.0), Complex(0.0)); }

    bool is_infinity(double tol = kDefaultTol) const { return std::abs(z2) <= tol; }
    Complex to_complex() const;                 // throws PointAtInfinity on (1,0)
};

// Chordal (spherical) distance, diameter-2 normalization; exact on infinity.
double chordal(const SpherePoint& p, const SpherePoint& q);
inline double chordal(Complex p, Complex q) {
    return chordal(SpherePoint::from_complex(p), SpherePoint::from_complex(q));
}

// Element of PSL(2,C) stored as a det-1 matrix with a canonical sign: the
// first entry of (a,b,c,d) with modulus > 1e-12 has argument in (-pi/2, pi/2].
struct MoebiusMap {
    Complex a{1.0}, b{0.0}, c{0.0}, d{1.0};

    static MoebiusMap identity() { return MoebiusMap{}; }
    // Normalizes arbitrary entries to det 1 + canonical sign.
    static MoebiusMap from_entries(Complex a, Complex b, Complex c, Complex d);

    Complex det() const { return a * d - b * c; }
    Complex trace() const { return a + d; }
    MoebiusMap inverse() const { return from_entries(d, -b, -c, a); }

    bool approx_equal(const MoebiusMap& other, double tol = kDefaultTol) const;
    bool is_identity(double tol = kDefaultTol) const { return approx_equal(identity(), tol); }
};

struct Circle {
    Complex center{0.0, 0.0};
    double radius{1.0};
};

struct Line {
    Complex normal{1.0, 0.0}; // unit
    double offset{0.0};       // line = { z : Re(conj(normal) * z) == offset }
};

using GeneralizedCircle = std::variant<Circle, Line>;

bool is_circle(const GeneralizedCircle& c);
const Circle& as_circle(const GeneralizedCircle& c);
const Line& as_line(const GeneralizedCircle& c);

// Fits the generalized circle through three pairwise distinct points; emits a
// Line for collinear triples or fitted radii beyond kLineRadiusThreshold.
GeneralizedCircle circle_through(Complex p1, Complex p2, Complex p3);

bool circle_approx_equal(const GeneralizedCircle& x, const GeneralizedCircle& y,
                         double tol = kDefaultTol);

// Distance from a point to the carrier curve (ordinary Euclidean distance in C).
double circle_point_residual(const GeneralizedCircle& c, Complex p);

// Sample point of the carrier at angle/parameter t.
Complex circle_sample(const GeneralizedCircle& c, double t);

enum class MapClass { Identity, Parabolic, Elliptic, Loxodromic };

std::string to_string(MapClass c);

SpherePoint apply(const MoebiusMap& m, const SpherePoint& p);
Complex apply(const MoebiusMap& m, Complex z); // convenience; may return huge values near the pole

MoebiusMap compose(const MoebiusMap& m1, const MoebiusMap& m2);

// Distance of tr^2 from the real interval [0,4] (0 inside).
double tr2_interval_distance(const MoebiusMap& m);

// Classification by t = tr^2 relative to the real interval [0,4]:
// Loxodromic iff t is farther than tol from [0,4]; Parabolic iff |t-4| <= tol;
// Elliptic iff t is real within tol with 0 <= Re t < 4. The leftover sliver
// (t within tol of the class boundary at 0) raises AmbiguousClassification.
MapClass classify(const MoebiusMap& m, double tol = kDefaultTol);

// Fixed points as roots of c z^2 + (d-a) z - b with homogeneous handling of
// c = 0; a parabolic map reports its single fixed point twice.
std::pair<SpherePoint, SpherePoint> fixed_points(const MoebiusMap& m, double tol = kDefaultTol);

// Image circle by transporting well-separated sample points and refitting.
GeneralizedCircle apply_circle(const MoebiusMap& m, const GeneralizedCircle& c,
                               double tol = kDefaultTol);

// Pairing map sending the exterior of src onto the interior of dst and src
// onto dst. Fuchsian mode: gamma(z) = (c'z - cc' - rr')/(z - c), real entries;
// generic mode: gamma(z) = c' + rr'/(z - c).
MoebiusMap from_circle_pairing(const Circle& src, const Circle& dst, bool fuchsian,
                               double tol = kDefaultTol);

} // namespace moebius
