#include "moebius/moebius.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace moebius {

namespace {

constexpr double kSignEps = 1e-12;

// Canonical sign: first entry with modulus > kSignEps gets argument in (-pi/2, pi/2].
void canonicalize_sign(Complex& a, Complex& b, Complex& c, Complex& d) {
    for (Complex* e : {&a, &b, &c, &d}) {
        if (std::abs(*e) > kSignEps) {
            double arg = std::arg(*e);
            if (arg <= -M_PI / 2.0 || arg > M_PI / 2.0) {
                a = -a; b = -b; c = -c; d = -d;
            }
            return;
        }
    }
}

double dist_to_unit_interval_04(Complex t) {
    double x = t.real(), y = t.imag();
    if (x < 0.0) return std::hypot(x, y);
    if (x > 4.0) return std::hypot(x - 4.0, y);
    return std::abs(y);
}

} // namespace

SpherePoint::SpherePoint(Complex a, Complex b) {
    double ma = std::abs(a), mb = std::abs(b);
    if (ma == 0.0 && mb == 0.0)
        throw Error(Error::Code::SingularMatrix, "SpherePoint: both homogeneous coordinates zero");
    if (mb >= ma) {
        z1 = a / b;
        z2 = Complex(1.0);
    } else {
        z1 = Complex(1.0);
        z2 = b / a;
    }
}

Complex SpherePoint::to_complex() const {
    if (std::abs(z2) == 0.0)
        throw Error(Error::Code::PointAtInfinity, "to_complex: point at infinity");
    return z1 / z2;
}

double chordal(const SpherePoint& p, const SpherePoint& q) {
    double np = std::sqrt(std::norm(p.z1) + std::norm(p.z2));
    double nq = std::sqrt(std::norm(q.z1) + std::norm(q.z2));
    return 2.0 * std::abs(p.z1 * q.z2 - p.z2 * q.z1) / (np * nq);
}

MoebiusMap MoebiusMap::from_entries(Complex a, Complex b, Complex c, Complex d) {
    Complex det = a * d - b * c;
    if (std::abs(det) < 1e-30)
        throw Error(Error::Code::SingularMatrix, "MoebiusMap: determinant ~ 0");
    Complex s = std::sqrt(det);
    a /= s; b /= s; c /= s; d /= s;
    canonicalize_sign(a, b, c, d);
    return MoebiusMap{a, b, c, d};
}

bool MoebiusMap::approx_equal(const MoebiusMap& o, double tol) const {
    auto close = [tol](const MoebiusMap& x, const MoebiusMap& y) {
        return std::abs(x.a - y.a) <= tol && std::abs(x.b - y.b) <= tol &&
               std::abs(x.c - y.c) <= tol && std::abs(x.d - y.d) <= tol;
    };
    MoebiusMap neg{-o.a, -o.b, -o.c, -o.d};
    return close(*this, o) || close(*this, neg);
}

bool is_circle(const GeneralizedCircle& c) { return std::holds_alternative<Circle>(c); }
const Circle& as_circle(const GeneralizedCircle& c) { return std::get<Circle>(c); }
const Line& as_line(const GeneralizedCircle& c) { return std::get<Line>(c); }

GeneralizedCircle circle_through(Complex p1, Complex p2, Complex p3) {
    // Fit in centroid-local coordinates; the |z|^2 terms cancel catastrophically
    // for tiny circles far from the origin otherwise.
    Complex c0 = (p1 + p2 + p3) / 3.0;
    Complex q1 = p1 - c0, q2 = p2 - c0, q3 = p3 - c0;
    double x1 = q1.real(), y1 = q1.imag();
    double x2 = q2.real(), y2 = q2.imag();
    double x3 = q3.real(), y3 = q3.imag();
    double det = 2.0 * (x1 * (y2 - y3) + x2 * (y3 - y1) + x3 * (y1 - y2));
    double scale = std::max({std::abs(q1 - q2), std::abs(q2 - q3), std::abs(q3 - q1)});
    if (scale == 0.0)
        throw Error(Error::Code::DegenerateImage, "circle_through: coincident points");

    if (std::abs(det) > 1e-13 * scale * scale) {
        double s1 = std::norm(q1), s2 = std::norm(q2), s3 = std::norm(q3);
        double ux = (s1 * (y2 - y3) + s2 * (y3 - y1) + s3 * (y1 - y2)) / det;
        double uy = (s1 * (x3 - x2) + s2 * (x1 - x3) + s3 * (x2 - x1)) / det;
        Complex center = c0 + Complex(ux, uy);
        double radius = std::abs(Complex(ux, uy) - q1);
        if (radius <= kLineRadiusThreshold)
            return Circle{center, radius};
    }

    // Collinear (or absurdly flat): line through the two farthest points.
    // The offset is taken against the unshifted point.
    Complex dir = (std::abs(p3 - p1) >= std::abs(p2 - p1)) ? (p3 - p1) : (p2 - p1);
    dir /= std::abs(dir);
    Complex normal(-dir.imag(), dir.real());
    double offset = normal.real() * p1.real() + normal.imag() * p1.imag();
    if (offset < 0.0 || (offset == 0.0 && (normal.real() < 0.0 ||
                         (normal.real() == 0.0 && normal.imag() < 0.0)))) {
        normal = -normal;
        offset = -offset;
    }
    return Line{normal, offset};
}

bool circle_approx_equal(const GeneralizedCircle& x, const GeneralizedCircle& y, double tol) {
    if (is_circle(x) != is_circle(y)) return false;
    if (is_circle(x)) {
        const Circle& a = as_circle(x);
        const Circle& b = as_circle(y);
        return std::abs(a.center - b.center) <= tol && std::abs(a.radius - b.radius) <= tol;
    }
    const Line& a = as_line(x);
    const Line& b = as_line(y);
    bool same = std::abs(a.normal - b.normal) <= tol && std::abs(a.offset - b.offset) <= tol;
    bool flipped = std::abs(a.normal + b.normal) <= tol && std::abs(a.offset + b.offset) <= tol;
    return same || flipped;
}

double circle_point_residual(const GeneralizedCircle& c, Complex p) {
    if (is_circle(c)) {
        const Circle& k = as_circle(c);
        return std::abs(std::abs(p - k.center) - k.radius);
    }
    const Line& l = as_line(c);
    return std::abs(l.normal.real() * p.real() + l.normal.imag() * p.imag() - l.offset);
}

Complex circle_sample(const GeneralizedCircle& c, double t) {
    if (is_circle(c)) {
        const Circle& k = as_circle(c);
        return k.center + k.radius * Complex(std::cos(t), std::sin(t));
    }
    const Line& l = as_line(c);
    Complex base = l.offset * l.normal;
    Complex dir(-l.normal.imag(), l.normal.real());
    double span = std::max(1.0, std::abs(l.offset));
    return base + std::tan(std::clamp(t, -1.5, 1.5)) * span * dir;
}

std::string to_string(MapClass c) {
    switch (c) {
        case MapClass::Identity:   return "Identity";
        case MapClass::Parabolic:  return "Parabolic";
        case MapClass::Elliptic:   return "Elliptic";
        case MapClass::Loxodromic: return "Loxodromic";
    }
    return "?";
}

SpherePoint apply(const MoebiusMap& m, const SpherePoint& p) {
    return SpherePoint(m.a * p.z1 + m.b * p.z2, m.c * p.z1 + m.d * p.z2);
}

Complex apply(const MoebiusMap& m, Complex z) {
    return apply(m, SpherePoint::from_complex(z)).to_complex();
}

MoebiusMap compose(const MoebiusMap& m1, const MoebiusMap& m2) {
    return MoebiusMap::from_entries(m1.a * m2.a + m1.b * m2.c, m1.a * m2.b + m1.b * m2.d,
                                    m1.c * m2.a + m1.d * m2.c, m1.c * m2.b + m1.d * m2.d);
}

double tr2_interval_distance(const MoebiusMap& m) {
    return dist_to_unit_interval_04(m.trace() * m.trace());
}

MapClass classify(const MoebiusMap& m, double tol) {
    if (m.is_identity(tol)) return MapClass::Identity;
    Complex t = m.trace() * m.trace();
    if (dist_to_unit_interval_04(t) > tol) return MapClass::Loxodromic;
    if (std::abs(t - Complex(4.0)) <= tol) return MapClass::Parabolic;
    if (std::abs(t.imag()) <= tol && t.real() >= 0.0 && t.real() < 4.0)
        return MapClass::Elliptic;
    throw Error(Error::Code::AmbiguousClassification,
                "classify: tr^2 within tol of a class boundary; tighten tol");
}

std::pair<SpherePoint, SpherePoint> fixed_points(const MoebiusMap& m, double tol) {
    if (m.is_identity(tol))
        throw Error(Error::Code::IsIdentity, "fixed_points: map is the identity");

    if (std::abs(m.c) <= tol) {
        // Infinity is fixed. Second root of (d-a) z = b.
        Complex da = m.d - m.a;
        if (std::abs(da) <= tol)
            return {SpherePoint::infinity(), SpherePoint::infinity()}; // parabolic translation
        return {SpherePoint::from_complex(m.b / da), SpherePoint::infinity()};
    }

    // c z^2 + (d - a) z - b = 0, discriminant tr^2 - 4 (det 1).
    Complex B = m.d - m.a;
    Complex disc = m.trace() * m.trace() - Complex(4.0);
    Complex s = std::sqrt(disc);
    if (std::real(std::conj(B) * s) < 0.0) s = -s;
    Complex q = -0.5 * (B + s);
    if (std::abs(q) <= tol) {
        // B ~ 0 and disc ~ 0: double root at (a-d)/(2c).
        Complex z = (m.a - m.d) / (2.0 * m.c);
        return {SpherePoint::from_complex(z), SpherePoint::from_complex(z)};
    }
    // Viete: roots of c z^2 + B z + (-b) are q/c and -b/q.
    return {SpherePoint::from_complex(-m.b / q), SpherePoint::from_complex(q / m.c)};
}

GeneralizedCircle apply_circle(const MoebiusMap& m, const GeneralizedCircle& c, double tol) {
    constexpr int kSamples = 12;
    std::array<SpherePoint, kSamples> img;
    std::array<bool, kSamples> finite{};
    for (int k = 0; k < kSamples; ++k) {
        double t = is_circle(c) ? (2.0 * M_PI * k) / kSamples
                                : -1.45 + 2.9 * double(k) / (kSamples - 1);
        img[k] = apply(m, SpherePoint::from_complex(circle_sample(c, t)));
        finite[k] = !img[k].is_infinity(1e-12) && std::abs(img[k].to_complex()) < 1e9;
    }

    int n_finite = int(std::count(finite.begin(), finite.end(), true));
    if (n_finite < 2)
        throw Error(Error::Code::DegenerateImage, "apply_circle: image collapsed near infinity");

    // The remaining transported samples must land on the fitted curve.
    auto check_residuals = [&](const GeneralizedCircle& fitted) {
        double scale = is_circle(fitted)
            ? std::abs(as_circle(fitted).center) + as_circle(fitted).radius
            : 1.0 + std::abs(as_line(fitted).offset);
        double bound = std::max(tol, 1e-11 * (1.0 + scale));
        for (int k = 0; k < kSamples; ++k)
            if (finite[k] && circle_point_residual(fitted, img[k].to_complex()) > bound)
                throw Error(Error::Code::DegenerateImage,
                            "apply_circle: fitting residual above tolerance");
        return fitted;
    };

    if (n_finite < kSamples) {
        // Image passes through infinity: it is a line through the finite images.
        int i = -1, j = -1;
        double best = -1.0;
        for (int p = 0; p < kSamples; ++p) {
            if (!finite[p]) continue;
            for (int q = p + 1; q < kSamples; ++q) {
                if (!finite[q]) continue;
                double d = std::abs(img[p].to_complex() - img[q].to_complex());
                if (d > best) { best = d; i = p; j = q; }
            }
        }
        if (best <= 1e-14 * std::max(1.0, std::abs(img[i].to_complex())))
            throw Error(Error::Code::DegenerateImage, "apply_circle: near-coincident image points");
        Complex p1 = img[i].to_complex(), p2 = img[j].to_complex();
        return check_residuals(circle_through(p1, 0.5 * (p1 + p2), p2));
    }

    // Greedy well-separated triple: farthest pair, then max-min third point.
    int i = 0, j = 1;
    double best = -1.0;
    for (int p = 0; p < kSamples; ++p)
        for (int q = p + 1; q < kSamples; ++q) {
            double d = std::abs(img[p].to_complex() - img[q].to_complex());
            if (d > best) { best = d; i = p; j = q; }
        }
    if (best <= 1e-14 * std::max(1.0, std::abs(img[i].to_complex())))
        throw Error(Error::Code::DegenerateImage, "apply_circle: near-coincident image points");
    int k3 = -1;
    double best3 = -1.0;
    for (int p = 0; p < kSamples; ++p) {
        if (p == i || p == j) continue;
        double d = std::min(std::abs(img[p].to_complex() - img[i].to_complex()),
                            std::abs(img[p].to_complex() - img[j].to_complex()));
        if (d > best3) { best3 = d; k3 = p; }
    }
    return check_residuals(
        circle_through(img[i].to_complex(), img[k3].to_complex(), img[j].to_complex()));
}

MoebiusMap from_circle_pairing(const Circle& src, const Circle& dst, bool fuchsian, double tol) {
    Complex c = src.center, cp = dst.center;
    double rrp = src.radius * dst.radius;
    if (fuchsian) {
        if (std::abs(c.imag()) > tol || std::abs(cp.imag()) > tol)
            throw Error(Error::Code::NonRealCenters,
                        "from_circle_pairing: fuchsian mode needs real centers");
        // gamma(z) = (c'z - cc' - rr')/(z - c); det = rr' > 0.
        return MoebiusMap::from_entries(cp, -c * cp - rrp, Complex(1.0), -c);
    }
    // gamma(z) = c' + rr'/(z - c); det = -rr'.
    return MoebiusMap::from_entries(cp, -c * cp + rrp, Complex(1.0), -c);
}

} // namespace moebius
