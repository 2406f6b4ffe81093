#include "brancov/brancov.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace brancov {

using moebius::chordal;

Poly poly_trim(Poly p, double tol) {
    double scale = 0.0;
    for (const Complex& c : p) scale = std::max(scale, std::abs(c));
    while (!p.empty() && std::abs(p.back()) <= tol * std::max(1.0, scale)) p.pop_back();
    return p;
}

Poly poly_add(const Poly& a, const Poly& b) {
    Poly out(std::max(a.size(), b.size()), Complex(0.0));
    for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
    return out;
}

Poly poly_sub(const Poly& a, const Poly& b) {
    Poly out(std::max(a.size(), b.size()), Complex(0.0));
    for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) out[i] -= b[i];
    return out;
}

Poly poly_mul(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly out(a.size() + b.size() - 1, Complex(0.0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

Poly poly_derivative(const Poly& p) {
    Poly out;
    for (std::size_t k = 1; k < p.size(); ++k) out.push_back(double(k) * p[k]);
    return out;
}

Complex poly_eval(const Poly& p, Complex z) {
    Complex acc(0.0);
    for (std::size_t k = p.size(); k-- > 0;) acc = acc * z + p[k];
    return acc;
}

int poly_degree(const Poly& p) {
    for (std::size_t k = p.size(); k-- > 0;)
        if (std::abs(p[k]) != 0.0) return int(k);
    return -1;
}

std::vector<Complex> poly_roots(const Poly& p_in) {
    Poly p = poly_trim(p_in);
    int n = poly_degree(p);
    if (n < 0)
        throw Error(Error::Code::RootFindingFailure, "poly_roots: zero polynomial");
    if (n == 0) return {};

    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) companion(i, n - 1) = -p[std::size_t(i)] / p[std::size_t(n)];

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
    if (solver.info() != Eigen::Success)
        throw Error(Error::Code::RootFindingFailure, "poly_roots: eigensolver failed");
    std::vector<Complex> roots(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) roots[std::size_t(i)] = solver.eigenvalues()(i);
    return roots;
}

int RationalMap::degree() const {
    return std::max(poly_degree(num), poly_degree(den));
}

Complex RationalMap::eval(Complex z) const {
    return poly_eval(num, z) / poly_eval(den, z);
}

SpherePoint RationalMap::eval_at_infinity() const {
    int dn = poly_degree(num), dd = poly_degree(den);
    if (dn > dd) return SpherePoint::infinity();
    if (dn < dd) return SpherePoint::from_complex(Complex(0.0));
    return SpherePoint::from_complex(num[std::size_t(dn)] / den[std::size_t(dd)]);
}

namespace {

// Sylvester resultant magnitude, row-normalized.
double resultant_magnitude(const Poly& p, const Poly& q) {
    int m = poly_degree(p), n = poly_degree(q);
    Eigen::MatrixXcd syl = Eigen::MatrixXcd::Zero(m + n, m + n);
    for (int r = 0; r < n; ++r)
        for (int k = 0; k <= m; ++k) syl(r, r + k) = p[std::size_t(m - k)];
    for (int r = 0; r < m; ++r)
        for (int k = 0; k <= n; ++k) syl(n + r, r + k) = q[std::size_t(n - k)];
    for (int r = 0; r < m + n; ++r) {
        double mx = syl.row(r).cwiseAbs().maxCoeff();
        if (mx > 0.0) syl.row(r) /= mx;
    }
    return std::abs(syl.determinant());
}

} // namespace

RationalMap make_rational_map(Poly num, Poly den, double tol) {
    num = poly_trim(std::move(num));
    den = poly_trim(std::move(den));
    if (poly_degree(num) < 0 && poly_degree(den) < 0)
        throw Error(Error::Code::InvalidMap, "0/0 is not a map");
    if (poly_degree(den) < 0)
        throw Error(Error::Code::InvalidMap, "denominator is identically zero");
    if (poly_degree(num) < 0)
        throw Error(Error::Code::InvalidMap, "numerator is identically zero");
    if (poly_degree(num) >= 1 && poly_degree(den) >= 1 &&
        resultant_magnitude(num, den) <= tol)
        throw Error(Error::Code::NotCoprime, "numerator and denominator share a root");
    RationalMap f;
    f.num = std::move(num);
    f.den = std::move(den);
    if (f.degree() < 1)
        throw Error(Error::Code::InvalidMap, "constant map");
    return f;
}

RationalMap structure_extension_map(Complex p_prime, int d) {
    if (d < 1)
        throw Error(Error::Code::InvalidMap, "structure_extension_map: d < 1");
    Poly num{Complex(1.0)};
    Poly base{-p_prime, Complex(1.0)};
    for (int k = 0; k < d; ++k) num = poly_mul(num, base);
    num[0] += p_prime;
    return make_rational_map(std::move(num), Poly{Complex(1.0)});
}

namespace {

Poly wronskian(const Poly& p, const Poly& q) {
    return poly_trim(poly_sub(poly_mul(poly_derivative(p), q), poly_mul(p, poly_derivative(q))));
}

Poly reversed(const Poly& p, int n) {
    Poly out(std::size_t(n) + 1, Complex(0.0));
    for (std::size_t k = 0; k < p.size(); ++k) out[std::size_t(n) - k] = p[k];
    return out;
}

} // namespace

std::vector<RamificationPoint> ramification_profile(const RationalMap& f, double cluster_tol) {
    std::vector<RamificationPoint> profile;

    Poly w = wronskian(f.num, f.den);
    if (poly_degree(w) < 0)
        throw Error(Error::Code::InvalidMap, "degenerate map: vanishing wronskian");

    std::vector<Complex> roots = (poly_degree(w) >= 1) ? poly_roots(w) : std::vector<Complex>{};
    std::sort(roots.begin(), roots.end(), [](Complex a, Complex b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });

    // Greedy clustering into multiplicities.
    std::vector<bool> taken(roots.size(), false);
    std::vector<std::pair<Complex, int>> clusters;
    for (std::size_t i = 0; i < roots.size(); ++i) {
        if (taken[i]) continue;
        Complex sum = roots[i];
        int count = 1;
        taken[i] = true;
        for (std::size_t j = i + 1; j < roots.size(); ++j) {
            if (taken[j]) continue;
            double scale = std::max(1.0, std::abs(roots[i]));
            if (std::abs(roots[j] - roots[i]) <= cluster_tol * scale) {
                sum += roots[j];
                ++count;
                taken[j] = true;
            }
        }
        clusters.push_back({sum / double(count), count});
    }

    double wscale = 0.0;
    for (const Complex& c : w) wscale = std::max(wscale, std::abs(c));
    for (auto [center, mult] : clusters) {
        double local = wscale * std::pow(std::max(1.0, std::abs(center)), double(poly_degree(w)));
        if (std::abs(poly_eval(w, center)) > 1e-6 * local)
            throw Error(Error::Code::RootFindingFailure,
                        "ramification_profile: root residual above tolerance");
        profile.push_back(RamificationPoint{SpherePoint::from_complex(center), mult + 1});
    }

    // Index at infinity: valuation at 0 of the wronskian of f(1/z).
    int n = f.degree();
    Poly wh = wronskian(reversed(f.num, n), reversed(f.den, n));
    double hscale = 0.0;
    for (const Complex& c : wh) hscale = std::max(hscale, std::abs(c));
    int valuation = 0;
    while (valuation < int(wh.size()) &&
           std::abs(wh[std::size_t(valuation)]) <= 1e-9 * std::max(1.0, hscale))
        ++valuation;
    if (valuation >= int(wh.size()))
        throw Error(Error::Code::InvalidMap, "degenerate conjugated map");
    if (valuation > 0)
        profile.push_back(RamificationPoint{SpherePoint::infinity(), valuation + 1});

    return profile;
}

bool rh_verify_profile(int d, const std::vector<RamificationPoint>& profile) {
    int sum = 0;
    for (const RamificationPoint& r : profile) sum += r.index - 1;
    return sum == 2 * (d - 1);
}

bool rh_verify(const RationalMap& f) {
    return rh_verify_profile(f.degree(), ramification_profile(f));
}

BranchValues branch_values(const RationalMap& f) {
    BranchValues out;
    for (const RamificationPoint& r : ramification_profile(f)) {
        SpherePoint v = r.point.is_infinity()
            ? f.eval_at_infinity()
            : moebius::SpherePoint(poly_eval(f.num, r.point.to_complex()),
                                   poly_eval(f.den, r.point.to_complex()));
        if (v.is_infinity())
            out.has_infinity = true;
        else
            out.finite.push_back(v.to_complex());
    }
    return out;
}

std::vector<Complex> LoopTrace::as_complex() const {
    std::vector<Complex> out;
    out.reserve(points.size());
    for (const SpherePoint& p : points) out.push_back(p.to_complex());
    return out;
}

LoopTrace circle_trace(Complex center, double r, int n_samples) {
    if (n_samples < 3)
        throw Error(Error::Code::InvalidMap, "circle_trace: need >= 3 samples");
    LoopTrace t;
    for (int k = 0; k < n_samples; ++k) {
        double a = 2.0 * M_PI * double(k) / double(n_samples);
        t.points.push_back(SpherePoint::from_complex(center + r * Complex(std::cos(a), std::sin(a))));
    }
    t.points.push_back(t.points.front()); // exact closure
    return t;
}

double closure_error(const LoopTrace& t) {
    if (t.points.size() < 2) return 0.0;
    return chordal(t.points.front(), t.points.back());
}

namespace {

std::vector<Complex> solve_fiber(const RationalMap& f, Complex w, int expected) {
    Poly shifted = poly_sub(f.num, poly_mul(Poly{w}, f.den));
    std::vector<Complex> roots = poly_roots(shifted);
    if (int(roots.size()) != expected)
        throw Error(Error::Code::RootFindingFailure,
                    "fiber degree dropped (loop too close to f(infinity))");
    return roots;
}

// Exact min-cost assignment by bitmask DP for d <= 8, greedy beyond.
std::vector<int> best_assignment(const std::vector<Complex>& from,
                                 const std::vector<Complex>& to) {
    const int d = int(from.size());
    std::vector<double> cost(std::size_t(d) * std::size_t(d));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            cost[std::size_t(i) * std::size_t(d) + std::size_t(j)] = chordal(from[std::size_t(i)], to[std::size_t(j)]);

    if (d <= 8) {
        const int full = 1 << d;
        std::vector<double> dp(std::size_t(full), 1e300);
        std::vector<int> choice(std::size_t(full), -1);
        dp[0] = 0.0;
        for (int mask = 0; mask < full; ++mask) {
            if (dp[std::size_t(mask)] >= 1e300) continue;
            int i = __builtin_popcount(unsigned(mask));
            if (i == d) continue;
            for (int j = 0; j < d; ++j) {
                if (mask & (1 << j)) continue;
                int next = mask | (1 << j);
                double c = dp[std::size_t(mask)] + cost[std::size_t(i) * std::size_t(d) + std::size_t(j)];
                if (c < dp[std::size_t(next)]) {
                    dp[std::size_t(next)] = c;
                    choice[std::size_t(next)] = j;
                }
            }
        }
        std::vector<int> perm(std::size_t(d), -1);
        int mask = full - 1;
        for (int i = d - 1; i >= 0; --i) {
            int j = choice[std::size_t(mask)];
            perm[std::size_t(i)] = j;
            mask &= ~(1 << j);
        }
        return perm;
    }

    std::vector<int> perm(std::size_t(d), -1);
    std::vector<bool> used(std::size_t(d), false);
    for (int i = 0; i < d; ++i) {
        int best = -1;
        for (int j = 0; j < d; ++j) {
            if (used[std::size_t(j)]) continue;
            if (best < 0 || cost[std::size_t(i) * std::size_t(d) + std::size_t(j)] <
                                cost[std::size_t(i) * std::size_t(d) + std::size_t(best)])
                best = j;
        }
        perm[std::size_t(i)] = best;
        used[std::size_t(best)] = true;
    }
    return perm;
}

double min_fiber_gap(const std::vector<Complex>& fiber) {
    double gap = 1e300;
    for (std::size_t i = 0; i < fiber.size(); ++i)
        for (std::size_t j = i + 1; j < fiber.size(); ++j)
            gap = std::min(gap, chordal(fiber[i], fiber[j]));
    return gap;
}

constexpr int kMaxRefineDepth = 24;

std::vector<int> match_fibers(const RationalMap& f, Complex wa,
                              const std::vector<Complex>& fa, Complex wb,
                              const std::vector<Complex>& fb, int expected, int depth) {
    std::vector<int> perm = best_assignment(fa, fb);
    double step_max = 0.0;
    for (std::size_t i = 0; i < fa.size(); ++i)
        step_max = std::max(step_max, chordal(fa[i], fb[std::size_t(perm[i])]));
    double gap = std::min(min_fiber_gap(fa), min_fiber_gap(fb));
    if (3.0 * step_max < gap || fa.size() <= 1) return perm;
    if (depth >= kMaxRefineDepth)
        throw Error(Error::Code::MatchingAmbiguous,
                    "MatchingAmbiguous: refinement depth exhausted");

    Complex wm = 0.5 * (wa + wb);
    std::vector<Complex> fm = solve_fiber(f, wm, expected);
    std::vector<int> p1 = match_fibers(f, wa, fa, wm, fm, expected, depth + 1);
    std::vector<int> p2 = match_fibers(f, wm, fm, wb, fb, expected, depth + 1);
    std::vector<int> out(fa.size());
    for (std::size_t i = 0; i < fa.size(); ++i) out[i] = p2[std::size_t(p1[i])];
    return out;
}

} // namespace

PreimageResult preimage_loop(const RationalMap& f, const LoopTrace& loop, core::Exec exec,
                             double margin) {
    if (loop.points.size() < 4)
        throw Error(Error::Code::InvalidMap, "preimage_loop: loop too short");
    if (closure_error(loop) > 1e-9)
        throw Error(Error::Code::InvalidMap, "preimage_loop: loop is not closed");

    std::vector<Complex> samples = loop.as_complex();
    const std::size_t m = samples.size() - 1; // last == first

    BranchValues branch = branch_values(f);
    std::vector<SpherePoint> unsafe;
    for (Complex v : branch.finite) unsafe.push_back(SpherePoint::from_complex(v));
    if (branch.has_infinity) unsafe.push_back(SpherePoint::infinity());
    unsafe.push_back(f.eval_at_infinity()); // fiber through infinity
    for (std::size_t s = 0; s < m; ++s) {
        SpherePoint w = SpherePoint::from_complex(samples[s]);
        for (const SpherePoint& v : unsafe)
            if (chordal(w, v) <= margin)
                throw Error(Error::Code::BranchValueTooClose, "BranchValueTooClose");
    }

    const int d = f.degree();
    std::vector<std::vector<Complex>> fibers(m);
    bool failed = false;
    const bool par = exec == core::Exec::parallel;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(|| : failed) if (par)
#endif
    for (std::ptrdiff_t s = 0; s < std::ptrdiff_t(m); ++s) {
        try {
            fibers[std::size_t(s)] = solve_fiber(f, samples[std::size_t(s)], d);
        } catch (const Error&) {
            failed = true;
        }
    }
    (void)par;
    if (failed)
        throw Error(Error::Code::RootFindingFailure, "fiber solving failed along the loop");

    // Canonical strand labels at the base sample.
    std::sort(fibers[0].begin(), fibers[0].end(), [](Complex a, Complex b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });

    PreimageResult result;
    std::vector<int> mono(static_cast<std::size_t>(d));
    std::iota(mono.begin(), mono.end(), 0);
    for (std::size_t s = 0; s < m; ++s) {
        const std::vector<Complex>& fa = fibers[s];
        const std::vector<Complex>& fb = fibers[(s + 1) % m];
        std::vector<int> perm =
            match_fibers(f, samples[s], fa, samples[s + 1], fb, d, 0);
        result.step_perms.push_back(perm);
        for (int& x : mono) x = perm[std::size_t(x)];
    }
    result.monodromy = mono;

    std::vector<bool> visited(std::size_t(d), false);
    for (int start = 0; start < d; ++start) {
        if (visited[std::size_t(start)]) continue;
        LoopTrace comp;
        int strand = start;
        do {
            visited[std::size_t(strand)] = true;
            int cur = strand;
            for (std::size_t s = 0; s < m; ++s) {
                comp.points.push_back(SpherePoint::from_complex(fibers[s][std::size_t(cur)]));
                cur = result.step_perms[s][std::size_t(cur)];
            }
            strand = cur;
        } while (strand != start);
        comp.points.push_back(comp.points.front()); // exact closure
        result.components.push_back(std::move(comp));
    }
    return result;
}

int winding_number(const LoopTrace& t, Complex around) {
    double total = 0.0;
    std::vector<Complex> pts = t.as_complex();
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        Complex a = pts[k] - around, b = pts[k + 1] - around;
        if (std::abs(a) <= 1e-12 || std::abs(b) <= 1e-12)
            throw Error(Error::Code::MarkedTooClose, "winding_number: point on the trace");
        total += std::arg(b / a);
    }
    double w = total / (2.0 * M_PI);
    double rounded = std::round(w);
    if (std::abs(w - rounded) > 0.1)
        throw Error(Error::Code::WindingAmbiguous,
                    "WindingAmbiguous: winding " + std::to_string(w));
    return int(rounded);
}

std::vector<LoopTrace> essential_part(const std::vector<LoopTrace>& components,
                                      const std::vector<SpherePoint>& marked,
                                      double margin) {
    std::vector<LoopTrace> kept;
    for (const LoopTrace& comp : components) {
        int inside = 0, outside = 0;
        for (const SpherePoint& mp : marked) {
            if (mp.is_infinity()) {
                ++outside; // the unbounded side has winding 0
                continue;
            }
            Complex a = mp.to_complex();
            for (const SpherePoint& p : comp.points)
                if (chordal(p, mp) <= margin)
                    throw Error(Error::Code::MarkedTooClose,
                                "essential_part: marked point too close to a component");
            (winding_number(comp, a) != 0 ? inside : outside) += 1;
        }
        if (inside > 0 && outside > 0) kept.push_back(comp);
    }
    return kept;
}

} // namespace brancov
