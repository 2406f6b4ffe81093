#pragma once

#include "core/exec.hpp"
#include "moebius/moebius.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace brancov {

using moebius::Complex;
using moebius::SpherePoint;

class Error : public std::runtime_error {
public:
    enum class Code {
        InvalidMap,
        NotCoprime,
        RootFindingFailure,
        BranchValueTooClose,
        MatchingAmbiguous,
        WindingAmbiguous,
        MarkedTooClose,
    };

    Error(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Code code() const { return code_; }

private:
    Code code_;
};

// Coefficients ascending: poly[k] multiplies z^k.
using Poly = std::vector<Complex>;

Poly poly_trim(Poly p, double tol = 1e-12);
Poly poly_add(const Poly& a, const Poly& b);
Poly poly_sub(const Poly& a, const Poly& b);
Poly poly_mul(const Poly& a, const Poly& b);
Poly poly_derivative(const Poly& p);
Complex poly_eval(const Poly& p, Complex z);
int poly_degree(const Poly& p); // -1 for the zero polynomial

// All roots via the balanced companion-matrix eigenvalue solver.
std::vector<Complex> poly_roots(const Poly& p);

struct RationalMap {
    Poly num;
    Poly den;

    int degree() const;
    Complex eval(Complex z) const;
    // f(infinity) on the sphere.
    SpherePoint eval_at_infinity() const;
};

// Trims, scales and verifies coprimality (Sylvester resultant magnitude).
RationalMap make_rational_map(Poly num, Poly den, double tol = 1e-9);

// phi(z) = (z - p')^d + p'.
RationalMap structure_extension_map(Complex p_prime, int d);

struct RamificationPoint {
    SpherePoint point;
    int index; // ramification index d_i >= 2
};

// Roots of p'q - pq' clustered into multiplicities, infinity handled through
// the conjugated map 1/f(1/z).
std::vector<RamificationPoint> ramification_profile(const RationalMap& f,
                                                    double cluster_tol = 1e-5);

// 2(d-1) == sum(index - 1), exact integers.
bool rh_verify_profile(int d, const std::vector<RamificationPoint>& profile);
bool rh_verify(const RationalMap& f);

// Branch values f(c) over the ramification points (finite ones as complex
// numbers; an infinite branch value is reported through has_infinity).
struct BranchValues {
    std::vector<Complex> finite;
    bool has_infinity = false;
};
BranchValues branch_values(const RationalMap& f);

struct LoopTrace {
    std::vector<SpherePoint> points; // closed: first ~ last
    std::vector<Complex> as_complex() const;
};

// Circle |w - center| = r sampled counterclockwise with n+1 points (closed).
LoopTrace circle_trace(Complex center, double r, int n_samples);

double closure_error(const LoopTrace& t); // chordal gap between first and last

struct PreimageResult {
    std::vector<LoopTrace> components; // each closed, one per monodromy cycle
    std::vector<int> monodromy;        // end-to-start permutation of the fiber
    // Per-step fiber matchings (step_perm[s][i] = strand at sample s+1 that
    // continues strand i), kept for cross-checking the monodromy.
    std::vector<std::vector<int>> step_perms;
};

// Tracks the full fiber f^{-1}(w) along the loop. Sample-wise root solving
// follows the execution policy; matching is sequential with bisection
// refinement wherever the minimal fiber gap drops under 3x the step.
PreimageResult preimage_loop(const RationalMap& f, const LoopTrace& loop,
                             core::Exec exec = core::Exec::parallel,
                             double margin = 1e-6);

// Winding number of the closed trace around a finite point, by discrete
// argument summation; throws WindingAmbiguous beyond 0.1 from an integer.
int winding_number(const LoopTrace& t, Complex around);

// Keeps a component iff the marked points split into a nonempty inside
// (winding != 0) and nonempty outside (winding 0; infinity always outside).
std::vector<LoopTrace> essential_part(const std::vector<LoopTrace>& components,
                                      const std::vector<SpherePoint>& marked,
                                      double margin = 1e-6);

} // namespace brancov
