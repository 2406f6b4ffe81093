// Compares the serial reference kernels against their OpenMP twins and
// verifies the outputs are identical.

#include "brancov/brancov.hpp"
#include "brancov/mapexpr.hpp"
#include "schottky/schottky.hpp"

#include <chrono>
#include <cstdio>
#include <functional>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

double time_ms(const std::function<void()>& fn, int reps) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        auto t0 = std::chrono::steady_clock::now();
        fn();
        auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

void row(const char* name, double serial_ms, double parallel_ms, bool identical) {
    std::printf("%-34s %10.2f %12.2f %9.2fx %10s\n", name, serial_ms, parallel_ms,
                serial_ms / parallel_ms, identical ? "yes" : "NO");
}

// Nearly tangent circles keep the per-level contraction mild, so deep trees
// stay well above the double-precision floor.
schottky::SchottkyGroup rank2_group() {
    using moebius::Circle;
    return schottky::build({{Circle{{-3.45, 0.0}, 1.0}, Circle{{-1.15, 0.0}, 1.0}},
                            {Circle{{1.15, 0.0}, 1.0}, Circle{{3.45, 0.0}, 1.0}}},
                           true);
}

} // namespace

int main(int argc, char** argv) {
    int depth = 11;
    int max_len = 10;
    int samples = 4096;
    if (argc > 1) depth = std::atoi(argv[1]);
    if (argc > 2) max_len = std::atoi(argv[2]);
    if (argc > 3) samples = std::atoi(argv[3]);

#ifdef _OPENMP
    std::printf("openmp threads: %d\n", omp_get_max_threads());
#else
    std::printf("openmp: not enabled (serial twin only)\n");
#endif
    std::printf("%-34s %10s %12s %9s %10s\n", "kernel", "serial_ms", "parallel_ms", "speedup",
                "identical");

    schottky::SchottkyGroup group = rank2_group();
    const std::size_t cap = 200'000'000;

    {
        schottky::LimitSetResult s, p;
        double ts = time_ms([&] { s = schottky::limit_set_approx(group, depth,
                                                                 core::Exec::serial, cap); }, 3);
        double tp = time_ms([&] { p = schottky::limit_set_approx(group, depth,
                                                                 core::Exec::parallel, cap); }, 3);
        bool same = s.tree.nodes.size() == p.tree.nodes.size();
        for (std::size_t i = 0; same && i < s.tree.nodes.size(); ++i)
            same = s.tree.nodes[i].disk.center == p.tree.nodes[i].disk.center &&
                   s.tree.nodes[i].disk.radius == p.tree.nodes[i].disk.radius;
        char name[64];
        std::snprintf(name, sizeof name, "limit-set disks (depth %d)", depth);
        row(name, ts, tp, same);
    }

    {
        schottky::LoxodromicReport s, p;
        double ts = time_ms([&] { s = schottky::all_loxodromic_check(group, max_len,
                                                                     core::Exec::serial, cap); }, 3);
        double tp = time_ms([&] { p = schottky::all_loxodromic_check(group, max_len,
                                                                     core::Exec::parallel, cap); }, 3);
        bool same = s.words_checked == p.words_checked &&
                    s.violations.size() == p.violations.size() &&
                    s.min_dist_tr2 == p.min_dist_tr2;
        char name[64];
        std::snprintf(name, sizeof name, "loxodromic sweep (len %d)", max_len);
        row(name, ts, tp, same);
    }

    {
        brancov::RationalMap f = brancov::parse_map("z^6 + z");
        brancov::LoopTrace loop = brancov::circle_trace({0.0, 0.0}, 5.0, samples);
        brancov::PreimageResult s, p;
        double ts = time_ms([&] { s = brancov::preimage_loop(f, loop, core::Exec::serial); }, 3);
        double tp = time_ms([&] { p = brancov::preimage_loop(f, loop, core::Exec::parallel); }, 3);
        bool same = s.components.size() == p.components.size() && s.monodromy == p.monodromy;
        for (std::size_t c = 0; same && c < s.components.size(); ++c) {
            same = s.components[c].points.size() == p.components[c].points.size();
            for (std::size_t i = 0; same && i < s.components[c].points.size(); ++i)
                same = s.components[c].points[i].z1 == p.components[c].points[i].z1;
        }
        char name[64];
        std::snprintf(name, sizeof name, "preimage fibers (deg 6, n %d)", samples);
        row(name, ts, tp, same);
    }
    return 0;
}
