// Benchmark: serial reference trial runner vs the OpenMP engine, plus raw
// kernel throughput. The two runners must produce bitwise-identical samples;
// the benchmark re-checks that while timing.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "lpplab/montecarlo.hpp"
#include "lpplab/passage.hpp"

using namespace lpplab;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<StatSample> timed_run(const CampaignSpec& spec, double& elapsed) {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<StatSample> samples(static_cast<std::size_t>(spec.trials));
    if (spec.workers == 1) {
        run_indexed_serial(spec.trials, [&](std::int64_t i) {
            const WeightField f = derive_trial_field(spec.master_seed,
                                                     static_cast<std::uint64_t>(i));
            samples[static_cast<std::size_t>(i)] = eval_statistic(f, spec.stat, spec.n);
        });
    } else {
        run_indexed_parallel(spec.trials, spec.workers, [&](std::int64_t i) {
            const WeightField f = derive_trial_field(spec.master_seed,
                                                     static_cast<std::uint64_t>(i));
            samples[static_cast<std::size_t>(i)] = eval_statistic(f, spec.stat, spec.n);
        });
    }
    elapsed = seconds_since(t0);
    return samples;
}

}  // namespace

int main(int argc, char** argv) {
    std::int64_t n = 512;
    std::int64_t trials = 64;
    if (argc > 1) n = std::stoll(argv[1]);
    if (argc > 2) trials = std::stoll(argv[2]);

    std::printf("== kernel throughput ==\n");
    {
        const WeightField field = derive_trial_field(9, 0);
        const auto t0 = std::chrono::steady_clock::now();
        const double t = last_passage_time(field, Point{0, 0}, Point{n, n});
        const double dt = seconds_since(t0);
        const double cells = static_cast<double>((n + 1) * (n + 1));
        std::printf("passage time DP      n=%lld  %8.3f ms  %6.1f Mcells/s  (T=%.3f)\n",
                    static_cast<long long>(n), dt * 1e3, cells / dt / 1e6, t);
    }
    {
        const WeightField field = derive_trial_field(9, 0);
        const auto t0 = std::chrono::steady_clock::now();
        const GeodesicPath g = geodesic(field, Point{0, 0}, Point{n, n});
        const double dt = seconds_since(t0);
        std::printf("geodesic (midline)   n=%lld  %8.3f ms  path len %zu\n",
                    static_cast<long long>(n), dt * 1e3, g.vertices.size());
    }

    std::printf("\n== trial engine: serial reference vs OpenMP ==\n");
    CampaignSpec spec;
    spec.kind = CampaignSpec::Kind::TailCurve;
    spec.stat = {StatKind::TfGlobal, 0, 0};
    spec.n = n;
    spec.trials = trials;
    spec.master_seed = 9;
    spec.t_grid = {1.0};

    double serial_s = 0.0;
    spec.workers = 1;
    const auto serial = timed_run(spec, serial_s);
    std::printf("serial               %3d worker   %8.3f s  %7.2f trials/s\n", 1, serial_s,
                static_cast<double>(trials) / serial_s);

    for (int workers : {2, 4, omp_get_max_threads()}) {
        if (workers <= 1) continue;
        double par_s = 0.0;
        spec.workers = workers;
        const auto parallel = timed_run(spec, par_s);
        bool identical = parallel.size() == serial.size();
        for (std::size_t i = 0; identical && i < serial.size(); ++i) {
            identical = serial[i].normalized == parallel[i].normalized &&
                        serial[i].raw == parallel[i].raw;
        }
        std::printf("openmp               %3d workers  %8.3f s  %7.2f trials/s  speedup %.2fx  %s\n",
                    workers, par_s, static_cast<double>(trials) / par_s, serial_s / par_s,
                    identical ? "bitwise-identical" : "MISMATCH");
        if (!identical) return 1;
    }
    return 0;
}
