#include <chrono>
#include <cstdio>
#include <random>

#include "cmssc/kernels.hpp"

// Times the serial reference kernels against their OpenMP counterparts.
// Run with e.g.:  bench_kernels 256 5

namespace {

using cmssc::Matrix;

double time_ms(const std::function<void()>& fn, int reps) {
    auto t0 = std::chrono::steady_clock::now();
    for (int r = 0; r < reps; ++r) fn();
    auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

Matrix random_matrix(int rows, int cols, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = g(rng);
    return m;
}

}  // namespace

int main(int argc, char** argv) {
    int n = argc > 1 ? std::atoi(argv[1]) : 256;
    int reps = argc > 2 ? std::atoi(argv[2]) : 5;
    std::mt19937_64 rng(7);

    Matrix points = random_matrix(n, 16, rng);
    Matrix sym = random_matrix(n, n, rng);
    sym = 0.5 * (sym + sym.transpose()).eval();

    std::printf("kernel                %10s %10s %8s\n", "serial ms", "omp ms", "speedup");

    double t_serial = time_ms([&] { cmssc::kernels::gram_serial(points); }, reps);
    double t_omp = time_ms([&] { cmssc::kernels::gram_omp(points); }, reps);
    std::printf("gram                  %10.2f %10.2f %8.2fx\n", t_serial, t_omp, t_serial / t_omp);

    t_serial = time_ms([&] { cmssc::kernels::pairwise_sq_dists_serial(points); }, reps);
    t_omp = time_ms([&] { cmssc::kernels::pairwise_sq_dists_omp(points); }, reps);
    std::printf("pairwise_sq_dists     %10.2f %10.2f %8.2fx\n", t_serial, t_omp, t_serial / t_omp);

    t_serial = time_ms([&] { cmssc::kernels::psd_project_serial(sym); }, reps);
    t_omp = time_ms([&] { cmssc::kernels::psd_project_omp(sym); }, reps);
    std::printf("psd_project           %10.2f %10.2f %8.2fx\n", t_serial, t_omp, t_serial / t_omp);

    return 0;
}
