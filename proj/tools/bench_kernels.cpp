#include "qalt/echelon.hpp"
#include "qalt/module.hpp"

#include <omp.h>

#include <chrono>
#include <iostream>
#include <random>

using namespace qalt;

namespace {

Mat random_matrix(std::mt19937_64& rng, size_t r, size_t c) {
    Mat m(r, c);
    for (size_t i = 0; i < r; ++i)
        for (size_t j = 0; j < c; ++j) m.at(i, j) = q((long)(rng() % 19) - 9, (long)(rng() % 4) + 1);
    return m;
}

template <class F>
double time_of(F&& f) {
    auto start = std::chrono::steady_clock::now();
    f();
    std::chrono::duration<double> d = std::chrono::steady_clock::now() - start;
    return d.count();
}

}  // namespace

int main(int argc, char** argv) {
    size_t n = argc > 1 ? (size_t)atol(argv[1]) : 96;
    std::mt19937_64 rng(1234);
    std::cout << "exact rational kernels, n = " << n << ", threads = " << omp_get_max_threads()
              << "\n";

    Mat a = random_matrix(rng, n, n), b = random_matrix(rng, n, n);
    Mat serial, parallel;
    double ts = time_of([&] { serial = ref::mul(a, b); });
    double tp = time_of([&] { parallel = a * b; });
    std::cout << "matmul    serial " << ts << " s, parallel " << tp << " s, speedup " << ts / tp
              << (serial == parallel ? "  (equal)" : "  (MISMATCH)") << "\n";

    Mat ks, kp;
    ts = time_of([&] { ks = ref::kron(a, b); });
    tp = time_of([&] { kp = kron(a, b); });
    std::cout << "kron      serial " << ts << " s, parallel " << tp << " s, speedup " << ts / tp
              << (ks == kp ? "  (equal)" : "  (MISMATCH)") << "\n";

    size_t rs = 0, rp = 0;
    ts = time_of([&] { rs = ref::rank(a); });
    tp = time_of([&] { rp = rank(a); });
    std::cout << "rank      serial " << ts << " s, parallel " << tp << " s, speedup " << ts / tp
              << (rs == rp ? "  (equal)" : "  (MISMATCH)") << "\n";

    // an antisymmetrizer image at tensor-power scale
    auto H = make_quaternion(q(-1), q(-1));
    FreeModule v(H, 2);
    double talt = time_of([&] {
        AltPower alt = alt_module(v, 3);
        std::cout << "alt^3 dim " << alt.kdim() << ", ";
    });
    std::cout << "alt_module(rank 2, d=3) " << talt << " s\n";
    return 0;
}
