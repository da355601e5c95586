#pragma once

#include <cstddef>

namespace sqz {

// Execution policy for the data-parallel kernels (scan grids, trace
// sampling, Wigner evaluation). `serial` is the plain-loop reference
// implementation; `parallel` runs the same body under OpenMP. Results
// are bitwise identical between the two because every loop iteration
// is independent and owns its RNG stream.
enum class Exec { serial, parallel };

template <class F>
void parallel_for(std::size_t n, Exec exec, F&& body) {
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
        for (long long i = 0; i < static_cast<long long>(n); ++i) {
            body(static_cast<std::size_t>(i));
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            body(i);
        }
    }
}

}  // namespace sqz
