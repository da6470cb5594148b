// Runs the full acceptance suite and prints one line per criterion.
// Exit status is nonzero iff any criterion fails.

#include "abwave/verify.hpp"

#include <chrono>
#include <cstdio>

int main() {
    using clock = std::chrono::steady_clock;
    int failed = 0;
    for (int id : abwave::suite_criteria(abwave::Suite::full)) {
        const auto t0 = clock::now();
        const auto r = abwave::run_criterion(id);
        const double secs = std::chrono::duration<double>(clock::now() - t0).count();
        std::printf("criterion %2d: %s  measured %.4g  tolerance %.4g  (%.1f s)  %s\n", r.criterion_id,
                    r.pass ? "PASS" : "FAIL", r.measured, r.tolerance, secs, r.description.c_str());
        if (!r.detail.empty()) std::printf("              %s\n", r.detail.c_str());
        std::fflush(stdout);
        if (!r.pass) ++failed;
    }
    std::printf("%d criteria failed\n", failed);
    return failed == 0 ? 0 : 1;
}
