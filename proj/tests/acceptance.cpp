// Acceptance suite: runs each release criterion and prints one line per
// criterion. Exit status is the number of failed criteria.
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "acceptance_criteria.hpp"

int main() {
    using Clock = std::chrono::steady_clock;
    int failures = 0;
    for (const auto& c : meshcsg_acceptance::criteria()) {
        auto t0 = Clock::now();
        bool ok = false;
        std::string detail;
        try {
            ok = c.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        double secs = std::chrono::duration<double>(Clock::now() - t0).count();
        std::printf("[%s] %2d. %-58s (%.1fs)%s%s\n", ok ? "PASS" : "FAIL", c.id,
                    c.name, secs, detail.empty() ? "" : " - ", detail.c_str());
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    return failures;
}
