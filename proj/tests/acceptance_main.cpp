// Runs the nine acceptance criteria; exit status 1 if any fails.

#include <iostream>

#include "heatchain/verification.hpp"

int main() {
    const auto results = heatchain::run_acceptance();
    int failed = 0;
    for (const auto& r : results) {
        std::cout << heatchain::format_result_line(r) << '\n';
        for (const auto& [name, value] : r.extra) std::cout << "        " << name << " = " << value << '\n';
        if (!r.passed) ++failed;
    }
    std::cout << (results.size() - failed) << "/" << results.size() << " criteria passed\n";
    return failed ? 1 : 0;
}
