// Acceptance run: one line per criterion, non-zero exit if any fails.
#include "zigzag/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

int main(int argc, char** argv)
{
    std::vector<std::string> only(argv + 1, argv + argc);
    zigzag::VerifyOptions opt;
    bool ok = true;
    for (const auto& c : zigzag::acceptance_checks()) {
        if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end())
            continue;
        const auto t0 = std::chrono::steady_clock::now();
        const auto r = c.run(opt);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s [%.1fs]\n", zigzag::format_check_line(r).c_str(), secs);
        std::fflush(stdout);
        ok = ok && r.pass;
    }
    return ok ? 0 : 1;
}
