#include <cstdio>

#include "hfgi/verify.hpp"

/// One line per property, exit status 0 only when all of them pass.
int main() {
    int failed = 0;
    hfgi::verify_all(hfgi::Thresholds{}, [&](const hfgi::CheckResult &r) {
        std::printf("criterion %d: %s  %s  [%s]\n", r.id, r.pass() ? "PASS" : "FAIL", r.title.c_str(), r.summary().c_str());
        for (const hfgi::CheckItem &it : r.items)
            std::printf("    %-4s %s: %s\n", it.pass ? "ok" : "FAIL", it.name.c_str(), it.detail.c_str());
        std::fflush(stdout);
        if (!r.pass()) ++failed;
    });
    return failed == 0 ? 0 : 1;
}
