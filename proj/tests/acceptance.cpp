// One line per acceptance criterion; exit status 1 if any fails.
#include <iostream>
#include <map>

#include "msegcalc/verify.hpp"

using namespace msegcalc;

int main() {
    std::map<int, CheckResult> by_criterion;
    std::map<int, std::string> details;
    for (const auto& s : suites()) {
        CheckResult r = s.run();
        CheckResult& acc = by_criterion[s.criterion];
        acc.checked += r.checked;
        acc.failed += r.failed;
        acc.pass = acc.pass && r.pass;
        for (const auto& f : r.failures) acc.failures.push_back(s.name + ": " + f);
        std::string& d = details[s.criterion];
        d += (d.empty() ? "" : "; ") + s.name + " " + std::to_string(r.checked - r.failed) + "/" +
             std::to_string(r.checked) + ", " + r.detail;
    }
    bool ok = true;
    for (const auto& [n, r] : by_criterion) {
        ok = ok && r.pass;
        std::cout << "criterion " << n << ": " << (r.pass ? "PASS" : "FAIL") << ": " << details[n] << "\n";
        for (const auto& f : r.failures) std::cout << "    " << f << "\n";
    }
    return ok ? 0 : 1;
}
