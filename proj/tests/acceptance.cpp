// Acceptance gate: one pass/fail line per criterion, wall-clock budgets
// included. Exits nonzero when any criterion fails.
#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "ct/verification.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

int main() {
    using ct::CriterionResult;
    struct Gate {
        CriterionResult (*run)();
        double budget_s;
    };
    const Gate gates[] = {
        {ct::criterion_closed_form_criticality, 10.0},
        {ct::criterion_oracle_equivalence, 30.0},
        {ct::criterion_gamma32_reproduction, 60.0},
        {ct::criterion_vertical_torus_identity, 60.0},
        {ct::criterion_minimal_torus, 60.0},
        {ct::criterion_weingarten_table, 60.0},
        {ct::criterion_energy_round_trip, 90.0},
        {ct::criterion_bcv_identities, 10.0},
    };

    bool all_pass = true;
    int index = 0;
    std::vector<std::string> details;
    const Clock::time_point suite_start = Clock::now();
    for (const Gate& gate : gates) {
        ++index;
        const Clock::time_point t0 = Clock::now();
        CriterionResult res;
        try {
            res = gate.run();
        } catch (const std::exception& ex) {
            res.pass = false;
            res.name = "criterion threw";
            res.detail = ex.what();
        }
        const double elapsed = seconds_since(t0);
        const bool in_budget = elapsed <= gate.budget_s;
        const bool ok = res.pass && in_budget;
        all_pass = all_pass && ok;
        details.push_back(res.detail);
        std::printf("criterion %d (%s): %s [%s; %.1fs of %.0fs budget]\n", index,
                    res.name.c_str(), ok ? "PASS" : "FAIL", res.detail.c_str(), elapsed,
                    gate.budget_s);
        std::fflush(stdout);
    }

    // criterion 9: the suite is deterministic and finishes within five
    // minutes; re-running a sample of criteria must reproduce their reports
    // byte for byte
    const double total = seconds_since(suite_start);
    const bool repeat_ok = ct::criterion_closed_form_criticality().detail == details[0] &&
                           ct::criterion_bcv_identities().detail == details[7];
    const bool nine = all_pass && repeat_ok && total <= 300.0;
    std::printf("criterion 9 (full suite determinism): %s [all_pass=%s, byte_identical=%s, "
                "%.1fs of 300s budget]\n",
                nine ? "PASS" : "FAIL", all_pass ? "yes" : "no", repeat_ok ? "yes" : "no", total);
    return (all_pass && nine) ? 0 : 1;
}
