#pragma once

#include <string>
#include <vector>

namespace ct {

struct CriterionResult {
    std::string name;
    bool pass = false;
    std::string detail;  // deterministic, used for byte-identity checks
};

CriterionResult criterion_closed_form_criticality();  // 1
CriterionResult criterion_oracle_equivalence();       // 2
CriterionResult criterion_gamma32_reproduction();     // 3
CriterionResult criterion_vertical_torus_identity();  // 4
CriterionResult criterion_minimal_torus();            // 5
CriterionResult criterion_weingarten_table();         // 6
CriterionResult criterion_energy_round_trip();        // 7
CriterionResult criterion_bcv_identities();           // 8

// criteria 1-8 in order
std::vector<CriterionResult> run_all_criteria();

}  // namespace ct
