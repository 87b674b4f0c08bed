#pragma once

#include <string>
#include <vector>

namespace gribov {

struct InvariantCheck {
    std::string module;
    std::string name;
    bool passed = false;
    double measured = 0.0;   // worst observed value of the checked quantity
    double threshold = 0.0;  // the bound it is held to
    std::string detail;
};

// Every module invariant at desk scale, in a fixed order. Never throws; a module error
// inside a check marks that check failed with the error text as detail.
std::vector<InvariantCheck> run_invariant_suite();

} // namespace gribov
