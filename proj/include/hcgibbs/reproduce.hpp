#pragma once

#include <string>
#include <vector>

namespace hcgibbs {

/// One checked quantity: PASS iff |got - expected| <= tol. Informational rows never fail.
struct CheckRow {
    std::string name;
    double expected;
    double got;
    double tol;
    bool informational = false;

    bool pass() const;
};

struct ExampleReport {
    int example;
    std::string title;
    std::vector<CheckRow> rows;

    bool pass() const;
};

/// Runs the full pipeline (sums, roots, laws, kernels, stationary vectors) for worked
/// example 1..5. Throws DomainError for other numbers.
ExampleReport reproduce_example(int example);

}  // namespace hcgibbs
