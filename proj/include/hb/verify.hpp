#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace hb {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::vector<std::pair<std::string, double>> metrics;
    std::string note;
};

struct VerifyOptions {
    std::uint64_t seed = 7;
    // Fewer paths and coarser Hofer grids; used by the command-line self check.
    bool quick = false;
};

CriterionResult check_disc_closed_form(const VerifyOptions& o);
CriterionResult check_symplecticity(const VerifyOptions& o);
CriterionResult check_comparison_certificates(const VerifyOptions& o);
CriterionResult check_hamiltonian(const VerifyOptions& o);
CriterionResult check_distance_brackets(const VerifyOptions& o);
CriterionResult check_smoothing(const VerifyOptions& o);
CriterionResult check_functional_bound(const VerifyOptions& o);
CriterionResult check_orbit_oracles(const VerifyOptions& o);
CriterionResult check_persistence(const VerifyOptions& o);
CriterionResult check_reconstruction(const VerifyOptions& o);

/// Criteria 1-10 in order.
std::vector<CriterionResult> verify_all(const VerifyOptions& o);

}  // namespace hb
