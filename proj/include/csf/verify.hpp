#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace csf::verify {

/// One measured check. `relation` and `tolerance` describe the pass rule in
/// words for the report line, e.g. "<" and "5e-3".
struct Check {
    std::string name;
    bool passed = false;
    double measured = 0.0;
    std::string relation;
    double tolerance = 0.0;
    std::string note;
};

struct Options {
    std::uint64_t seed = 0;  // offset added to fixture seeds
};

const std::vector<std::string>& suite_names();

/// Throws std::invalid_argument for an unknown suite.
std::vector<Check> run_suite(const std::string& suite, const Options& options = {});

// Individual suites.
std::vector<Check> frenet_suite(const Options& options);
std::vector<Check> convexity_suite(const Options& options);
std::vector<Check> projection_suite(const Options& options);
std::vector<Check> lemma2_suite(const Options& options);
std::vector<Check> lemma3_suite(const Options& options);
std::vector<Check> lemma4_suite(const Options& options);
std::vector<Check> schur_suite(const Options& options);
std::vector<Check> avoidance_suite(const Options& options);
std::vector<Check> sphericity_suite(const Options& options);
std::vector<Check> family_suite(const Options& options);

/// "[PASS] name: measured 1.23e-04 (< 5e-03) note"
std::string format(const Check& check);

/// Prints every check, returns true iff all passed.
bool report(const std::vector<Check>& checks, std::ostream& out);

}  // namespace csf::verify
