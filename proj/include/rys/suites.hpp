#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rys/model.hpp"

namespace rys {

// Named verification suites shared by the command-line tool and the acceptance run.
struct CheckResult {
    std::string suite;
    std::string name;
    bool pass = false;
    std::string detail;
};

struct SuiteOptions {
    std::uint64_t seed = 1;
    int threads = 1;
    long samples = 10000;          // charge / sampler suites
    long hciz_samples = 1000000;
    int max_size = 8;              // |lambda| bound for the exhaustive suites
    std::vector<std::string> model_paths;   // overrides the built-in model list where a suite takes models
    std::string cases_path;        // optional case file (coset-schur, hciz)
};

std::vector<std::string> suite_names();   // commutation coset-schur l212 charge hciz bands sampler
std::vector<CheckResult> run_suite(const std::string& name, const SuiteOptions& opt);

// The five small sampler models (mirrors fixtures/sampler_*.json).
std::vector<std::pair<std::string, RailYardModel>> reference_models();

// Chi-square of sampled chains against exact chain probabilities from enumeration.
struct ChiSquareResult {
    double statistic = 0;
    int dof = 0;
    double pvalue = 0;
    double unlisted_mass = 0;   // probability outside the enumerated chains
};
ChiSquareResult sampler_chi_square(const RailYardModel& model, long draws, std::uint64_t seed, int threads = 1,
                                   int cap = 8);

}  // namespace rys
