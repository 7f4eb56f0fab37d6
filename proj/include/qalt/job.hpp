#pragma once

#include "qalt/lambda.hpp"

#include <cstdint>
#include <string>

namespace qalt {

struct JobParams {
    size_t d = 2;
    size_t truncation = 4;
    size_t samples = 25;
    uint64_t seed = 7;
    bool emit_gram = false;
    size_t cap = TensorPower::kDefaultCap;
};

// A parsed batch job: the algebra, diagonal forms over it, the command and
// its parameters. The input document is JSON; see the README for the schema
// and golden examples.
struct JobSpec {
    AlgebraPtr algebra;
    std::vector<std::vector<Vec>> forms;  // diagonal entries, algebra coordinates
    std::string command;
    JobParams params;
};

JobSpec parse_job(const std::string& text);

struct JobResult {
    std::string text;    // human-readable report
    std::string json;    // machine-readable document
    int exit_code = 0;   // 0 pass, 1 check failure, 2 input error, 3 resource cap
};

JobResult run_job(const JobSpec& spec);

// symmetric invertible diagonal entries for the axiom harness over (A, sigma)
std::vector<Vec> symmetric_entry_pool(const AlgebraPtr& a, size_t limit = 4);

}  // namespace qalt
