#pragma once

#include <cstdint>

namespace dvqls {

// Per-iteration metrics of one run.
struct RunRecord {
    long iteration = 0;
    double residual = 0.0;
    double consensus_error = 0.0;
    double param_consensus_error = 0.0;
    double wall_time_s = 0.0;
    std::uint64_t seed = 0;
};

} // namespace dvqls
