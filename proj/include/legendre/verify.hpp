#pragma once

// Verification sweeps over sampled lambda and xi. Every sweep is split into
// per-lambda tasks run on a thread pool; results are merged in task order so
// a fixed seed gives identical reports for any thread count.

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "legendre/periods.hpp"

namespace legendre {

struct RunConfig {
    double tol = 1e-11;
    std::uint64_t seed = 1;
    long long samples = 0; // 0: suite default
    int threads = 0;       // 0: LEGENDRE_THREADS or hardware concurrency
};
int resolve_threads(int requested);

using FieldValue = std::variant<double, long long, std::string>;
using Fields = std::vector<std::pair<std::string, FieldValue>>;

enum class Compare { le, ge };

struct CheckRecord {
    std::string check;
    Fields inputs;
    double value = 0.0;
    double bound = 0.0;
    Compare cmp = Compare::le;
    double slack = 0.0; // bound - value for le, value - bound for ge
    bool pass = false;
    std::string error; // errc name when the engine failed on this input
};

struct VerificationReport {
    std::string suite;
    std::vector<CheckRecord> records;
    double max_value = 0.0; // max over le-records of value
    double min_slack = 0.0;
    long long failures = 0;
    long long numerical_failures = 0;
    long long first_failure = -1;
    double wall_seconds = 0.0;
    bool pass = false;
};

const std::vector<std::string> &suite_names();
VerificationReport run_suite(const std::string &suite, const RunConfig &cfg);

// Deterministic lambda in F with log10 |lambda| uniform in [log_min, 0].
cplx sample_lambda_F(std::uint64_t key, double log_min = -6.0);
// The sweep's lambda list: a fixed log-spaced spine down to 1e-6 plus random draws.
std::vector<cplx> sweep_lambdas(std::uint64_t seed, int count);

} // namespace legendre
