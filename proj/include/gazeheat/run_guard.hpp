#pragma once

#include <atomic>

#include "gazeheat/error.hpp"

namespace gazeheat {

// Process-wide exclusion between sweeps and benchmarks: any number of sweeps
// may run together, a benchmark only runs alone.
class RunGuard {
public:
    enum class Kind { Sweep, Bench };

    explicit RunGuard(Kind kind) : kind_(kind) {
        int expected = 0;
        if (kind_ == Kind::Bench) {
            if (!state().compare_exchange_strong(expected, -1)) {
                fail_usage("benchmark refused: another sweep or benchmark is running");
            }
        } else {
            expected = state().load();
            do {
                if (expected < 0) fail_usage("sweep refused: a benchmark is running");
            } while (!state().compare_exchange_weak(expected, expected + 1));
        }
    }
    ~RunGuard() {
        if (kind_ == Kind::Bench) {
            state().store(0);
        } else {
            state().fetch_sub(1);
        }
    }
    RunGuard(const RunGuard&) = delete;
    RunGuard& operator=(const RunGuard&) = delete;

private:
    static std::atomic<int>& state() {
        static std::atomic<int> s{0};
        return s;
    }
    Kind kind_;
};

}  // namespace gazeheat
