#pragma once

#include <exception>

#include "smr/common.hpp"

namespace smr {

/// Runs fn(i) for i in [0, count), on OpenMP threads when exec is Parallel.
/// Callers write results into per-index slots so the outcome does not
/// depend on scheduling. The first exception thrown is rethrown afterwards.
template <class Fn>
void parallel_for(Index count, Execution exec, Fn&& fn) {
    std::exception_ptr error;
#pragma omp parallel for schedule(dynamic) if (exec == Execution::Parallel)
    for (Index i = 0; i < count; ++i) {
        try {
            fn(i);
        } catch (...) {
#pragma omp critical(smr_parallel_for_error)
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);
}

}  // namespace smr
