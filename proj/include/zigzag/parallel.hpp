#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

namespace zigzag {

// Runs body(i) for i in [0, n). With parallel set the loop is an OpenMP loop;
// the first exception thrown by any iteration is rethrown on the caller.
template <class Body>
void for_each_index(std::size_t n, bool parallel, Body&& body)
{
    if (!parallel) {
        for (std::size_t i = 0; i < n; ++i)
            body(i);
        return;
    }
    std::exception_ptr err;
    std::mutex mu;
    const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < count; ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
            std::lock_guard lock(mu);
            if (!err)
                err = std::current_exception();
        }
    }
    if (err)
        std::rethrow_exception(err);
}

} // namespace zigzag
