#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace pwc {

namespace detail {
inline std::atomic<int>& thread_cap_storage() {
    static std::atomic<int> cap{0};  // 0 = uninitialized
    return cap;
}
}  // namespace detail

/// Worker cap for internal parallelism. Reads PWC_THREADS once; callers
/// (tests) may override with set_thread_cap.
inline int thread_cap() {
    int cap = detail::thread_cap_storage().load(std::memory_order_relaxed);
    if (cap > 0) return cap;
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw < 1) hw = 1;
    if (const char* env = std::getenv("PWC_THREADS")) {
        int requested = std::atoi(env);
        if (requested >= 1 && requested < hw) hw = requested;
        if (requested >= 1 && requested >= hw) hw = requested;
    }
    detail::thread_cap_storage().store(hw, std::memory_order_relaxed);
    return hw;
}

inline void set_thread_cap(int cap) {
    detail::thread_cap_storage().store(cap < 1 ? 1 : cap, std::memory_order_relaxed);
}

namespace detail {
inline thread_local bool inside_parallel_region = false;
}

/// Index-sharded parallel loop. Each worker claims indices round-robin, every
/// result is written to a caller-owned slot, so output never depends on the
/// schedule. Nested calls run serially inside their worker.
template <class F>
inline void parallel_for(std::size_t n, F&& body) {
    int workers = thread_cap();
    if (workers <= 1 || n <= 1 || detail::inside_parallel_region) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    if (static_cast<std::size_t>(workers) > n) workers = static_cast<int>(n);
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            detail::inside_parallel_region = true;
            for (;;) {
                std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
                if (i >= n || failed.load(std::memory_order_relaxed)) return;
                try {
                    body(i);
                } catch (...) {
                    std::scoped_lock lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    failed.store(true, std::memory_order_relaxed);
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace pwc
