#include "dynsamp/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace dynsamp {

std::size_t resolve_threads(std::size_t requested)
{
    std::size_t threads = requested;
    if (threads == 0)
        threads = std::max(1u, std::thread::hardware_concurrency());

    if (const char* env = std::getenv("DYNSAMP_THREADS")) {
        std::size_t cap = 0;
        const char* end = env + std::strlen(env);
        auto [ptr, ec] = std::from_chars(env, end, cap);
        if (ec == std::errc{} && ptr == end && cap > 0)
            threads = std::min(threads, cap);
    }
    return threads;
}

void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& body)
{
    threads = std::min(threads == 0 ? std::size_t{1} : threads, count);
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            body(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count)
                return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!first_error)
                    first_error = std::current_exception();
                next.store(count);
                return;
            }
        }
    };

    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t)
        pool.emplace_back(worker);
    pool.clear();

    if (first_error)
        std::rethrow_exception(first_error);
}

} // namespace dynsamp
