#pragma once

#include <atomic>
#include <exception>
#include <map>
#include <mutex>
#include <thread>

namespace ntnsim {

template <typename Result>
void run_ordered(std::size_t n, std::size_t workers, const std::function<Result(std::size_t)>& work,
                 const std::function<void(std::size_t, Result&&)>& merge)
{
    std::mutex lock;
    std::map<std::size_t, Result> pending;
    std::size_t next_merge = 0;
    std::atomic<std::size_t> next_task{0};
    std::atomic<bool> stop{false};
    std::exception_ptr error;

    auto body = [&] {
        while (!stop.load()) {
            const std::size_t i = next_task.fetch_add(1);
            if (i >= n) return;
            try {
                Result r = work(i);
                std::lock_guard guard(lock);
                pending.emplace(i, std::move(r));
                while (!pending.empty() && pending.begin()->first == next_merge) {
                    merge(next_merge, std::move(pending.begin()->second));
                    pending.erase(pending.begin());
                    ++next_merge;
                }
            } catch (...) {
                std::lock_guard guard(lock);
                if (!error) error = std::current_exception();
                stop = true;
            }
        }
    };

    workers = std::max<std::size_t>(1, std::min(workers, n));
    if (workers == 1) {
        body();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(body);
        for (auto& t : pool) t.join();
    }
    if (error) std::rethrow_exception(error);
}

}  // namespace ntnsim
