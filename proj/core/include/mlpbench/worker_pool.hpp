#pragma once

#include <condition_variable>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace mlpbench {

/// Fixed team of worker threads. `run(job)` calls job(w) on worker w for every w in
/// [0, size()) and returns once all of them have finished: one fork-join barrier per call.
///
/// Constructed once per benchmark run so thread creation stays outside timed regions.
class WorkerPool {
public:
    explicit WorkerPool(std::size_t workers);
    ~WorkerPool();

    WorkerPool(const WorkerPool&) = delete;
    WorkerPool& operator=(const WorkerPool&) = delete;

    [[nodiscard]] std::size_t size() const noexcept { return threads_.size(); }

    /// Rethrows the exception of the lowest-indexed failing worker, if any.
    void run(const std::function<void(std::size_t)>& job);

private:
    void worker_loop(std::size_t index);

    std::vector<std::jthread> threads_;
    std::mutex mutex_;
    std::condition_variable work_ready_;
    std::condition_variable work_done_;
    const std::function<void(std::size_t)>* job_ = nullptr;
    std::size_t generation_ = 0;
    std::size_t pending_ = 0;
    bool stopping_ = false;
    std::vector<std::exception_ptr> errors_;
};

}  // namespace mlpbench
