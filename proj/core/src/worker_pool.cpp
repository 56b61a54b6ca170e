#include "mlpbench/worker_pool.hpp"

#include <stdexcept>

namespace mlpbench {

WorkerPool::WorkerPool(std::size_t workers) : errors_(workers) {
    if (workers == 0) throw std::invalid_argument("WorkerPool needs at least one worker");
    threads_.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        threads_.emplace_back([this, w] { worker_loop(w); });
    }
}

WorkerPool::~WorkerPool() {
    {
        std::lock_guard lock(mutex_);
        stopping_ = true;
    }
    work_ready_.notify_all();
    // jthread joins on destruction
}

void WorkerPool::run(const std::function<void(std::size_t)>& job) {
    {
        std::lock_guard lock(mutex_);
        job_ = &job;
        pending_ = threads_.size();
        for (auto& e : errors_) e = nullptr;
        ++generation_;
    }
    work_ready_.notify_all();
    {
        std::unique_lock lock(mutex_);
        work_done_.wait(lock, [this] { return pending_ == 0; });
        job_ = nullptr;
    }
    for (const auto& e : errors_) {
        if (e) std::rethrow_exception(e);
    }
}

void WorkerPool::worker_loop(std::size_t index) {
    std::size_t seen = 0;
    for (;;) {
        const std::function<void(std::size_t)>* job = nullptr;
        {
            std::unique_lock lock(mutex_);
            work_ready_.wait(lock, [&] { return stopping_ || generation_ != seen; });
            if (stopping_) return;
            seen = generation_;
            job = job_;
        }
        try {
            (*job)(index);
        } catch (...) {
            errors_[index] = std::current_exception();
        }
        {
            std::lock_guard lock(mutex_);
            if (--pending_ == 0) work_done_.notify_one();
        }
    }
}

}  // namespace mlpbench
