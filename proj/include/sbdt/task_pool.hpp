#pragma once

#include <atomic>
#include <condition_variable>
#include <deque>
#include <exception>
#include <functional>
#include <memory>
#include <mutex>
#include <thread>
#include <vector>

namespace sbdt {

// Small work pool with help-first joins: a thread waiting for its task group
// keeps executing pending tasks from the shared queue, so nested parallel
// sections (the divide recursion spawns parallel children that themselves
// spawn parallel sections) cannot deadlock on a fixed-size pool.
//
// With threads <= 1 everything runs inline on the calling thread, which is
// the determinism baseline for the thread-count invariance tests.
class TaskPool {
 public:
  explicit TaskPool(unsigned threads) : target_workers_(threads > 1 ? threads - 1 : 0) {
    for (unsigned i = 0; i < target_workers_; ++i) {
      workers_.emplace_back([this] { worker_loop(); });
    }
  }

  TaskPool(const TaskPool&) = delete;
  TaskPool& operator=(const TaskPool&) = delete;

  ~TaskPool() {
    {
      std::unique_lock<std::mutex> lk(mu_);
      stop_ = true;
    }
    cv_.notify_all();
    for (auto& w : workers_) w.join();
  }

  unsigned concurrency() const { return target_workers_ + 1; }

  // Runs all tasks, returning when every one has finished. Rethrows the
  // first captured exception.
  void run_tasks(std::vector<std::function<void()>> tasks) {
    if (tasks.empty()) return;
    if (target_workers_ == 0 || tasks.size() == 1) {
      for (auto& t : tasks) t();
      return;
    }
    auto group = std::make_shared<Group>();
    group->pending.store(tasks.size(), std::memory_order_relaxed);
    {
      std::unique_lock<std::mutex> lk(mu_);
      for (auto& t : tasks) queue_.push_back(Item{std::move(t), group});
    }
    cv_.notify_all();
    help_until_done(*group);
    if (group->error) std::rethrow_exception(group->error);
  }

  // Splits [0, n) into fixed-size chunks (chunking independent of the thread
  // count) and runs fn(begin, end) for each chunk.
  void parallel_for(std::size_t n, std::size_t grain,
                    const std::function<void(std::size_t, std::size_t)>& fn) {
    if (n == 0) return;
    if (grain == 0) grain = 1;
    if (target_workers_ == 0 || n <= grain) {
      for (std::size_t b = 0; b < n; b += grain) fn(b, std::min(n, b + grain));
      return;
    }
    std::vector<std::function<void()>> tasks;
    tasks.reserve((n + grain - 1) / grain);
    for (std::size_t b = 0; b < n; b += grain) {
      const std::size_t e = std::min(n, b + grain);
      tasks.push_back([&fn, b, e] { fn(b, e); });
    }
    run_tasks(std::move(tasks));
  }

 private:
  struct Group {
    std::atomic<std::size_t> pending{0};
    std::exception_ptr error;
    std::mutex err_mu;
  };
  struct Item {
    std::function<void()> fn;
    std::shared_ptr<Group> group;
  };

  void execute(Item& item) {
    try {
      item.fn();
    } catch (...) {
      std::scoped_lock lk(item.group->err_mu);
      if (!item.group->error) item.group->error = std::current_exception();
    }
    if (item.group->pending.fetch_sub(1, std::memory_order_acq_rel) == 1) {
      // Lock before notifying so a joiner checking the predicate cannot slip
      // between the decrement and the notification and then sleep forever.
      std::unique_lock<std::mutex> lk(mu_);
      cv_.notify_all();
    }
  }

  void help_until_done(Group& group) {
    while (group.pending.load(std::memory_order_acquire) != 0) {
      Item item;
      {
        std::unique_lock<std::mutex> lk(mu_);
        if (queue_.empty()) {
          // No runnable work; some thread is finishing a task of this group.
          cv_.wait(lk, [&] {
            return !queue_.empty() || group.pending.load(std::memory_order_acquire) == 0;
          });
          if (group.pending.load(std::memory_order_acquire) == 0) return;
          if (queue_.empty()) continue;
        }
        item = std::move(queue_.front());
        queue_.pop_front();
      }
      execute(item);
    }
  }

  void worker_loop() {
    for (;;) {
      Item item;
      {
        std::unique_lock<std::mutex> lk(mu_);
        cv_.wait(lk, [&] { return stop_ || !queue_.empty(); });
        if (stop_ && queue_.empty()) return;
        item = std::move(queue_.front());
        queue_.pop_front();
      }
      execute(item);
    }
  }

  unsigned target_workers_;
  std::vector<std::thread> workers_;
  std::mutex mu_;
  std::condition_variable cv_;
  std::deque<Item> queue_;
  bool stop_ = false;
};

}  // namespace sbdt
