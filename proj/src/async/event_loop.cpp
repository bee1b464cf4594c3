#include "factcheck/async/event_loop.hpp"

#include <stdexcept>

namespace factcheck::async {

namespace {
thread_local EventLoop* g_current = nullptr;

struct CurrentGuard {
  EventLoop* previous;
  explicit CurrentGuard(EventLoop* loop) : previous(g_current) { g_current = loop; }
  ~CurrentGuard() { g_current = previous; }
};
}  // namespace

ThreadPool::ThreadPool(std::size_t threads) {
  workers_.reserve(threads);
  for (std::size_t i = 0; i < threads; ++i) {
    workers_.emplace_back([this] {
      for (;;) {
        std::function<void()> job;
        {
          std::unique_lock lock(mutex_);
          cv_.wait(lock, [this] { return stopping_ || !jobs_.empty(); });
          if (stopping_ && jobs_.empty()) return;
          job = std::move(jobs_.front());
          jobs_.pop_front();
        }
        job();
      }
    });
  }
}

ThreadPool::~ThreadPool() {
  {
    std::lock_guard lock(mutex_);
    stopping_ = true;
  }
  cv_.notify_all();
  for (auto& w : workers_) w.join();
}

void ThreadPool::submit(std::function<void()> job) {
  {
    std::lock_guard lock(mutex_);
    jobs_.push_back(std::move(job));
  }
  cv_.notify_one();
}

EventLoop::EventLoop(ClockMode mode, std::size_t io_threads)
    : mode_(mode), io_threads_(io_threads == 0 ? 1 : io_threads) {}

EventLoop::~EventLoop() = default;

EventLoop& EventLoop::current() {
  if (!g_current) throw std::logic_error("no event loop is running on this thread");
  return *g_current;
}

EventLoop* EventLoop::current_or_null() noexcept { return g_current; }

Timestamp EventLoop::now() const {
  if (mode_ == ClockMode::simulated) return sim_now_;
  return std::chrono::duration_cast<Timestamp>(
      std::chrono::steady_clock::now().time_since_epoch());
}

void EventLoop::post(std::coroutine_handle<> h) {
  if (g_current == this) {
    ready_.push_back(h);
    return;
  }
  {
    std::lock_guard lock(mutex_);
    incoming_.push_back(h);
  }
  cv_.notify_one();
}

void EventLoop::call_at(Timestamp when, std::coroutine_handle<> h) {
  timers_.push(Timer{when, timer_seq_++, h});
}

void EventLoop::begin_blocking() {
  std::lock_guard lock(mutex_);
  ++pending_blocking_;
}

void EventLoop::submit_blocking(std::function<void()> job) {
  if (!pool_) pool_ = std::make_unique<ThreadPool>(io_threads_);
  pool_->submit(std::move(job));
}

void EventLoop::end_blocking(std::coroutine_handle<> h) {
  {
    std::lock_guard lock(mutex_);
    --pending_blocking_;
    incoming_.push_back(h);
  }
  cv_.notify_one();
}

bool EventLoop::absorb_incoming() {
  std::lock_guard lock(mutex_);
  if (incoming_.empty()) return false;
  for (auto h : incoming_) ready_.push_back(h);
  incoming_.clear();
  return true;
}

void EventLoop::drive(const bool& finished) {
  CurrentGuard guard(this);
  for (;;) {
    absorb_incoming();
    while (!ready_.empty()) {
      auto h = ready_.front();
      ready_.pop_front();
      h.resume();
    }
    if (absorb_incoming()) continue;

    std::size_t blocking;
    {
      std::lock_guard lock(mutex_);
      blocking = pending_blocking_;
    }
    if (finished && blocking == 0) return;

    if (blocking > 0) {
      std::unique_lock lock(mutex_);
      if (timers_.empty() || mode_ == ClockMode::simulated) {
        cv_.wait(lock, [this] { return !incoming_.empty(); });
        continue;
      }
      auto deadline = std::chrono::steady_clock::time_point(
          std::chrono::duration_cast<std::chrono::steady_clock::duration>(timers_.top().when));
      cv_.wait_until(lock, deadline, [this] { return !incoming_.empty(); });
    } else if (!timers_.empty()) {
      if (mode_ == ClockMode::simulated) {
        if (timers_.top().when > sim_now_) sim_now_ = timers_.top().when;
      } else {
        std::unique_lock lock(mutex_);
        auto deadline = std::chrono::steady_clock::time_point(
            std::chrono::duration_cast<std::chrono::steady_clock::duration>(timers_.top().when));
        cv_.wait_until(lock, deadline, [this] { return !incoming_.empty(); });
      }
    } else if (!finished) {
      throw std::logic_error("event loop stalled: no runnable coroutine, timer, or pending I/O");
    }

    const auto t = now();
    while (!timers_.empty() && timers_.top().when <= t) {
      ready_.push_back(timers_.top().handle);
      timers_.pop();
    }
  }
}

Task<void> when_all(std::vector<Task<void>> tasks) {
  std::vector<Future<void>> futures;
  futures.reserve(tasks.size());
  for (auto& t : tasks) futures.push_back(spawn(std::move(t)));
  std::exception_ptr first;
  for (auto& f : futures) {
    try {
      co_await f;
    } catch (...) {
      if (!first) first = std::current_exception();
    }
  }
  if (first) std::rethrow_exception(first);
}

}  // namespace factcheck::async
