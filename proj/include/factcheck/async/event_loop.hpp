#pragma once

#include <chrono>
#include <condition_variable>
#include <coroutine>
#include <cstdint>
#include <deque>
#include <exception>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <queue>
#include <thread>
#include <type_traits>
#include <variant>
#include <vector>

#include "factcheck/async/task.hpp"

namespace factcheck::async {

// Offsets from the clock epoch. A simulated loop starts at zero; a realtime
// loop reports steady_clock time so that timestamps from different loops in
// one process are comparable (the rate limiter is shared between them).
using Duration = std::chrono::nanoseconds;
using Timestamp = std::chrono::nanoseconds;

enum class ClockMode { realtime, simulated };

template <typename Rep, typename Period>
constexpr Duration to_duration(std::chrono::duration<Rep, Period> d) {
  return std::chrono::duration_cast<Duration>(d);
}

inline Duration seconds(double s) {
  return std::chrono::duration_cast<Duration>(std::chrono::duration<double>(s));
}

inline double to_seconds(Duration d) { return std::chrono::duration<double>(d).count(); }

class ThreadPool {
 public:
  explicit ThreadPool(std::size_t threads);
  ~ThreadPool();
  ThreadPool(const ThreadPool&) = delete;
  ThreadPool& operator=(const ThreadPool&) = delete;

  void submit(std::function<void()> job);

 private:
  std::mutex mutex_;
  std::condition_variable cv_;
  std::deque<std::function<void()>> jobs_;
  bool stopping_ = false;
  std::vector<std::thread> workers_;
};

/// Single-threaded coroutine scheduler in the style of an asyncio loop.
///
/// Coroutines only ever run on the thread that called run(). Blocking work
/// (HTTP calls) goes through run_blocking(), which executes on a worker pool
/// and posts the continuation back. In simulated mode the clock jumps to the
/// next timer whenever nothing is runnable, so latency tests finish instantly
/// and measure virtual time exactly.
class EventLoop {
 public:
  explicit EventLoop(ClockMode mode = ClockMode::realtime, std::size_t io_threads = 8);
  ~EventLoop();
  EventLoop(const EventLoop&) = delete;
  EventLoop& operator=(const EventLoop&) = delete;

  static EventLoop& current();
  static EventLoop* current_or_null() noexcept;

  ClockMode mode() const noexcept { return mode_; }
  Timestamp now() const;

  /// Thread-safe. Queues `h` to be resumed on the loop thread.
  void post(std::coroutine_handle<> h);
  void call_at(Timestamp when, std::coroutine_handle<> h);

  template <typename T>
  T run(Task<T> task);

  /// Run `fn` on the I/O pool; the awaiting coroutine resumes on the loop.
  template <typename F>
  auto run_blocking(F fn) -> Task<std::invoke_result_t<F&>>;

 private:
  struct Timer {
    Timestamp when;
    std::uint64_t seq;
    std::coroutine_handle<> handle;
    bool operator>(const Timer& o) const {
      return when != o.when ? when > o.when : seq > o.seq;
    }
  };

  void drive(const bool& finished);
  void begin_blocking();
  void submit_blocking(std::function<void()> job);
  void end_blocking(std::coroutine_handle<> h);
  bool absorb_incoming();

  ClockMode mode_;
  std::size_t io_threads_;
  Timestamp sim_now_{0};
  std::uint64_t timer_seq_ = 0;
  std::deque<std::coroutine_handle<>> ready_;
  std::priority_queue<Timer, std::vector<Timer>, std::greater<>> timers_;

  std::mutex mutex_;
  std::condition_variable cv_;
  std::vector<std::coroutine_handle<>> incoming_;
  std::size_t pending_blocking_ = 0;

  std::unique_ptr<ThreadPool> pool_;
};

namespace detail {

// Fire-and-forget coroutine; destroys itself on completion. Bodies must not
// let exceptions escape.
struct Detached {
  struct promise_type {
    Detached get_return_object() noexcept {
      return Detached{std::coroutine_handle<promise_type>::from_promise(*this)};
    }
    std::suspend_always initial_suspend() const noexcept { return {}; }
    std::suspend_never final_suspend() const noexcept { return {}; }
    void return_void() const noexcept {}
    void unhandled_exception() const noexcept { std::terminate(); }
  };
  std::coroutine_handle<promise_type> handle;
};

template <typename T>
using Stored = std::conditional_t<std::is_void_v<T>, std::monostate, T>;

}  // namespace detail

/// Result slot that any number of coroutines on the same loop may await.
template <typename T>
class Future {
 public:
  struct State {
    std::optional<detail::Stored<T>> value;
    std::exception_ptr error;
    std::vector<std::coroutine_handle<>> waiters;
    EventLoop* loop = nullptr;

    bool ready() const noexcept { return value.has_value() || error != nullptr; }
    void wake() {
      for (auto h : waiters) loop->post(h);
      waiters.clear();
    }
  };

  Future() = default;
  explicit Future(std::shared_ptr<State> s) : state_(std::move(s)) {}

  bool ready() const noexcept { return state_ && state_->ready(); }

  auto operator co_await() const noexcept {
    struct Awaiter {
      std::shared_ptr<State> state;
      bool await_ready() const noexcept { return state->ready(); }
      void await_suspend(std::coroutine_handle<> h) { state->waiters.push_back(h); }
      T await_resume() const {
        if (state->error) std::rethrow_exception(state->error);
        if constexpr (!std::is_void_v<T>) return *state->value;
      }
    };
    return Awaiter{state_};
  }

 private:
  std::shared_ptr<State> state_;
};

namespace detail {

template <typename T>
Detached drive_into(Task<T> task, std::shared_ptr<typename Future<T>::State> state) {
  try {
    if constexpr (std::is_void_v<T>) {
      co_await std::move(task);
      state->value.emplace();
    } else {
      state->value.emplace(co_await std::move(task));
    }
  } catch (...) {
    state->error = std::current_exception();
  }
  state->wake();
}

}  // namespace detail

/// Schedule `task` on the current loop and return a handle to its result.
template <typename T>
Future<T> spawn(Task<T> task) {
  auto& loop = EventLoop::current();
  auto state = std::make_shared<typename Future<T>::State>();
  state->loop = &loop;
  auto d = detail::drive_into<T>(std::move(task), state);
  loop.post(d.handle);
  return Future<T>{std::move(state)};
}

/// Runs every task concurrently. All tasks finish before the first error (if
/// any) is rethrown.
template <typename T>
Task<std::vector<T>> when_all(std::vector<Task<T>> tasks) {
  std::vector<Future<T>> futures;
  futures.reserve(tasks.size());
  for (auto& t : tasks) futures.push_back(spawn(std::move(t)));
  std::vector<T> out;
  out.reserve(futures.size());
  std::exception_ptr first;
  for (auto& f : futures) {
    try {
      out.push_back(co_await f);
    } catch (...) {
      if (!first) first = std::current_exception();
    }
  }
  if (first) std::rethrow_exception(first);
  co_return out;
}

Task<void> when_all(std::vector<Task<void>> tasks);

struct SleepAwaiter {
  Timestamp deadline;
  bool await_ready() const noexcept { return false; }
  void await_suspend(std::coroutine_handle<> h) const { EventLoop::current().call_at(deadline, h); }
  void await_resume() const noexcept {}
};

inline SleepAwaiter sleep_for(Duration d) {
  auto& loop = EventLoop::current();
  return SleepAwaiter{loop.now() + (d.count() > 0 ? d : Duration{0})};
}

inline SleepAwaiter yield_now() { return sleep_for(Duration{0}); }

// ---------------------------------------------------------------------------

template <typename T>
T EventLoop::run(Task<T> task) {
  bool finished = false;
  std::optional<detail::Stored<T>> result;
  std::exception_ptr error;

  auto body = [](Task<T> t, bool& done, std::optional<detail::Stored<T>>& out,
                 std::exception_ptr& err) -> detail::Detached {
    try {
      if constexpr (std::is_void_v<T>) {
        co_await std::move(t);
        out.emplace();
      } else {
        out.emplace(co_await std::move(t));
      }
    } catch (...) {
      err = std::current_exception();
    }
    done = true;
  };
  auto d = body(std::move(task), finished, result, error);
  post(d.handle);
  drive(finished);
  if (error) std::rethrow_exception(error);
  if constexpr (!std::is_void_v<T>) return std::move(*result);
}

template <typename F>
auto EventLoop::run_blocking(F fn) -> Task<std::invoke_result_t<F&>> {
  using R = std::invoke_result_t<F&>;
  struct Awaiter {
    EventLoop* loop;
    F* fn;
    std::optional<detail::Stored<R>> value;
    std::exception_ptr error;

    bool await_ready() const noexcept { return false; }
    void await_suspend(std::coroutine_handle<> h) {
      loop->begin_blocking();
      loop->submit_blocking([this, h] {
        try {
          if constexpr (std::is_void_v<R>) {
            (*fn)();
            value.emplace();
          } else {
            value.emplace((*fn)());
          }
        } catch (...) {
          error = std::current_exception();
        }
        loop->end_blocking(h);
      });
    }
    R await_resume() {
      if (error) std::rethrow_exception(error);
      if constexpr (!std::is_void_v<R>) return std::move(*value);
    }
  };
  if constexpr (std::is_void_v<R>) {
    co_await Awaiter{this, &fn, {}, {}};
  } else {
    co_return co_await Awaiter{this, &fn, {}, {}};
  }
}

}  // namespace factcheck::async
