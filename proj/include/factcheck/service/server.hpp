#pragma once

#include <atomic>
#include <condition_variable>
#include <deque>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "factcheck/service/checker.hpp"
#include "factcheck/service/config.hpp"
#include "factcheck/service/store.hpp"

namespace httplib {
class Server;
}

namespace factcheck::service {

/// JSON-over-HTTP front end for the browser UI.
///
///   POST /api/checks                {text, language?}  -> 202 {id, status}
///   GET  /api/checks/{id}                              -> 200 record
///   GET  /api/checks                                   -> 200 {checks: [...]}
///   POST /api/checks/{id}/feedback  {verdict_ref, rating, comment?} -> 204
///   GET  /api/health                                   -> 200 {status: "ok"}
///
/// Submissions wait in a bounded queue for a worker thread; when the queue
/// already holds `queue_depth` checks a new one is refused with 429.
class Service {
 public:
  Service(std::shared_ptr<FactChecker> checker, std::shared_ptr<CheckStore> store, ServiceSettings settings);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Binds (port 0 picks a free one), starts the workers and the listener,
  /// and returns the bound port.
  int start();
  /// Stops accepting, lets running checks finish, and joins every thread.
  /// Queued checks stay "running" in the log and are failed on restart.
  void stop();

  int port() const { return port_; }
  std::size_t queued() const;

 private:
  void register_routes();
  void worker_loop();

  std::shared_ptr<FactChecker> checker_;
  std::shared_ptr<CheckStore> store_;
  ServiceSettings settings_;
  std::unique_ptr<httplib::Server> server_;
  std::thread listener_;
  std::vector<std::thread> workers_;
  mutable std::mutex mutex_;
  std::condition_variable cv_;
  std::deque<std::pair<std::string, Document>> queue_;
  bool stopping_ = false;
  int port_ = -1;
};

/// Runs the service described by `config` until SIGINT or SIGTERM.
int serve(const ApiConfig& config);

}  // namespace factcheck::service
