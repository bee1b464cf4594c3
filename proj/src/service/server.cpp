#include "factcheck/service/server.hpp"

#include <csignal>
#include <iostream>

#include <httplib.h>

namespace factcheck::service {

namespace {

void send_json(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& message) {
  send_json(res, status, Json{{"error", message}});
}

Json parse_body(const httplib::Request& req) {
  auto body = Json::parse(req.body, nullptr, false);
  if (body.is_discarded() || !body.is_object()) throw FormatError("request body must be a JSON object");
  return body;
}

std::string string_field(const Json& body, const char* key, bool required) {
  auto it = body.find(key);
  if (it == body.end() || it->is_null()) {
    if (required) throw FormatError(std::string("missing field '") + key + "'");
    return {};
  }
  if (!it->is_string()) throw FormatError(std::string("field '") + key + "' must be a string");
  return it->get<std::string>();
}

}  // namespace

Service::Service(std::shared_ptr<FactChecker> checker, std::shared_ptr<CheckStore> store, ServiceSettings settings)
    : checker_(std::move(checker)),
      store_(std::move(store)),
      settings_(std::move(settings)),
      server_(std::make_unique<httplib::Server>()) {
  if (!checker_ || !store_) throw std::invalid_argument("Service needs a checker and a store");
  if (settings_.workers < 1) throw std::invalid_argument("Service needs at least one worker");
  register_routes();
}

Service::~Service() { stop(); }

std::size_t Service::queued() const {
  std::lock_guard lk(mutex_);
  return queue_.size();
}

void Service::register_routes() {
  auto& svr = *server_;
  svr.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
  svr.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });
  svr.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      send_error(res, 500, e.what());
    } catch (...) {
      send_error(res, 500, "internal error");
    }
  });

  svr.Get("/api/health", [](const httplib::Request&, httplib::Response& res) {
    send_json(res, 200, Json{{"status", "ok"}});
  });

  svr.Post("/api/checks", [this](const httplib::Request& req, httplib::Response& res) {
    Document doc;
    try {
      const auto body = parse_body(req);
      CheckOptions opts;
      if (auto lang = string_field(body, "language", false); !lang.empty()) opts.language = lang;
      doc = checker_->make_document(string_field(body, "text", true), opts);
    } catch (const Error& e) {
      return send_error(res, 400, e.what());
    }
    std::string id;
    {
      std::lock_guard lk(mutex_);
      if (stopping_) return send_error(res, 503, "service is shutting down");
      if (queue_.size() >= settings_.queue_depth)
        return send_error(res, 429, "too many checks waiting; retry later");
      id = store_->submit(doc.text, doc.language);
      queue_.emplace_back(id, std::move(doc));
    }
    cv_.notify_one();
    res.set_header("Location", "/api/checks/" + id);
    send_json(res, 202, Json{{"id", id}, {"status", "running"}});
  });

  svr.Get("/api/checks", [this](const httplib::Request&, httplib::Response& res) {
    Json list = Json::array();
    for (const auto& h : store_->history()) list.push_back(to_json(h));
    send_json(res, 200, Json{{"checks", std::move(list)}});
  });

  svr.Get(R"(/api/checks/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
    auto record = store_->get(req.matches[1]);
    if (!record) return send_error(res, 404, "no check with id '" + std::string(req.matches[1]) + "'");
    send_json(res, 200, to_json(*record));
  });

  svr.Post(R"(/api/checks/([^/]+)/feedback)", [this](const httplib::Request& req, httplib::Response& res) {
    try {
      const auto body = parse_body(req);
      Feedback f;
      f.verdict_ref = string_field(body, "verdict_ref", true);
      f.rating = string_field(body, "rating", true);
      f.comment = string_field(body, "comment", false);
      store_->add_feedback(req.matches[1], std::move(f));
    } catch (const UnknownCheck& e) {
      return send_error(res, 404, e.what());
    } catch (const InconsistentInput& e) {
      return send_error(res, 409, e.what());
    } catch (const Error& e) {
      return send_error(res, 400, e.what());
    }
    res.status = 204;
  });
}

void Service::worker_loop() {
  for (;;) {
    std::pair<std::string, Document> job;
    {
      std::unique_lock lk(mutex_);
      cv_.wait(lk, [this] { return stopping_ || !queue_.empty(); });
      if (stopping_) return;
      job = std::move(queue_.front());
      queue_.pop_front();
    }
    try {
      auto result = checker_->check_document(job.second);
      store_->complete(job.first, result.report);
    } catch (const std::exception& e) {
      store_->fail(job.first, e.what());
    }
  }
}

int Service::start() {
  if (port_ >= 0) return port_;
  port_ = settings_.port == 0 ? server_->bind_to_any_port(settings_.host)
                              : (server_->bind_to_port(settings_.host, settings_.port) ? settings_.port : -1);
  if (port_ < 0) throw std::runtime_error("cannot bind " + settings_.host + ":" + std::to_string(settings_.port));
  for (std::size_t i = 0; i < settings_.workers; ++i) workers_.emplace_back([this] { worker_loop(); });
  listener_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return port_;
}

void Service::stop() {
  {
    std::lock_guard lk(mutex_);
    if (stopping_) return;
    stopping_ = true;
  }
  cv_.notify_all();
  server_->stop();
  if (listener_.joinable()) listener_.join();
  for (auto& w : workers_)
    if (w.joinable()) w.join();
}

int serve(const ApiConfig& config) {
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);  // threads started below inherit the mask

  auto store = std::make_shared<CheckStore>(config.service.store_path);
  for (const auto& w : store->warnings()) std::cerr << "warning: " << w << '\n';
  Service service(std::make_shared<FactChecker>(config), store, config.service);
  const int port = service.start();
  std::cerr << "listening on http://" << config.service.host << ':' << port << '\n';

  int sig = 0;
  sigwait(&signals, &sig);
  std::cerr << "shutting down\n";
  service.stop();
  return 0;
}

}  // namespace factcheck::service
