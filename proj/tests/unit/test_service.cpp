#include <doctest.h>

#include <httplib.h>

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <fstream>
#include <sstream>
#include <thread>
#include <unistd.h>

#include "factcheck/core/error.hpp"
#include "factcheck/core/json.hpp"
#include "factcheck/core/text.hpp"
#include "factcheck/llm/mock_provider.hpp"
#include "factcheck/service/checker.hpp"
#include "factcheck/service/cli.hpp"
#include "factcheck/service/server.hpp"
#include "fixtures.hpp"

using namespace factcheck;
using namespace factcheck::service;
using fctest::kMary;

namespace {

std::filesystem::path scratch_dir() {
  static std::atomic<int> counter{0};
  auto dir = std::filesystem::temp_directory_path() /
             ("factcheck-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

ApiConfig demo_config() { return load_api_config(fctest::demo_dir() / "api_config.yaml"); }

std::shared_ptr<FactChecker> mary_checker() { return std::make_shared<FactChecker>(fctest::mary_rig().pipeline); }

ServiceSettings ephemeral(std::size_t workers = 2, std::size_t depth = 8) {
  ServiceSettings s;
  s.port = 0;
  s.workers = workers;
  s.queue_depth = depth;
  return s;
}

std::string post_check(httplib::Client& c, const std::string& text, int expect = 202) {
  auto res = c.Post("/api/checks", Json{{"text", text}}.dump(), "application/json");
  REQUIRE(res);
  REQUIRE(res->status == expect);
  return expect == 202 ? Json::parse(res->body).at("id").get<std::string>() : std::string{};
}

Json wait_until_finished(httplib::Client& c, const std::string& id) {
  const auto deadline = std::chrono::steady_clock::now() + std::chrono::seconds(20);
  while (std::chrono::steady_clock::now() < deadline) {
    auto res = c.Get("/api/checks/" + id);
    REQUIRE(res);
    REQUIRE(res->status == 200);
    auto j = Json::parse(res->body);
    if (j.at("status") != "running") return j;
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  FAIL("check " << id << " did not finish");
  return {};
}

/// Blocks every call until opened.
struct Gate {
  std::mutex m;
  std::condition_variable cv;
  bool open = false;
  void wait() {
    std::unique_lock lk(m);
    cv.wait(lk, [&] { return open; });
  }
  void release() {
    {
      std::lock_guard lk(m);
      open = true;
    }
    cv.notify_all();
  }
};

int run_cli(std::vector<std::string> args, std::string& out, std::string& err, const ModalRegistry& modals = {}) {
  args.insert(args.begin(), "factcheck");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream o, e;
  const int code = cli_main(static_cast<int>(argv.size()), argv.data(), o, e, modals);
  out = o.str();
  err = e.str();
  return code;
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("demo config loads and resolves paths against its directory") {
    const auto c = demo_config();
    CHECK(c.default_provider == "mock");
    CHECK(c.default_provider_config().kind == "mock");
    CHECK(std::filesystem::path(c.default_provider_config().transcript) == fctest::demo_dir() / "transcript.json");
    CHECK(c.search.mode == "recorded");
    CHECK(c.search.fixtures_path == fctest::demo_dir() / "search");
    CHECK(c.service.store_path == fctest::demo_dir() / "checks.jsonl");
    CHECK(c.provider("gpt-4o").credential_ref == "OPENAI_API_KEY");
    CHECK(c.retry.max_attempts == 3);
    CHECK(c.label_rule.support_threshold == doctest::Approx(0.8));
  }

  TEST_CASE("invalid configs are rejected") {
    const std::string providers = "providers:\n  - name: m\n    kind: mock\n    transcript: t.json\n";
    CHECK_NOTHROW(parse_api_config(providers));
    CHECK_THROWS_AS(parse_api_config(providers + "default_provider: other\n"), FormatError);
    CHECK_THROWS_AS(parse_api_config(providers + "search:\n  mode: cached\n"), FormatError);
    CHECK_THROWS_AS(parse_api_config(providers + "label_rule:\n  support_threshold: 0.1\n"), FormatError);
    CHECK_THROWS_AS(parse_api_config(providers + "retry:\n  max_attempts: zero\n"), FormatError);
    CHECK_THROWS_AS(parse_api_config(providers + "pipeline:\n  ranker: oracle\n"), FormatError);
    CHECK_THROWS_AS(parse_api_config(providers + "  - name: m\n    kind: mock\n"), FormatError);
    CHECK_THROWS_AS(parse_api_config("providers: []\n"), FormatError);
    CHECK_THROWS_AS(parse_api_config("- just a list\n"), FormatError);
    CHECK_THROWS_AS(parse_api_config("providers: [\n"), FormatError);
  }

  TEST_CASE("select_backend switches provider and search mode together") {
    auto c = demo_config();
    select_backend(c, true);
    CHECK(c.default_provider == "gpt-4o");
    CHECK(c.search.mode == "live");
    select_backend(c, false);
    CHECK(c.default_provider == "mock");
    CHECK(c.search.mode == "recorded");

    auto live_only = load_api_config(fctest::demo_dir() / "api_config.live.yaml");
    CHECK_THROWS_AS(select_backend(live_only, false), FormatError);
  }
}

TEST_SUITE("checker") {
  TEST_CASE("check_response on the demo config reproduces the Mary verdicts") {
    FactChecker checker(demo_config());
    const auto report = checker.check_response(kMary);
    REQUIRE(report.credibility_percent.has_value());
    CHECK(*report.credibility_percent == 100.0);
    CHECK(report.counts[Label::well_supported] == 3);
    CHECK(report.claims.size() == 3);
    for (const auto& [id, v] : report.verdicts) {
      CHECK(v.evidence.size() == 3);
      for (const auto& e : v.evidence) CHECK(e.url.find("mbzuai") == std::string::npos);
    }
  }

  TEST_CASE("the demo config answers the MBZUAI example with a direct answer first") {
    FactChecker checker(demo_config());
    const auto report = checker.check_response("MBZUAI is the first AI university in the world");
    REQUIRE(report.verdicts.size() == 1);
    const auto& v = report.verdicts.begin()->second;
    REQUIRE(!v.evidence.empty());
    CHECK(v.evidence[0].is_direct_answer);
    CHECK(v.evidence[0].relevance == 1.0);
    CHECK(v.label == Label::well_supported);
  }

  TEST_CASE("input errors surface before any model call") {
    auto rig = fctest::mary_rig();
    FactChecker checker(rig.pipeline);
    CHECK_THROWS_AS(checker.check_response(""), EmptyDocument);
    CHECK_THROWS_AS(checker.check_response(" \n\t"), EmptyDocument);
    CHECK_THROWS_AS(checker.check_response(kMary, CheckOptions{"tlh"}), UnsupportedLanguage);
    CHECK(rig.provider->invocations() == 0);
  }
}

TEST_SUITE("store") {
  TEST_CASE("records, feedback and history survive a reopen") {
    const auto path = scratch_dir() / "checks.jsonl";
    const auto report = mary_checker()->check_response(kMary);
    std::string first, second;
    {
      CheckStore store(path);
      first = store.submit(kMary, "en");
      second = store.submit("Another text.", "en");
      store.complete(first, report);
      store.fail(second, "boom");
      store.add_feedback(first, Feedback{"c2", "disagree", "not sure", ""});
      store.add_feedback(first, Feedback{"c1", "agree", "", ""});
    }
    CheckStore reopened(path);
    CHECK(reopened.warnings().empty());
    auto r = reopened.get(first);
    REQUIRE(r);
    CHECK(r->status == CheckStatus::done);
    REQUIRE(r->report);
    CHECK(to_canonical_json(*r->report) == to_canonical_json(report));
    REQUIRE(r->feedback.size() == 2);
    CHECK(r->feedback[0].verdict_ref == "c2");
    CHECK(r->feedback[1].rating == "agree");
    CHECK(reopened.get(second)->error == "boom");

    const auto h = reopened.history();
    REQUIRE(h.size() == 2);
    CHECK(h[0].id == second);
    CHECK(h[1].id == first);
    CHECK(h[1].credibility_percent == 100.0);
    CHECK(!h[0].credibility_percent);

    const auto third = reopened.submit("Third.", "en");
    CHECK(third != first);
    CHECK(third != second);
  }

  TEST_CASE("unfinished checks are failed on restart and the failure is logged") {
    const auto path = scratch_dir() / "checks.jsonl";
    std::string id;
    {
      CheckStore store(path);
      id = store.submit(kMary, "en");
    }
    {
      CheckStore reopened(path);
      CHECK(reopened.get(id)->status == CheckStatus::failed);
      CHECK(reopened.get(id)->error.find("restart") != std::string::npos);
    }
    std::ifstream in(path);
    int lines = 0;
    for (std::string l; std::getline(in, l);) ++lines;
    CHECK(lines == 2);
    CheckStore again(path);
    CHECK(again.get(id)->status == CheckStatus::failed);
  }

  TEST_CASE("a torn final line is skipped with a warning") {
    const auto path = scratch_dir() / "checks.jsonl";
    std::string id;
    {
      CheckStore store(path);
      id = store.submit("Kept.", "en");
      store.fail(id, "x");
    }
    {
      std::ofstream out(path, std::ios::app);
      out << R"({"type":"submitted","id":"chk-0000)";
    }
    CheckStore reopened(path);
    CHECK(reopened.size() == 1);
    CHECK(reopened.get(id)->submitted_text == "Kept.");
    REQUIRE(reopened.warnings().size() == 1);
    CHECK(reopened.warnings()[0].find("line 3") != std::string::npos);
  }

  TEST_CASE("feedback validation") {
    CheckStore store;
    const auto id = store.submit(kMary, "en");
    CHECK_THROWS_AS(store.add_feedback(id, Feedback{"c1", "agree", "", ""}), InconsistentInput);
    store.complete(id, mary_checker()->check_response(kMary));
    CHECK_THROWS_AS(store.add_feedback(id, Feedback{"c1", "meh", "", ""}), FormatError);
    CHECK_THROWS_AS(store.add_feedback(id, Feedback{"", "agree", "", ""}), FormatError);
    CHECK_THROWS_AS(store.add_feedback(id, Feedback{"c9", "agree", "", ""}), FormatError);
    CHECK_THROWS_AS(store.add_feedback("chk-999999", Feedback{"c1", "agree", "", ""}), UnknownCheck);
    CHECK_NOTHROW(store.add_feedback(id, Feedback{"c1", "agree", "", ""}));
  }

  TEST_CASE("history snippets are trimmed to 80 code points") {
    CheckStore store;
    std::string long_text;
    for (int i = 0; i < 30; ++i) long_text += "ééx ";
    store.submit(long_text, "en");
    store.submit("  short\nline  ", "en");
    const auto h = store.history();
    CHECK(h[0].snippet == "short line");
    CHECK(text::utf8_length(h[1].snippet) == CheckStore::kSnippetLength);
    CHECK(h[1].snippet.substr(h[1].snippet.size() - 3) == "\xE2\x80\xA6");
  }
}

TEST_SUITE("http") {
  TEST_CASE("submit, poll and read back the Mary report") {
    auto checker = mary_checker();
    const auto expected = mask_volatile(Json(checker->check_response(kMary)));
    Service svc(checker, std::make_shared<CheckStore>(), ephemeral());
    httplib::Client c("127.0.0.1", svc.start());

    auto health = c.Get("/api/health");
    REQUIRE(health);
    CHECK(health->status == 200);
    CHECK(Json::parse(health->body) == Json{{"status", "ok"}});

    const auto id = post_check(c, kMary);
    const auto done = wait_until_finished(c, id);
    REQUIRE(done.at("status") == "done");
    CHECK(done.at("text") == kMary);
    CHECK(done.at("feedback") == Json::array());
    CHECK(done.at("report").at("credibility_percent") == 100.0);
    CHECK(mask_volatile(done.at("report")) == expected);

    auto a = c.Get("/api/checks/" + id);
    auto b = c.Get("/api/checks/" + id);
    REQUIRE((a && b));
    CHECK(a->body == b->body);
    CHECK(a->get_header_value("Access-Control-Allow-Origin") == "*");

    auto list = c.Get("/api/checks");
    REQUIRE(list);
    const auto checks = Json::parse(list->body).at("checks");
    REQUIRE(checks.size() == 1);
    CHECK(checks[0].at("id") == id);
    CHECK(checks[0].at("credibility_percent") == 100.0);
    CHECK(checks[0].at("snippet").get<std::string>().rfind("Mary is a five-year old girl", 0) == 0);
  }

  TEST_CASE("bad requests and unknown ids") {
    Service svc(mary_checker(), std::make_shared<CheckStore>(), ephemeral());
    httplib::Client c("127.0.0.1", svc.start());
    post_check(c, "", 400);
    post_check(c, "   ", 400);
    auto res = c.Post("/api/checks", "not json", "application/json");
    REQUIRE(res);
    CHECK(res->status == 400);
    res = c.Post("/api/checks", R"({"text": 5})", "application/json");
    CHECK(res->status == 400);
    res = c.Post("/api/checks", Json{{"text", kMary}, {"language", "tlh"}}.dump(), "application/json");
    CHECK(res->status == 400);
    CHECK(Json::parse(res->body).at("error").get<std::string>().find("tlh") != std::string::npos);

    res = c.Get("/api/checks/chk-424242");
    REQUIRE(res);
    CHECK(res->status == 404);
    res = c.Post("/api/checks/chk-424242/feedback", Json{{"verdict_ref", "c1"}, {"rating", "agree"}}.dump(),
                 "application/json");
    CHECK(res->status == 404);

    auto list = c.Get("/api/checks");
    CHECK(Json::parse(list->body).at("checks").empty());
  }

  TEST_CASE("feedback is kept in submission order") {
    Service svc(mary_checker(), std::make_shared<CheckStore>(), ephemeral());
    httplib::Client c("127.0.0.1", svc.start());
    const auto id = post_check(c, kMary);
    wait_until_finished(c, id);
    const std::vector<std::pair<std::string, std::string>> given{{"c3", "disagree"}, {"c1", "agree"}, {"c3", "agree"}};
    for (const auto& [ref, rating] : given) {
      auto res = c.Post("/api/checks/" + id + "/feedback",
                        Json{{"verdict_ref", ref}, {"rating", rating}, {"comment", ref + rating}}.dump(),
                        "application/json");
      REQUIRE(res);
      CHECK(res->status == 204);
    }
    auto bad = c.Post("/api/checks/" + id + "/feedback", Json{{"verdict_ref", "c1"}, {"rating", "maybe"}}.dump(),
                      "application/json");
    CHECK(bad->status == 400);

    const auto fb = Json::parse(c.Get("/api/checks/" + id)->body).at("feedback");
    REQUIRE(fb.size() == given.size());
    for (std::size_t i = 0; i < given.size(); ++i) {
      CHECK(fb[i].at("verdict_ref") == given[i].first);
      CHECK(fb[i].at("rating") == given[i].second);
      CHECK(fb[i].at("comment") == given[i].first + given[i].second);
      CHECK(!fb[i].at("timestamp").get<std::string>().empty());
    }
  }

  TEST_CASE("a full queue answers 429 and the accepted checks still finish") {
    auto gate = std::make_shared<Gate>();
    auto inner = fctest::synthetic_responder(1);
    auto provider = std::make_shared<llm::MockProvider>(
        [gate, inner](const llm::LlmRequest& r) {
          gate->wait();
          return inner(r);
        },
        async::Duration{0});
    auto gateway = std::make_shared<llm::Gateway>(provider, fctest::open_limiter(), fctest::fast_retry());
    auto pipe = std::make_shared<pipeline::Pipeline>(gateway, fctest::synthetic_search(async::Duration{0}),
                                                     fctest::fast_retry());
    Service svc(std::make_shared<FactChecker>(pipe), std::make_shared<CheckStore>(), ephemeral(1, 2));
    httplib::Client c("127.0.0.1", svc.start());
    const auto doc = fctest::synthetic_document(1);

    const auto a = post_check(c, doc);
    const auto t0 = std::chrono::steady_clock::now();
    while (provider->invocations() == 0 && std::chrono::steady_clock::now() - t0 < std::chrono::seconds(10))
      std::this_thread::sleep_for(std::chrono::milliseconds(1));
    REQUIRE(provider->invocations() >= 1);  // the only worker is now busy with a

    const auto b = post_check(c, doc);
    const auto d = post_check(c, doc);
    CHECK(svc.queued() == 2);
    post_check(c, doc, 429);
    post_check(c, doc, 429);
    CHECK(Json::parse(c.Get("/api/checks")->body).at("checks").size() == 3);

    gate->release();
    for (const auto& id : {a, b, d}) CHECK(wait_until_finished(c, id).at("status") == "done");
    post_check(c, doc);  // room again
  }

  TEST_CASE("checks and feedback persist across a service restart") {
    const auto path = scratch_dir() / "checks.jsonl";
    std::string id, before;
    {
      Service svc(mary_checker(), std::make_shared<CheckStore>(path), ephemeral());
      httplib::Client c("127.0.0.1", svc.start());
      id = post_check(c, kMary);
      wait_until_finished(c, id);
      auto res = c.Post("/api/checks/" + id + "/feedback", Json{{"verdict_ref", "c2"}, {"rating", "agree"}}.dump(),
                        "application/json");
      CHECK(res->status == 204);
      before = c.Get("/api/checks/" + id)->body;
    }
    Service svc(mary_checker(), std::make_shared<CheckStore>(path), ephemeral());
    httplib::Client c("127.0.0.1", svc.start());
    auto res = c.Get("/api/checks/" + id);
    REQUIRE(res);
    CHECK(res->status == 200);
    CHECK(res->body == before);
    CHECK(Json::parse(c.Get("/api/checks")->body).at("checks").size() == 1);
  }

  TEST_CASE("a failing check is reported as failed with its error") {
    auto rig = fctest::mary_rig();
    Service svc(std::make_shared<FactChecker>(rig.pipeline), std::make_shared<CheckStore>(), ephemeral());
    httplib::Client c("127.0.0.1", svc.start());
    const auto id = post_check(c, "A text the recorded model has never seen.");
    const auto j = wait_until_finished(c, id);
    CHECK(j.at("status") == "failed");
    CHECK(j.at("error").get<std::string>().find("no entry") != std::string::npos);
    CHECK(!j.contains("report"));
  }
}

TEST_SUITE("cli") {
  const std::string config = (fctest::demo_dir() / "api_config.yaml").string();

  TEST_CASE("string modal prints the canonical report") {
    std::string out, err;
    REQUIRE(run_cli({"--modal", "string", "--input", kMary, "--api_config", config}, out, err) == kExitOk);
    const auto report = report_from_json(out);
    CHECK(report.credibility_percent == 100.0);
    CHECK(err.find("credibility 100.0%") != std::string::npos);
  }

  TEST_CASE("text modal reads a file and writes --output") {
    const auto dir = scratch_dir();
    const auto out_path = (dir / "report.json").string();
    std::string out, err;
    REQUIRE(run_cli({"--modal", "text", "--input", (fctest::demo_dir() / "text.txt").string(), "--api_config", config,
                     "--output", out_path},
                    out, err) == kExitOk);
    CHECK(out.empty());
    CHECK(report_from_json(fctest::read_file(out_path)).counts[Label::well_supported] == 3);
  }

  TEST_CASE("usage errors") {
    std::string out, err;
    for (const std::string modal : {"speech", "image", "video"}) {
      CHECK(run_cli({"--modal", modal, "--input", "clip", "--api_config", config}, out, err) == kExitUsage);
      CHECK(err.find("modal '" + modal + "' is an unimplemented extension") != std::string::npos);
    }
    CHECK(run_cli({"--modal", "text", "--input", "/no/such/file.txt", "--api_config", config}, out, err) == kExitUsage);
    CHECK(err.find("/no/such/file.txt") != std::string::npos);
    CHECK(run_cli({"--modal", "braille", "--input", "x", "--api_config", config}, out, err) == kExitUsage);
    CHECK(run_cli({"--input", "x"}, out, err) == kExitUsage);
    CHECK(run_cli({"--api_config", config}, out, err) == kExitUsage);
    CHECK(run_cli({"--unknown-flag"}, out, err) == kExitUsage);
    CHECK(run_cli({"eval", "--dataset", "x.jsonl", "--mode", "offline"}, out, err) == kExitUsage);
    CHECK(run_cli({"--help"}, out, err) == kExitOk);
    CHECK(out.find("--api_config") != std::string::npos);
  }

  TEST_CASE("a registered pre-processor handles its modal") {
    struct Transcriber final : ModalPreprocessor {
      std::string to_text(const std::vector<unsigned char>& bytes) override {
        std::string s(bytes.begin(), bytes.end());
        for (auto& c : s) c = c == '_' ? ' ' : c;
        return s;
      }
    };
    const auto dir = scratch_dir();
    {
      std::ofstream f(dir / "clip.bin", std::ios::binary);
      f << "MBZUAI_is_the_first_AI_university_in_the_world\n";
    }
    ModalRegistry modals{{"speech", std::make_shared<Transcriber>()}};
    std::string out, err;
    REQUIRE(run_cli({"--modal", "speech", "--input", (dir / "clip.bin").string(), "--api_config", config}, out, err,
                    modals) == kExitOk);
    CHECK(report_from_json(out).document.text == "MBZUAI is the first AI university in the world");
    CHECK(run_cli({"--modal", "video", "--input", (dir / "clip.bin").string(), "--api_config", config}, out, err,
                  modals) == kExitUsage);
  }

  TEST_CASE("pipeline failures exit nonzero") {
    std::string out, err;
    CHECK(run_cli({"--input", "Nothing recorded for this.", "--api_config", config}, out, err) == kExitFailure);
    CHECK(out.empty());
    CHECK(run_cli({"--input", "  ", "--api_config", config}, out, err) == kExitFailure);
    CHECK(err.find("empty") != std::string::npos);
  }

  TEST_CASE("eval baseline and mock runs emit metrics") {
    std::string out, err;
    const auto qa = (fctest::data_dir() / "factool_qa" / "knowledge_qa.jsonl").string();
    REQUIRE(run_cli({"eval", "--dataset", qa, "--format", "factool_qa", "--baseline", "always_true"}, out, err) ==
            kExitOk);
    auto j = Json::parse(out);
    CHECK(j.at("labels").at("true").at("support") == 177);
    CHECK(j.at("labels").at("true").at("precision").get<double>() == doctest::Approx(177.0 / 233.0));
    CHECK(err.find("0.76   1.00   0.86   177") != std::string::npos);

    REQUIRE(run_cli({"eval", "--dataset", (fctest::demo_dir() / "eval_claims.jsonl").string(), "--api_config", config},
                    out, err) == kExitOk);
    j = Json::parse(out);
    CHECK(j.at("evaluated") == 4);
    CHECK(j.at("abstentions") == 0);
    CHECK(j.at("labels").at("true").at("recall") == 1.0);
    CHECK(j.at("cost").at("samples") == 4);
    CHECK(err.find("Prompt tokens") != std::string::npos);
  }
}
