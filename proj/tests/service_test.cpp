#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include <unistd.h>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "httplib.h"
#include "json.hpp"
#include "rwr/cli.hpp"
#include "rwr/error.hpp"
#include "rwr/http_server.hpp"
#include "rwr/service.hpp"

namespace rwr {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("rwr-service-" + std::to_string(::getpid()) + "-" + std::to_string(counter_++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  static inline int counter_ = 0;
  fs::path path_;
};

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error";
  return ErrorCode::IoError;
}

struct FakeClock {
  std::chrono::system_clock::time_point now{std::chrono::milliseconds(1'236'000'000'000)};
  SessionService::Clock fn() {
    return [this] { return now; };
  }
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Keys a participant-facing response may carry, by object kind.
void expect_whitelisted_set(const json& set) {
  const std::set<std::string> keys{"set_seq", "figures"};
  for (const auto& [k, v] : set.items()) EXPECT_TRUE(keys.count(k)) << k;
  ASSERT_EQ(set["figures"].size(), 9u);
  const std::set<std::string> figure_keys{"position", "shape", "shade", "size"};
  for (const auto& figure : set["figures"]) {
    ASSERT_EQ(figure.size(), figure_keys.size());
    for (const auto& [k, v] : figure.items()) EXPECT_TRUE(figure_keys.count(k)) << k;
  }
}

void expect_whitelisted_click(const json& body) {
  const std::set<std::string> keys{"feedback", "status", "next_set"};
  for (const auto& [k, v] : body.items()) EXPECT_TRUE(keys.count(k)) << k;
  EXPECT_TRUE(body["feedback"] == kRightChoice || body["feedback"] == kWrongChoice);
  if (body.contains("next_set")) expect_whitelisted_set(body["next_set"]);
}

TEST(Service, UnwritableDataDir) {
  TempDir dir;
  const fs::path file = dir.path() / "plain-file";
  std::ofstream(file) << "x";
  EXPECT_EQ(code_of([&] { SessionService service({file / "sub"}); }), ErrorCode::DataDirUnwritable);
}

TEST(Service, FixedSeedGivesIdenticalFirstSets) {
  TempDir dir;
  SessionService service({dir.path()});
  const auto a = service.create_session(std::nullopt, 77);
  const auto b = service.create_session(std::nullopt, 77);
  EXPECT_NE(a.session_id, b.session_id);
  EXPECT_EQ(a.set.figures, b.set.figures);
  EXPECT_EQ(a.set.set_seq, 1);
}

TEST(Service, InvalidRuleCreatesNothing) {
  TempDir dir;
  SessionService service({dir.path()});
  EXPECT_EQ(code_of([&] { service.create_session("most_beautiful"); }), ErrorCode::InvalidRule);
  EXPECT_TRUE(fs::is_empty(dir.path()));
}

TEST(Service, WrongKeepsSetRightAdvancesSolvedAfterSix) {
  TempDir dir;
  FakeClock clock;
  SessionService service({dir.path()}, clock.fn());
  const auto created = service.create_session(std::nullopt, 5);
  Session mirror("mirror", {}, 5);
  Rng rng(3);

  const auto wrong = testing::wrong_position(mirror, rng);
  ASSERT_TRUE(wrong);
  mirror.judge_click(*wrong);
  const auto refused = service.submit_click(created.session_id, *wrong);
  EXPECT_EQ(refused.feedback, Feedback::Wrong);
  EXPECT_FALSE(refused.next_set);
  EXPECT_EQ(service.current_set(created.session_id).figures, created.set.figures);

  for (int i = 1; i <= kRightsToSolve; ++i) {
    clock.now += std::chrono::seconds(3);
    const int position = mirror.current_set().designated_position;
    mirror.judge_click(position);
    const auto response = service.submit_click(created.session_id, position);
    EXPECT_EQ(response.feedback, Feedback::Right);
    if (i < kRightsToSolve) {
      ASSERT_TRUE(response.next_set);
      EXPECT_EQ(response.next_set->figures, mirror.current_set().figures);
      EXPECT_EQ(response.status, SessionStatus::Active);
    } else {
      EXPECT_FALSE(response.next_set);
      EXPECT_EQ(response.status, SessionStatus::Solved);
    }
  }
  EXPECT_EQ(code_of([&] { service.submit_click(created.session_id, 0); }), ErrorCode::SessionFinished);

  const SessionLog log = parse_log(read_file(service.log_path(created.session_id)));
  EXPECT_EQ(log.events.size(), 7u);
  EXPECT_EQ(log.events.back().t_ms, 18'000);
  EXPECT_EQ(testing::feedback_string(log.events), "wRRRRRR");
}

TEST(Service, Errors) {
  TempDir dir;
  SessionService service({dir.path()});
  EXPECT_EQ(code_of([&] { service.submit_click("nope", 0); }), ErrorCode::UnknownSession);
  EXPECT_EQ(code_of([&] { service.current_set("nope"); }), ErrorCode::UnknownSession);
  const auto created = service.create_session();
  EXPECT_EQ(code_of([&] { service.submit_click(created.session_id, 9); }), ErrorCode::PositionOutOfRange);
  EXPECT_EQ(code_of([&] { service.summary_json(created.session_id); }), ErrorCode::SeriesTooShort);
}

TEST(Service, IdleSessionsAreAbandoned) {
  TempDir dir;
  FakeClock clock;
  ServiceConfig config{dir.path()};
  config.idle_timeout = std::chrono::minutes(5);
  SessionService service(config, clock.fn());
  const auto created = service.create_session();
  clock.now += std::chrono::minutes(6);
  EXPECT_EQ(service.status(created.session_id), SessionStatus::Abandoned);
  EXPECT_EQ(code_of([&] { service.submit_click(created.session_id, 0); }), ErrorCode::SessionFinished);
}

TEST(Service, SummaryEqualsOfflineAnalysis) {
  TempDir dir;
  FakeClock clock;
  SessionService service({dir.path()}, clock.fn());
  const auto created = service.create_session(std::nullopt, 11);
  Session mirror("mirror", {}, 11);
  Rng rng(12);
  // A scripted participant: decreasing error runs, then six rights.
  for (int run : {7, 5, 6, 4, 3, 2, 3, 1, 2, 1}) {
    for (int i = 0; i < run; ++i) {
      const int position = *testing::wrong_position(mirror, rng);
      mirror.judge_click(position);
      clock.now += std::chrono::milliseconds(2000 + rng.below(3000));
      service.submit_click(created.session_id, position);
    }
    const int position = mirror.current_set().designated_position;
    mirror.judge_click(position);
    clock.now += std::chrono::milliseconds(2000 + rng.below(3000));
    service.submit_click(created.session_id, position);
  }
  while (mirror.status() == SessionStatus::Active) {
    const int position = mirror.current_set().designated_position;
    mirror.judge_click(position);
    clock.now += std::chrono::milliseconds(1500);
    service.submit_click(created.session_id, position);
  }
  ASSERT_EQ(service.status(created.session_id), SessionStatus::Solved);

  const std::string summary = service.summary_json(created.session_id);
  std::ostringstream out, err;
  const int status =
      cli::run({"analyze", service.log_path(created.session_id).string(), "--format", "json"}, out, err);
  ASSERT_EQ(status, 0) << err.str();
  EXPECT_EQ(summary, out.str());
}

TEST(Service, ConcurrentSessionsKeepSeparateLogs) {
  TempDir dir;
  SessionService service({dir.path()});
  std::vector<std::string> ids;
  for (int i = 0; i < 8; ++i) ids.push_back(service.create_session(std::nullopt, 100 + i).session_id);
  std::vector<std::thread> threads;
  for (const auto& id : ids) {
    threads.emplace_back([&service, id] {
      Rng rng(std::hash<std::string>{}(id));
      for (int i = 0; i < 50 && service.status(id) == SessionStatus::Active; ++i) {
        service.submit_click(id, rng.below(kSetSize));
      }
    });
  }
  for (auto& t : threads) t.join();
  for (const auto& id : ids) {
    const SessionLog log = parse_log(read_file(service.log_path(id)));
    EXPECT_EQ(log.header.session_id, id);
    EXPECT_FALSE(log.events.empty());
  }
}

class HttpFixture : public ::testing::Test {
 protected:
  void SetUp() override {
    service_ = std::make_unique<SessionService>(ServiceConfig{dir_.path()});
    server_ = std::make_unique<HttpServer>(*service_);
    port_ = server_->bind("127.0.0.1", 0);
    thread_ = std::thread([this] { server_->serve(); });
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
    client_->set_read_timeout(5, 0);
  }
  void TearDown() override {
    server_->stop();
    thread_.join();
  }

  json post(const std::string& path, const json& body, int expected_status) {
    auto res = client_->Post(path, body.dump(), "application/json");
    EXPECT_TRUE(res);
    if (!res) return {};
    EXPECT_EQ(res->status, expected_status) << res->body;
    return json::parse(res->body);
  }

  TempDir dir_;
  std::unique_ptr<SessionService> service_;
  std::unique_ptr<HttpServer> server_;
  std::unique_ptr<httplib::Client> client_;
  std::thread thread_;
  int port_ = 0;
};

TEST_F(HttpFixture, Health) {
  auto res = client_->Get("/healthz");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(json::parse(res->body)["status"], "ok");
}

TEST_F(HttpFixture, ErrorMapping) {
  EXPECT_EQ(post("/api/v1/sessions", {{"rule", "nonsense"}}, 400)["error"], "InvalidRule");
  EXPECT_EQ(post("/api/v1/sessions/ffff/clicks", {{"position", 1}}, 404)["error"], "UnknownSession");
  const auto created = post("/api/v1/sessions", json::object(), 201);
  const std::string base = "/api/v1/sessions/" + created["session_id"].get<std::string>();
  EXPECT_EQ(post(base + "/clicks", {{"position", 12}}, 400)["error"], "PositionOutOfRange");
  auto bad = client_->Post(base + "/clicks", "{not json", "application/json");
  ASSERT_TRUE(bad);
  EXPECT_EQ(bad->status, 400);
  auto summary = client_->Get(base + "/summary");
  ASSERT_TRUE(summary);
  EXPECT_EQ(summary->status, 422);
}

TEST_F(HttpFixture, SolvedOverHttpThenFinished) {
  const auto created = post("/api/v1/sessions", {{"seed", 31}}, 201);
  expect_whitelisted_set(created["set"]);
  const std::string base = "/api/v1/sessions/" + created["session_id"].get<std::string>();
  Session mirror("mirror", {}, 31);
  Rng rng(4);
  for (int run = 0; run < 4; ++run) {
    for (int i = 0; i < 4; ++i) {
      const int wrong = *testing::wrong_position(mirror, rng);
      mirror.judge_click(wrong);
      EXPECT_EQ(post(base + "/clicks", {{"position", wrong}}, 200)["feedback"], "Wrong choice");
    }
    const int position = mirror.current_set().designated_position;
    mirror.judge_click(position);
    EXPECT_EQ(post(base + "/clicks", {{"position", position}}, 200)["feedback"], "Right choice");
  }
  for (int i = 2; i <= kRightsToSolve; ++i) {
    const int position = mirror.current_set().designated_position;
    mirror.judge_click(position);
    const auto body = post(base + "/clicks", {{"position", position}}, 200);
    EXPECT_EQ(body["feedback"], "Right choice");
    EXPECT_EQ(body["status"], i == kRightsToSolve ? "solved" : "active");
    EXPECT_EQ(body.contains("next_set"), i < kRightsToSolve);
  }
  EXPECT_EQ(post(base + "/clicks", {{"position", 0}}, 409)["error"], "SessionFinished");
  auto summary = client_->Get(base + "/summary");
  ASSERT_TRUE(summary);
  EXPECT_EQ(summary->status, 200);
  EXPECT_EQ(summary->body, service_->summary_json(created["session_id"]));
}

TEST_F(HttpFixture, ResponsesNeverRevealRightness) {
  Rng rng(99);
  const std::vector<std::string> rules{"designated_successor", "designated_successor:5", "any_different",
                                       "all_attributes_different"};
  for (int s = 0; s < 20; ++s) {
    const auto created =
        post("/api/v1/sessions", {{"rule", rules[static_cast<std::size_t>(s) % rules.size()]}}, 201);
    const std::set<std::string> top{"session_id", "set"};
    for (const auto& [k, v] : created.items()) EXPECT_TRUE(top.count(k)) << k;
    expect_whitelisted_set(created["set"]);
    const std::string base = "/api/v1/sessions/" + created["session_id"].get<std::string>();
    for (int click = 0; click < 60; ++click) {
      auto res = client_->Post(base + "/clicks", json{{"position", rng.below(kSetSize)}}.dump(),
                               "application/json");
      ASSERT_TRUE(res);
      if (res->status == 409) break;
      ASSERT_EQ(res->status, 200);
      const auto body = json::parse(res->body);
      expect_whitelisted_click(body);
      if (body["feedback"] == "Wrong choice") {
        EXPECT_FALSE(body.contains("next_set"));
      }
      auto set = client_->Get(base + "/set");
      ASSERT_TRUE(set);
      expect_whitelisted_set(json::parse(set->body));
    }
  }
}

TEST(HttpServer, OccupiedPortFailsToBind) {
  TempDir dir;
  SessionService service({dir.path()});
  HttpServer first(service);
  const int port = first.bind("127.0.0.1", 0);
  HttpServer second(service);
  EXPECT_EQ(code_of([&] { second.bind("127.0.0.1", port); }), ErrorCode::BindFailure);
}

}  // namespace
}  // namespace rwr
