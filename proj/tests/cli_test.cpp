#include <csignal>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "httplib.h"
#include "json.hpp"
#include "rwr/cli.hpp"
#include "rwr/http_server.hpp"

namespace rwr {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Outcome {
  int status = 0;
  std::string out;
  std::string err;
};

Outcome run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Outcome o;
  o.status = cli::run(args, out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() /
           (std::string("rwr-cli-") + info->name() + "-" + std::to_string(::getpid()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::vector<std::string> write_fixtures() {
    std::vector<std::string> paths;
    for (const auto& spec : testing::table_fixtures()) {
      const fs::path path = dir_ / (spec.id + ".rwrlog");
      std::ofstream(path, std::ios::binary) << format_log(testing::build_fixture(spec));
      paths.push_back(path.string());
    }
    return paths;
  }

  fs::path dir_;
};

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run_cli({}).status, cli::kExitUsage);
  EXPECT_EQ(run_cli({"frobnicate"}).status, cli::kExitUsage);
  EXPECT_EQ(run_cli({"baseline", "--sets", "many"}).status, cli::kExitUsage);
  EXPECT_EQ(run_cli({"--help"}).status, cli::kExitOk);
}

TEST_F(CliTest, BaselineTable) {
  const auto o = run_cli({"baseline", "--sets", "1000000", "--seed", "3"});
  ASSERT_EQ(o.status, 0) << o.err;
  std::smatch m;
  ASSERT_TRUE(std::regex_search(o.out, m, std::regex(R"(p_1\s+([0-9.]+)\s+([0-9.]+)\s+0\.735)")));
  EXPECT_NEAR(std::stod(m[1]), 0.7394, 0.002);
  EXPECT_EQ(m[2], "0.739395");
  EXPECT_NE(o.out.find("mean_errors_random"), std::string::npos);
  EXPECT_EQ(run_cli({"baseline", "--sets", "1000000", "--seed", "3"}).out, o.out);
}

TEST_F(CliTest, BaselineWithoutClosedForm) {
  const auto o = run_cli({"baseline", "--rule", "any_different", "--sets", "20000"});
  ASSERT_EQ(o.status, 0) << o.err;
  std::smatch m;
  ASSERT_TRUE(std::regex_search(o.out, m, std::regex(R"(mean_right\s+([0-9.]+)\s+n/a)")));
  EXPECT_NEAR(std::stod(m[1]), 9.0 - 8.0 / 27.0, 0.02);
  EXPECT_NE(run_cli({"baseline", "--rule", "bogus"}).status, 0);
}

TEST_F(CliTest, SimulateZeroRuns) {
  const auto o = run_cli({"simulate", "--preset", "random", "--runs", "0", "--out-dir", dir_.string()});
  ASSERT_EQ(o.status, 0) << o.err;
  const auto summary = json::parse(read_file(dir_ / "summary.json"));
  EXPECT_EQ(summary["runs"], 0);
  EXPECT_TRUE(summary["solve_rate"].is_null());
  EXPECT_TRUE(summary["mean_increment"]["per_run"].empty());
}

TEST_F(CliTest, SimulateIsReproducible) {
  const fs::path a = dir_ / "a", b = dir_ / "b";
  for (const auto& out : {a, b}) {
    const auto o = run_cli({"simulate", "--preset", "random", "--runs", "1000", "--seed", "17",
                            "--out-dir", out.string()});
    ASSERT_EQ(o.status, 0) << o.err;
  }
  EXPECT_EQ(read_file(a / "summary.json"), read_file(b / "summary.json"));
  for (const int i : {0, 499, 999}) {
    const auto name = "run-" + std::string(i < 10 ? "000" : i < 100 ? "00" : i < 1000 ? "0" : "") +
                      std::to_string(i) + ".rwrlog";
    EXPECT_EQ(read_file(a / name), read_file(b / name)) << name;
  }
}

TEST_F(CliTest, SimulateSolverDriftsDown) {
  const auto o = run_cli({"simulate", "--preset", "solver", "--runs", "50", "--seed", "2",
                          "--out-dir", dir_.string()});
  ASSERT_EQ(o.status, 0) << o.err;
  const auto summary = json::parse(read_file(dir_ / "summary.json"));
  EXPECT_LT(summary["mean_increment"]["mean"].get<double>(), 0.0);
  // Simulated logs go straight into the analyzer.
  const auto analyzed = run_cli({"analyze", (dir_ / "run-0000.rwrlog").string(), "--format", "csv"});
  EXPECT_EQ(analyzed.status, 0) << analyzed.err;
}

TEST_F(CliTest, AnalyzeBatchTable) {
  std::vector<std::string> args{"analyze"};
  for (const auto& p : write_fixtures()) args.push_back(p);
  args.insert(args.end(), {"--format", "json", "--out", (dir_ / "report.json").string()});
  const auto o = run_cli(args);
  ASSERT_EQ(o.status, 0) << o.err;
  std::istringstream table(o.out);
  std::string line;
  std::getline(table, line);
  EXPECT_EQ(line.substr(0, 2), "ID");
  const std::vector<std::tuple<std::string, std::string, std::string, std::string>> expected{
      {"K", "21.1", "209", "yes"}, {"M", "48.9", "39", "yes"}, {"B", "13.5", "83", "yes"},
      {"Ch", "16.7", "71", "no"},  {"G", "14.4", "219", "no"}};
  for (const auto& [id, minutes, clicks, solved] : expected) {
    ASSERT_TRUE(std::getline(table, line));
    std::istringstream row(line);
    std::string a, b, c, d;
    row >> a >> b >> c >> d;
    EXPECT_EQ(a, id);
    EXPECT_EQ(b, minutes);
    EXPECT_EQ(c, clicks);
    EXPECT_EQ(d, solved);
  }
  EXPECT_EQ(json::parse(read_file(dir_ / "report.json"))["sessions"].size(), 5u);
}

TEST_F(CliTest, AnalyzeCsvAndJsonAgree) {
  const auto paths = write_fixtures();
  const auto csv = run_cli({"analyze", paths[0], "--format", "csv"});
  const auto js = run_cli({"analyze", paths[0], "--format", "json"});
  ASSERT_EQ(csv.status, 0);
  ASSERT_EQ(js.status, 0);
  const auto runs = json::parse(js.out)["sessions"][0]["runs"];
  std::istringstream in(csv.out);
  std::string line;
  std::getline(in, line);
  std::size_t i = 0;
  while (std::getline(in, line) && line.rfind("K,run,", 0) == 0) {
    const auto x = line.substr(line.find(',', 6) + 1);
    EXPECT_EQ(std::stoi(x), runs[i++].get<int>());
  }
  EXPECT_EQ(i, runs.size());
}

TEST_F(CliTest, AnalyzeReportsCorruptFileAndContinues) {
  auto paths = write_fixtures();
  const fs::path corrupt = dir_ / "corrupt.rwrlog";
  std::ofstream(corrupt) << "RWRLOG v1 session=x seed=1 rule=designated_successor started=x\n"
                         << "1,100,1,9,circle,dark,small,W\n";
  paths.insert(paths.begin() + 2, corrupt.string());
  std::vector<std::string> args{"analyze"};
  args.insert(args.end(), paths.begin(), paths.end());
  args.insert(args.end(), {"--out", (dir_ / "r.csv").string(), "--format", "csv"});
  const auto o = run_cli(args);
  EXPECT_NE(o.status, 0);
  EXPECT_NE(o.err.find("corrupt.rwrlog"), std::string::npos);
  EXPECT_NE(o.err.find("PositionOutOfRange"), std::string::npos);
  EXPECT_NE(o.out.find("G "), std::string::npos);
  EXPECT_EQ(std::count(o.out.begin(), o.out.end(), '\n'), 6);

  EXPECT_EQ(run_cli({"analyze", (dir_ / "missing.rwrlog").string()}).status, cli::kExitIo);
  EXPECT_EQ(run_cli({"analyze", paths[0], "--format", "pdf"}).status, cli::kExitUsage);
}

// The serve subcommand as a separate process.
class ServeProcess {
 public:
  explicit ServeProcess(const std::vector<std::string>& args) {
    int pipe_fd[2];
    if (pipe(pipe_fd) != 0) throw std::runtime_error("pipe");
    pid_ = fork();
    if (pid_ == 0) {
      dup2(pipe_fd[1], STDOUT_FILENO);
      close(pipe_fd[0]);
      std::vector<char*> argv{const_cast<char*>(RWR_BINARY)};
      for (const auto& a : args) argv.push_back(const_cast<char*>(a.c_str()));
      argv.push_back(nullptr);
      execv(RWR_BINARY, argv.data());
      _exit(127);
    }
    close(pipe_fd[1]);
    out_ = fdopen(pipe_fd[0], "r");
  }
  ~ServeProcess() {
    if (pid_ > 0 && !waited_) {
      kill(pid_, SIGKILL);
      waitpid(pid_, nullptr, 0);
    }
    if (out_) fclose(out_);
  }

  std::string first_line() {
    char buffer[512] = {};
    if (!fgets(buffer, sizeof buffer, out_)) return {};
    return buffer;
  }

  int interrupt_and_wait() {
    kill(pid_, SIGINT);
    return wait();
  }

  int wait() {
    int status = 0;
    waitpid(pid_, &status, 0);
    waited_ = true;
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

 private:
  pid_t pid_ = -1;
  FILE* out_ = nullptr;
  bool waited_ = false;
};

int port_of(const std::string& line) {
  std::smatch m;
  if (!std::regex_search(line, m, std::regex(R"(listening on [0-9.]+:(\d+))"))) return -1;
  return std::stoi(m[1]);
}

TEST_F(CliTest, ServeAnswersHealthAndStopsCleanly) {
  ServeProcess serve({"serve", "--port", "0", "--data-dir", dir_.string()});
  const auto started = std::chrono::steady_clock::now();
  const int port = port_of(serve.first_line());
  ASSERT_GT(port, 0);
  httplib::Client client("127.0.0.1", port);
  auto health = client.Get("/healthz");
  ASSERT_TRUE(health);
  EXPECT_EQ(health->status, 200);
  EXPECT_LT(std::chrono::steady_clock::now() - started, std::chrono::seconds(1));

  // Interrupt with an active session; its log must end on a full line.
  auto created = client.Post("/api/v1/sessions", "{}", "application/json");
  ASSERT_TRUE(created);
  const std::string id = json::parse(created->body)["session_id"];
  for (int i = 0; i < 5; ++i) {
    client.Post("/api/v1/sessions/" + id + "/clicks", json{{"position", i}}.dump(), "application/json");
  }
  EXPECT_EQ(serve.interrupt_and_wait(), 0);
  const std::string log = read_file(dir_ / (id + ".rwrlog"));
  ASSERT_FALSE(log.empty());
  EXPECT_EQ(log.back(), '\n');
  EXPECT_EQ(parse_log(log).events.size(), 5u);
}

TEST_F(CliTest, ServeOnOccupiedPortFails) {
  SessionService service({dir_ / "holder"});
  HttpServer holder(service);
  const int port = holder.bind("127.0.0.1", 0);
  ServeProcess serve({"serve", "--port", std::to_string(port), "--data-dir", dir_.string()});
  EXPECT_EQ(serve.wait(), cli::kExitIo);
}

}  // namespace
}  // namespace rwr
