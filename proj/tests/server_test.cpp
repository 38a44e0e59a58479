#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "pal/server.hpp"
#include "support.hpp"

namespace pal {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using server::Config;
using server::Reply;

Config corpus_config() {
  Config c;
  c.examples_dir = testing::corpus_dir();
  return c;
}

Reply process(const json& request, const Config& config = corpus_config()) {
  return server::handle_process(request.dump(), config);
}

// A scratch directory removed at the end of the test.
struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  void write(const fs::path& rel, std::string_view text) const {
    fs::create_directories((path / rel).parent_path());
    std::ofstream(path / rel, std::ios::binary) << text;
  }
};

TEST(Process, EmptyProgram) {
  const Reply r = process({{"program", ""}});
  EXPECT_EQ(r.status, 200);
  EXPECT_EQ(r.content_type, "application/json");
  const json body = json::parse(r.body);
  EXPECT_EQ(body["output"], "");
  EXPECT_EQ(body["exitCode"], 0);
}

TEST(Process, SyntaxErrorIsPartOfTheOutput) {
  const Reply r = process({{"program", "rules loc(B):="}});
  EXPECT_EQ(r.status, 200);
  const json body = json::parse(r.body);
  EXPECT_EQ(body["exitCode"], 1);
  const std::string out = body["output"];
  EXPECT_NE(out.find("error:"), std::string::npos);
  EXPECT_NE(out.find("(line 1, column 15)"), std::string::npos);
}

TEST(Process, BlocksSession) {
  const json body = json::parse(process({{"program", testing::corpus("blocks")}}).body);
  EXPECT_EQ(body["output"], testing::run_text(testing::corpus("blocks")).output);
  EXPECT_EQ(body["exitCode"], 0);
}

TEST(Process, MatchesTheCommandLineForEveryCorpusFile) {
  for (const auto& entry : fs::directory_iterator(testing::corpus_dir())) {
    if (entry.path().extension() != ".pal") continue;
    const std::string source = testing::read_file(entry.path());
    const json body = json::parse(process({{"program", source}}).body);
    const auto cli = testing::run_text(source);
    EXPECT_EQ(body["output"], cli.output) << entry.path();
    EXPECT_EQ(body["exitCode"], cli.exit_code) << entry.path();
  }
}

TEST(Process, RequestsAreIndependent) {
  const std::string a = testing::corpus("yale");
  const std::string b = "fluents p; initially p; query p?";
  const std::string first = process({{"program", a}}).body;
  EXPECT_EQ(json::parse(process({{"program", b}}).body)["output"], "yes\n");
  EXPECT_EQ(process({{"program", a}}).body, first);
}

TEST(Process, SolutionsCap) {
  const std::string program = std::string(testing::kBlocksDecls) +
                              "options not concurrent; initially loc(B):=table,free(B); query true;not free(3)?";
  const json capped = json::parse(process({{"program", program}, {"solutions", 3}}).body);
  EXPECT_NE(capped["output"].get<std::string>().find("\n3 solutions\n"), std::string::npos);
  const json null_cap = json::parse(process({{"program", program}, {"solutions", nullptr}}).body);
  EXPECT_NE(null_cap["output"].get<std::string>().find("\n4 solutions\n"), std::string::npos);
}

TEST(Process, TimeLimitMarksPartialOutput) {
  Config c = corpus_config();
  c.time_limit = std::chrono::milliseconds(50);
  const std::string program = std::string(testing::kBlocksDecls) +
                              "initially loc(B):=table,free(B); do {carry(1):=2;} query ; ; ; ; ; ; false?";
  const json body = json::parse(process({{"program", program}}, c).body);
  EXPECT_EQ(body["exitCode"], kExitTimeout);
  const std::string out = body["output"];
  EXPECT_EQ(out.rfind("1)\ncarry(1):=2\n", 0), 0u);
  EXPECT_TRUE(out.ends_with("timeout: processing time limit exceeded\n"));
}

TEST(Process, MalformedRequests) {
  const Config c = corpus_config();
  EXPECT_EQ(server::handle_process("{not json", c).status, 400);
  EXPECT_EQ(server::handle_process("[1,2]", c).status, 400);
  EXPECT_EQ(server::handle_process("\"text\"", c).status, 400);
  EXPECT_EQ(server::handle_process(R"({"program": 3})", c).status, 400);
  EXPECT_EQ(server::handle_process(R"({"program": "", "solutions": 0})", c).status, 400);
  EXPECT_EQ(server::handle_process(R"({"program": "", "solutions": "2"})", c).status, 400);
  EXPECT_EQ(server::handle_process(R"({"program": "", "solutions": 1.5})", c).status, 400);
  EXPECT_EQ(server::handle_process("{\"program\": \"\xff\"}", c).status, 400);
  EXPECT_EQ(server::handle_process("{\"program\": \"\xe2\x82\"}", c).status, 400);
  EXPECT_EQ(server::handle_process("{\"program\": \"\xed\xa0\x80\"}", c).status, 400);
  EXPECT_EQ(server::handle_process(R"({"source": ""})", c).status, 422);
  const Reply r = server::handle_process(R"({})", c);
  EXPECT_EQ(r.status, 422);
  EXPECT_TRUE(json::parse(r.body).contains("error"));
}

TEST(Process, Utf8InCommentsIsAccepted) {
  const Reply r = process({{"program", "% caf\xc3\xa9 \xe2\x9c\x93\nfluents p; initially p; query p?"}});
  EXPECT_EQ(r.status, 200);
  EXPECT_EQ(json::parse(r.body)["output"], "yes\n");
}

TEST(Process, OversizedPrograms) {
  Config c = corpus_config();
  c.max_program_bytes = 100;
  EXPECT_EQ(process({{"program", std::string(101, ' ')}}, c).status, 413);
  EXPECT_EQ(process({{"program", std::string(100, ' ')}}, c).status, 200);
  EXPECT_EQ(server::handle_process(std::string(100 + 4097, ' '), c).status, 413);
}

TEST(Examples, CorpusListing) {
  const Reply r = server::handle_examples(corpus_config());
  EXPECT_EQ(r.status, 200);
  const json list = json::parse(r.body);
  ASSERT_EQ(list.size(), 5u);
  const std::vector<std::string> names = {"blocks", "counter", "missionaries", "suitcase", "yale"};
  for (std::size_t i = 0; i < names.size(); ++i) {
    EXPECT_EQ(list[i]["name"], names[i]);
    EXPECT_EQ(list[i]["source"], testing::corpus(names[i]));
  }
}

TEST(Examples, EmptyAndMissingDirectories) {
  TempDir dir("pal_examples_test");
  dir.write("notes.txt", "not an example");
  Config c;
  c.examples_dir = dir.path;
  const Reply empty = server::handle_examples(c);
  EXPECT_EQ(empty.status, 200);
  EXPECT_EQ(empty.body, "[]");
  c.examples_dir = dir.path / "missing";
  EXPECT_EQ(server::handle_examples(c).status, 500);
}

TEST(Static, FallbackPageWithoutAPlayground) {
  const Reply r = server::handle_static("/", corpus_config());
  EXPECT_EQ(r.status, 200);
  EXPECT_EQ(r.content_type.rfind("text/html", 0), 0u);
  EXPECT_NE(r.body.find("/process"), std::string::npos);
  EXPECT_EQ(server::handle_static("/assets/app.js", corpus_config()).status, 404);
}

TEST(Static, PlaygroundFiles) {
  TempDir dir("pal_webui_test");
  dir.write("index.html", "<html>playground</html>");
  dir.write("assets/app.js", "console.log(1);");
  dir.write("secret.txt", "hidden");
  Config c = corpus_config();
  c.webui_dir = dir.path;
  EXPECT_EQ(server::handle_static("/", c).body, "<html>playground</html>");
  const Reply js = server::handle_static("/assets/app.js", c);
  EXPECT_EQ(js.status, 200);
  EXPECT_EQ(js.body, "console.log(1);");
  EXPECT_NE(js.content_type.find("javascript"), std::string::npos);
  EXPECT_EQ(server::handle_static("/assets/../secret.txt", c).status, 404);
  EXPECT_EQ(server::handle_static("/assets/missing.js", c).status, 404);
  EXPECT_EQ(server::handle_static("/assets/", c).status, 404);
}

TEST(Address, Parsing) {
  EXPECT_EQ(server::parse_address("127.0.0.1:8080"), (std::pair<std::string, int>{"127.0.0.1", 8080}));
  EXPECT_EQ(server::parse_address(":9000"), (std::pair<std::string, int>{"0.0.0.0", 9000}));
  EXPECT_EQ(server::parse_address("7000"), (std::pair<std::string, int>{"0.0.0.0", 7000}));
  EXPECT_THROW(server::parse_address("host:"), std::invalid_argument);
  EXPECT_THROW(server::parse_address("host:99999"), std::invalid_argument);
  EXPECT_THROW(server::parse_address("host:http"), std::invalid_argument);
}

// A real server on a loopback port.
class Http : public ::testing::Test {
 protected:
  void SetUp() override {
    server::install(http_, corpus_config());
    port_ = http_.bind_to_any_port("127.0.0.1");
    ASSERT_GT(port_, 0);
    thread_ = std::thread([this] { http_.listen_after_bind(); });
    http_.wait_until_ready();
  }
  void TearDown() override {
    http_.stop();
    if (thread_.joinable()) thread_.join();
  }
  httplib::Client client() const { return httplib::Client("127.0.0.1", port_); }

  httplib::Server http_;
  int port_ = 0;
  std::thread thread_;
};

TEST_F(Http, ProcessRoundTrip) {
  auto c = client();
  const auto res = c.Post("/process", json{{"program", testing::corpus("blocks")}}.dump(), "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  const json body = json::parse(res->body);
  EXPECT_EQ(body["output"], testing::run_text(testing::corpus("blocks")).output);
  EXPECT_EQ(body["exitCode"], 0);

  const auto bad = c.Post("/process", "{", "application/json");
  ASSERT_TRUE(bad);
  EXPECT_EQ(bad->status, 400);
}

TEST_F(Http, ExamplesAndPages) {
  auto c = client();
  const auto examples = c.Get("/examples");
  ASSERT_TRUE(examples);
  EXPECT_EQ(examples->status, 200);
  EXPECT_EQ(json::parse(examples->body).size(), 5u);
  const auto page = c.Get("/");
  ASSERT_TRUE(page);
  EXPECT_EQ(page->status, 200);
  const auto missing = c.Get("/nowhere");
  ASSERT_TRUE(missing);
  EXPECT_EQ(missing->status, 404);
}

TEST_F(Http, ConcurrentRequestsAreIndependent) {
  const std::string yale = json{{"program", testing::corpus("yale")}}.dump();
  const std::string expected = server::handle_process(yale, corpus_config()).body;
  std::vector<std::thread> workers;
  std::vector<std::string> bodies(8);
  for (std::size_t i = 0; i < bodies.size(); ++i)
    workers.emplace_back([&, i] {
      auto c = client();
      if (auto res = c.Post("/process", yale, "application/json")) bodies[i] = res->body;
    });
  for (auto& w : workers) w.join();
  for (const auto& b : bodies) EXPECT_EQ(b, expected);
}

}  // namespace
}  // namespace pal
