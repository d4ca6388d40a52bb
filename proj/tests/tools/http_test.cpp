#include <filesystem>
#include <thread>

#include <gtest/gtest.h>
#include <httplib.h>
#include <nlohmann/json.hpp>

#include "calib/api/service.hpp"
#include "calib/error.hpp"
#include "calib/session/store.hpp"
#include "calib/trainer/http_server.hpp"

namespace calib::trainer {
namespace {

using nlohmann::json;

TEST(ListenAddress, Parses) {
  auto a = parse_listen_address("0.0.0.0:9000");
  EXPECT_EQ(a.host, "0.0.0.0");
  EXPECT_EQ(a.port, 9000);
  a = parse_listen_address(":81");
  EXPECT_EQ(a.host, "127.0.0.1");
  EXPECT_EQ(a.port, 81);
  EXPECT_EQ(parse_listen_address("8081").port, 8081);
  EXPECT_THROW(parse_listen_address("host:"), Error);
  EXPECT_THROW(parse_listen_address("host:99999"), Error);
  EXPECT_THROW(parse_listen_address("x:y"), Error);
}

class HttpTest : public ::testing::Test {
 protected:
  void SetUp() override {
    for (auto& deck : api::load_deck_directory(CALIB_DECK_DIR).decks) store_.attach_deck(std::move(deck));
    port_ = frontend_.bind({"127.0.0.1", 0});
    thread_ = std::thread([this] { frontend_.serve(); });
    frontend_.wait_until_ready();
  }
  void TearDown() override {
    frontend_.stop();
    thread_.join();
  }

  httplib::Client client() { return httplib::Client("127.0.0.1", port_); }

  SessionStore store_;
  api::ApiService service_{store_};
  HttpFrontend frontend_{service_};
  int port_ = 0;
  std::thread thread_;
};

TEST_F(HttpTest, FullRoundTrip) {
  auto cli = client();
  auto res = cli.Get("/health");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_NE(res->get_header_value("Content-Type").find("application/json"), std::string::npos);
  EXPECT_EQ(json::parse(res->body)["status"], "ok");

  res = cli.Post("/sessions", R"({"deck_id":"true-false-basics","seed":2})", "application/json");
  ASSERT_TRUE(res);
  ASSERT_EQ(res->status, 201);
  const std::string id = json::parse(res->body)["session_id"];

  res = cli.Get("/sessions/" + id + "/next");
  ASSERT_TRUE(res);
  const std::string qid = json::parse(res->body)["question"]["id"];

  const json answer = {{"question_id", qid}, {"prediction", {{"selection", true}, {"confidence", 0.75}}}};
  res = cli.Post("/sessions/" + id + "/answers", answer.dump(), "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  res = cli.Post("/sessions/" + id + "/answers", answer.dump(), "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 409);
  EXPECT_EQ(json::parse(res->body)["error"]["code"], "duplicate_answer");

  res = cli.Get("/sessions/" + id + "/calibration?edges=0.5,0.8,1");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(json::parse(res->body)["bins"][0]["count"], 1);
}

TEST_F(HttpTest, ErrorsKeepJsonBodies) {
  auto cli = client();
  auto res = cli.Delete("/decks");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 405);
  EXPECT_EQ(json::parse(res->body)["error"]["code"], "method_not_allowed");
  res = cli.Get("/missing");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 404);
  res = cli.Post("/sessions", "not json", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 400);
  EXPECT_EQ(json::parse(res->body)["error"]["code"], "invalid_json");
}

}  // namespace
}  // namespace calib::trainer
