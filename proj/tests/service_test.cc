#include <atomic>
#include <filesystem>
#include <thread>

#include <unistd.h>

#include "fmt/core.h"
#include "gtest/gtest.h"
#include "httplib.h"
#include "nlohmann/json.hpp"

#include "tripplan/service/http.h"
#include "tripplan/service/service.h"

#include "support/fixtures.h"

using namespace tripplan;
using namespace tripplan::service;
using nlohmann::json;

namespace {

constexpr auto const kThreePoints =
    "lat,lon\n37.4000,-122.1000\n37.4300,-122.1000\n37.7700,-122.4000\n";

json alice_plan_request() {
  return {{"from", "H"},
          {"to", "O"},
          {"depart", "07:00:00"},
          {"constraint", test::read_fixture("alice", "constraint.txt")},
          {"preferences",
           json::parse(test::read_fixture("alice", "answers.json"))}};
}

struct http_fixture : public ::testing::Test {
  void SetUp() override {
    svc_ = std::make_unique<service::service>(test::load_fixture("alice"));
    server_ = std::make_unique<http_server>(*svc_);
    port_ = server_->bind("127.0.0.1", 0);
    ASSERT_GT(port_, 0);
    thread_ = std::thread{[this]() { server_->listen(); }};
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
  }

  void TearDown() override {
    server_->stop();
    if (thread_.joinable()) {
      thread_.join();
    }
  }

  std::pair<int, json> post(std::string const& path, std::string const& body,
                            std::string const& type = "application/json") {
    auto const res = client_->Post(path, body, type);
    EXPECT_TRUE(res);
    return {res->status, json::parse(res->body)};
  }

  std::pair<int, json> get(std::string const& path) {
    auto const res = client_->Get(path);
    EXPECT_TRUE(res);
    return {res->status, json::parse(res->body)};
  }

  std::unique_ptr<service::service> svc_;
  std::unique_ptr<http_server> server_;
  std::unique_ptr<httplib::Client> client_;
  std::thread thread_;
  int port_{-1};
};

}  // namespace

TEST_F(http_fixture, upload_datasets) {
  auto [status, body] = post("/datasets?name=crime&radius=500", "", "text/csv");
  EXPECT_EQ(400, status);
  EXPECT_EQ("error", body["status"]);

  std::tie(status, body) =
      post("/datasets?name=crime&radius=500", kThreePoints, "text/csv");
  ASSERT_EQ(201, status) << body.dump();
  EXPECT_EQ(3, body["point_count"]);
  EXPECT_EQ(1, body["version"]);
  EXPECT_EQ(500.0, body["radius_m"]);

  auto const before = svc_->overlays();
  std::tie(status, body) =
      post("/datasets?name=crime&radius=250", kThreePoints, "text/csv");
  ASSERT_EQ(201, status);
  EXPECT_EQ(2, body["version"]);
  EXPECT_EQ("crime.v2", body["id"]);

  // snapshots taken before the upload keep the old version
  EXPECT_EQ(1U, before->at("crime")->version_);
  EXPECT_EQ(500.0, before->at("crime")->radius_m_);
  EXPECT_EQ(2U, svc_->overlays()->at("crime")->version_);

  std::tie(status, body) = get("/datasets");
  EXPECT_EQ(200, status);
  ASSERT_EQ(1U, body["datasets"].size());
  EXPECT_EQ(2, body["datasets"][0]["version"]);
}

TEST_F(http_fixture, upload_validation) {
  EXPECT_EQ(422, post("/datasets?name=crime&radius=0", kThreePoints,
                      "text/csv").first);
  EXPECT_EQ(400, post("/datasets?name=crime&radius=abc", kThreePoints,
                      "text/csv").first);
  EXPECT_EQ(400, post("/datasets?name=../x", kThreePoints, "text/csv").first);
  EXPECT_EQ(400,
            post("/datasets?name=crime", "lat,lon\n95,0\n", "text/csv").first);
}

TEST_F(http_fixture, elicitation) {
  auto [status, body] = get("/elicitation/questions");
  EXPECT_EQ(200, status);
  EXPECT_FALSE(body["questions"].empty());

  std::tie(status, body) =
      post("/elicitation/answers", test::read_fixture("alice", "answers.json"));
  ASSERT_EQ(201, status) << body.dump();
  auto const id = body["profile_id"].get<std::string>();
  EXPECT_EQ(3.0, body["profile"]["alpha"]["walk"]);
  EXPECT_EQ(1.0, body["profile"]["alpha"]["car"]);
  EXPECT_EQ(20.0, body["profile"]["beta_time"]);

  std::tie(status, body) = get("/profiles/" + id);
  EXPECT_EQ(200, status);
  EXPECT_EQ(0.25, body["profile"]["alpha"]["public"]);
  EXPECT_EQ(404, get("/profiles/nope").first);

  auto ones = json::parse(test::read_fixture("alice", "answers.json"));
  for (auto& [m, v] : ones["hours_equivalent"].items()) {
    v = 1;
  }
  std::tie(status, body) = post("/elicitation/answers", ones.dump());
  ASSERT_EQ(201, status);
  for (auto const& [m, v] : body["profile"]["alpha"].items()) {
    EXPECT_EQ(1.0, v) << m;
  }

  auto missing = json::parse(test::read_fixture("alice", "answers.json"));
  missing.erase("dollars_per_hour");
  std::tie(status, body) = post("/elicitation/answers", missing.dump());
  EXPECT_EQ(422, status);
  EXPECT_EQ("dollars_per_hour", body["field"]);

  EXPECT_EQ(400, post("/elicitation/answers", "{").first);
}

TEST_F(http_fixture, plan_ok) {
  auto const [status, body] = post("/plan", alice_plan_request().dump());
  ASSERT_EQ(200, status) << body.dump();
  EXPECT_EQ("ok", body["status"]);
  EXPECT_EQ(3200, body["itinerary"]["total_cost_cents"]);
  ASSERT_EQ(3U, body["itinerary"]["legs"].size());
  EXPECT_EQ("bike", body["itinerary"]["legs"][0]["mode"]);
  EXPECT_EQ("public", body["itinerary"]["legs"][1]["mode"]);
  EXPECT_EQ("walk", body["itinerary"]["legs"][2]["mode"]);
  EXPECT_EQ("FeatureCollection", body["geometry"]["type"]);
  EXPECT_TRUE(body.contains("request_id"));
}

TEST_F(http_fixture, plan_with_stored_profile) {
  auto const [s, answers] =
      post("/elicitation/answers", test::read_fixture("alice", "answers.json"));
  ASSERT_EQ(201, s);
  auto req = alice_plan_request();
  req.erase("preferences");
  req["profile_id"] = answers["profile_id"];
  auto const [status, body] = post("/plan", req.dump());
  ASSERT_EQ(200, status) << body.dump();
  EXPECT_EQ(3200, body["itinerary"]["total_cost_cents"]);
}

TEST_F(http_fixture, plan_errors) {
  auto req = alice_plan_request();
  req["constraint"] = "G(";
  auto [status, body] = post("/plan", req.dump());
  EXPECT_EQ(422, status);
  EXPECT_EQ("SyntaxError", body["error"]);
  EXPECT_EQ(2, body["position"]);

  req = alice_plan_request();
  req.erase("preferences");
  req["profile_id"] = "p999";
  EXPECT_EQ(404, post("/plan", req.dump()).first);

  req = alice_plan_request();
  req["to"] = "Nowhere";
  std::tie(status, body) = post("/plan", req.dump());
  EXPECT_EQ(404, status);
  EXPECT_EQ("UnknownEndpoint", body["error"]);

  req = alice_plan_request();
  req["constraint"] = "G(aux_here(noise) <= 1)";
  std::tie(status, body) = post("/plan", req.dump());
  EXPECT_EQ(404, status);
  EXPECT_EQ("UnknownDataset", body["error"]);

  req = alice_plan_request();
  req["depart"] = "25:00:00";
  EXPECT_EQ(400, post("/plan", req.dump()).first);

  EXPECT_EQ(400, post("/plan", "not json").first);
}

TEST_F(http_fixture, plan_infeasible) {
  auto req = alice_plan_request();
  req["constraint"] = "G(clock <= 600)";
  auto const [status, body] = post("/plan", req.dump());
  EXPECT_EQ(200, status);
  EXPECT_EQ("infeasible", body["status"]);
  EXPECT_FALSE(body.contains("itinerary"));
}

TEST_F(http_fixture, default_constraint_toggle) {
  auto req = alice_plan_request();
  auto [status, body] = post("/plan", req.dump());
  ASSERT_EQ(200, status) << body.dump();
  auto const with = body["itinerary"]["constraint"].get<std::string>();
  EXPECT_NE(std::string::npos, with.find("AFTER"));

  req["include_default_constraint"] = false;
  std::tie(status, body) = post("/plan", req.dump());
  ASSERT_EQ(200, status) << body.dump();
  auto const without = body["itinerary"]["constraint"].get<std::string>();
  EXPECT_EQ(std::string::npos, without.find("AFTER"));
}

TEST_F(http_fixture, concurrent_plans_during_uploads) {
  ASSERT_EQ(201, post("/datasets?name=crime&radius=300", kThreePoints,
                      "text/csv").first);
  auto req = alice_plan_request();
  req["datasets"] = {"crime"};
  auto const doc = req.dump();

  auto failures = std::atomic<int>{0};
  auto workers = std::vector<std::thread>{};
  for (auto t = 0; t != 4; ++t) {
    workers.emplace_back([&]() {
      auto c = httplib::Client{"127.0.0.1", port_};
      for (auto i = 0; i != 10; ++i) {
        auto const res = c.Post("/plan", doc, "application/json");
        if (!res || res->status != 200) {
          ++failures;
        }
      }
    });
  }
  for (auto i = 0; i != 10; ++i) {
    svc_->upload_dataset("crime", "300", kThreePoints);
  }
  for (auto& w : workers) {
    w.join();
  }
  EXPECT_EQ(0, failures.load());
  EXPECT_EQ(11U, svc_->overlays()->at("crime")->version_);
}

TEST(service, persistence) {
  auto const dir = std::filesystem::temp_directory_path() /
                   fmt::format("tripplan-test-{}", ::getpid());
  std::filesystem::remove_all(dir);
  auto id = std::string{};
  {
    auto s = service::service{test::load_fixture("alice"), dir};
    ASSERT_EQ(201, s.upload_dataset("crime", "500", kThreePoints).status_);
    ASSERT_EQ(201, s.upload_dataset("crime", "400", kThreePoints).status_);
    auto const r =
        s.submit_answers(test::read_fixture("alice", "answers.json"));
    ASSERT_EQ(201, r.status_);
    id = r.body_["profile_id"];
  }
  auto s = service::service{test::load_fixture("alice"), dir};
  auto const o = s.overlays();
  ASSERT_TRUE(o->contains("crime"));
  EXPECT_EQ(2U, o->at("crime")->version_);
  EXPECT_EQ(400.0, o->at("crime")->radius_m_);
  EXPECT_EQ(3U, o->at("crime")->point_count_);
  auto const p = s.profile(id);
  ASSERT_TRUE(p.has_value());
  EXPECT_EQ(20.0, p->beta_time_);

  // new profile ids do not collide with reloaded ones
  auto const r = s.submit_answers(test::read_fixture("alice", "answers.json"));
  EXPECT_NE(id, r.body_["profile_id"]);
  std::filesystem::remove_all(dir);
}
