#include <gtest/gtest.h>

#include <atomic>
#include <chrono>
#include <future>
#include <thread>

#include <httplib.h>

#include "navcon/service/api.hpp"
#include "navcon/service/server.hpp"
#include "support.hpp"

using namespace navcon;
using namespace navcon::service;
using navcon::testing::data_dir;

namespace {

world::World scene_world(const std::string& name) { return world::World::load(data_dir() / "scenes" / (name + ".json")); }

std::unique_ptr<SessionHub> make_hub(std::initializer_list<const char*> scenes = {"theater"}) {
  auto hub = std::make_unique<SessionHub>(pipeline::PipelineConfig{},
                                          pipeline::load_corpus(data_dir() / "corpus" / "sim_corpus.json"));
  for (const auto* s : scenes) hub->add(scene_world(s));
  return hub;
}

ApiResponse post(SessionHub& hub, const std::string& body) { return handle_api(hub, {"POST", "/api/command", body}); }
ApiResponse get(SessionHub& hub, const std::string& target) { return handle_api(hub, {"GET", target, ""}); }

}  // namespace

TEST(HandleApi, PostRunsTheCommand) {
  auto hub = make_hub();
  const auto res = post(*hub, R"({"text":"walk to the table","scene":"theater"})");
  ASSERT_EQ(res.status, 200) << res.body.dump();
  EXPECT_EQ(res.body["command"]["fixture"], "theater/walk_to_the_table");
  for (const auto* stage : {"code", "od", "wp", "path_exec"}) EXPECT_TRUE(res.body["stages"][stage]["pass"]) << stage;
  EXPECT_FALSE(res.body.contains("timings_ms"));
}

TEST(HandleApi, UnknownCommandFailsCodeWithReason) {
  auto hub = make_hub();
  const auto res = post(*hub, R"({"text":"juggle three oranges"})");
  ASSERT_EQ(res.status, 200);
  EXPECT_FALSE(res.body["stages"]["code"]["pass"]);
  EXPECT_NE(res.body["stages"]["code"]["detail"].get<std::string>().find("missing fixture"), std::string::npos);
}

TEST(HandleApi, MalformedBodiesAreRejected) {
  auto hub = make_hub();
  for (const auto* body : {"not json", "[]", R"({"text":5})", R"({"text":""})", R"({"scene":"theater"})",
                           R"({"text":"x","scene":3})", R"({"text":"x","representation":"C"})"})
    EXPECT_EQ(post(*hub, body).status, 400) << body;
}

TEST(HandleApi, RoutingErrors) {
  auto hub = make_hub();
  EXPECT_EQ(post(*hub, R"({"text":"x","scene":"atlantis"})").status, 404);
  EXPECT_EQ(get(*hub, "/api/nothing").status, 404);
  EXPECT_EQ(get(*hub, "/api/command").status, 405);
  EXPECT_EQ(handle_api(*hub, {"POST", "/api/state", "{}"}).status, 405);
  EXPECT_EQ(get(*hub, "/api/state?scene=atlantis").status, 404);
}

TEST(HandleApi, BusySessionAnswers409) {
  auto hub = make_hub();
  hub->find("theater")->busy = true;
  EXPECT_EQ(post(*hub, R"({"text":"walk to the table"})").status, 409);
  hub->find("theater")->busy = false;
  EXPECT_EQ(post(*hub, R"({"text":"walk to the table"})").status, 200);
}

TEST(HandleApi, SessionStaysBusyUntilEventsAreReleased) {
  auto hub = make_hub();
  std::function<void()> pending;
  std::size_t delivered = 0;
  hub->set_event_sink([&](const std::string& scene, std::vector<pipeline::FollowEvent> events, std::function<void()> release) {
    EXPECT_EQ(scene, "theater");
    delivered = events.size();
    pending = std::move(release);
  });
  EXPECT_EQ(post(*hub, R"({"text":"Go to the fire extinguisher"})").status, 200);
  EXPECT_GT(delivered, 10u);
  EXPECT_TRUE(get(*hub, "/api/state").body["busy"]);
  EXPECT_EQ(post(*hub, R"({"text":"walk to the table"})").status, 409);
  pending();
  EXPECT_FALSE(get(*hub, "/api/state").body["busy"]);
  EXPECT_EQ(post(*hub, R"({"text":"walk to the table"})").status, 200);
}

TEST(HandleApi, StateFollowsTheSessionPose) {
  auto hub = make_hub();
  const auto before = get(*hub, "/api/state").body;
  EXPECT_EQ(before["scene"], "theater");
  EXPECT_TRUE(before["last_report"].is_null());
  const auto rep = post(*hub, R"({"text":"Go to the fire extinguisher"})").body;
  EXPECT_EQ(rep["start_pose"], before["pose"]);
  const auto after = get(*hub, "/api/state").body;
  EXPECT_EQ(after["pose"], rep["final_pose"]);
  EXPECT_EQ(after["last_report"], rep);
  const auto next = post(*hub, R"({"text":"walk to the table"})").body;
  EXPECT_EQ(next["start_pose"], after["pose"]);
}

TEST(HandleApi, MapIsRunLengthEncoded) {
  auto hub = std::make_unique<SessionHub>(pipeline::PipelineConfig{}, std::vector<pipeline::CorpusEntry>{});
  auto spec = navcon::testing::empty_scene({10, 10, 3}, 0.1);
  spec.objects.push_back(navcon::testing::object("crate", "crate", {{4, 4, 0.1}, {5, 5.5, 1.0}}));
  hub->add(world::World::from_scene(spec));
  const auto res = get(*hub, "/api/map");
  ASSERT_EQ(res.status, 200);
  EXPECT_EQ(res.body["dims"], nlohmann::json::array({100, 100, 30}));
  EXPECT_DOUBLE_EQ(res.body["resolution"].get<double>(), 0.1);
  const auto map = hub->find("")->session.world.map;
  std::vector<bool> cells;
  bool occ = false;
  for (const auto& run : res.body["runs"]) {
    cells.insert(cells.end(), run.get<std::size_t>(), occ);
    occ = !occ;
  }
  ASSERT_EQ(cells.size(), 300000u);
  std::size_t i = 0, occupied = 0;
  for (int z = 0; z < 30; ++z)
    for (int y = 0; y < 100; ++y)
      for (int x = 0; x < 100; ++x, ++i) {
        ASSERT_EQ(cells[i], map->occupied(x, y, z)) << x << "," << y << "," << z;
        occupied += cells[i];
      }
  EXPECT_GT(occupied, 100u * 100u);  // floor slab plus the crate
}

TEST(HandleApi, ViewsMatchTheRenderer) {
  auto hub = make_hub({"theater", "lobby"});
  const auto res = get(*hub, "/api/views?scene=lobby");
  ASSERT_EQ(res.status, 200);
  EXPECT_EQ(res.body["scene"], "lobby");
  const auto& slot = *hub->find("lobby");
  const auto views = world::render_views(*slot.session.world.scene, *slot.session.world.map, slot.session.robot);
  ASSERT_EQ(res.body["frames"].size(), 3u);
  for (std::size_t f = 0; f < 3; ++f) {
    const auto& jf = res.body["frames"][f];
    EXPECT_EQ(jf["name"], views.frames[f].name());
    ASSERT_EQ(jf["rects"].size(), views.frames[f].rects.size());
    for (std::size_t r = 0; r < views.frames[f].rects.size(); ++r) {
      const auto& b = views.frames[f].rects[r].box;
      EXPECT_EQ(jf["rects"][r]["box"], nlohmann::json::array({b.left, b.lower, b.right, b.upper}));
    }
  }
  EXPECT_EQ(res.body["panorama"]["offsets"]["right"], 1320.0);
}

TEST(HandleApi, SessionsAreIndependent) {
  auto hub = make_hub({"theater", "lobby"});
  const auto lobby_before = get(*hub, "/api/state?scene=lobby").body["pose"];
  EXPECT_EQ(post(*hub, R"({"text":"Go to the fire extinguisher","scene":"theater"})").status, 200);
  EXPECT_EQ(get(*hub, "/api/state?scene=lobby").body["pose"], lobby_before);
  EXPECT_EQ(get(*hub, "/api/scenes").body["scenes"].size(), 2u);
}

namespace {

struct Running {
  std::unique_ptr<SessionHub> hub = make_hub();
  Server server{*hub, ServerConfig{}};
  Running() { server.start(); }
  [[nodiscard]] httplib::Client client() const {
    httplib::Client c("127.0.0.1", server.port());
    c.set_read_timeout(30);
    return c;
  }
};

struct Received {
  nlohmann::json msg;
  std::chrono::steady_clock::time_point at;
};

/// Reads pose events until one reports done.
std::vector<Received> read_until_done(websocket::stream<tcp::socket>& ws) {
  std::vector<Received> out;
  for (;;) {
    beast::flat_buffer buf;
    ws.read(buf);
    out.push_back({nlohmann::json::parse(beast::buffers_to_string(buf.data())), std::chrono::steady_clock::now()});
    if (out.back().msg["done"]) return out;
  }
}

}  // namespace

TEST(Server, HttpRoundTrip) {
  Running r;
  auto c = r.client();
  const auto state = c.Get("/api/state");
  ASSERT_TRUE(state);
  EXPECT_EQ(state->status, 200);
  EXPECT_EQ(nlohmann::json::parse(state->body)["scene"], "theater");
  EXPECT_EQ(state->get_header_value("Access-Control-Allow-Origin"), "*");
  const auto bad = c.Post("/api/command", "{oops", "application/json");
  ASSERT_TRUE(bad);
  EXPECT_EQ(bad->status, 400);
  const auto map = c.Get("/api/map");
  ASSERT_TRUE(map);
  EXPECT_EQ(nlohmann::json::parse(map->body)["dims"], nlohmann::json::array({200, 160, 30}));
}

TEST(Server, ConcurrentCommandsAndPoseStream) {
  Running r;
  net::io_context ioc;
  websocket::stream<tcp::socket> ws(ioc);
  ws.next_layer().connect(tcp::endpoint(net::ip::make_address("127.0.0.1"), r.server.port()));
  ws.handshake("127.0.0.1", "/ws?scene=theater");
  std::this_thread::sleep_for(std::chrono::milliseconds(200));
  auto stream = std::async(std::launch::async, [&] { return read_until_done(ws); });

  // Two commands at once: one runs, the other is turned away.
  std::atomic<int> go{0};
  auto fire = [&](const char* text) {
    ++go;
    while (go < 2) std::this_thread::yield();
    auto c = r.client();
    const auto res = c.Post("/api/command", nlohmann::json{{"text", text}}.dump(), "application/json");
    return res ? res->status : -1;
  };
  auto a = std::async(std::launch::async, fire, "Go to the fire extinguisher");
  auto b = std::async(std::launch::async, fire, "Go to the fire extinguisher");
  const int sa = a.get(), sb = b.get();
  EXPECT_EQ(std::min(sa, sb), 200);
  EXPECT_EQ(std::max(sa, sb), 409);

  // Still streaming, so still busy.
  auto c = r.client();
  EXPECT_EQ(c.Post("/api/command", R"({"text":"walk to the table"})", "application/json")->status, 409);

  const auto events = stream.get();
  ASSERT_GE(events.size(), 10u);
  EXPECT_TRUE(events.back().msg["success"]);
  for (const auto& e : events) EXPECT_EQ(e.msg["scene"], "theater");
  const double span = std::chrono::duration<double>(events.back().at - events.front().at).count();
  const double mean = span / static_cast<double>(events.size() - 1);
  EXPECT_GT(mean, 0.08);
  EXPECT_LT(mean, 0.2);

  const auto state = nlohmann::json::parse(c.Get("/api/state")->body);
  EXPECT_EQ(state["pose"], events.back().msg["pose"]);
  for (int i = 0; i < 50 && nlohmann::json::parse(c.Get("/api/state")->body)["busy"]; ++i)
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
  const auto next = c.Post("/api/command", R"({"text":"walk to the table"})", "application/json");
  ASSERT_TRUE(next);
  EXPECT_EQ(next->status, 200);
  EXPECT_EQ(nlohmann::json::parse(next->body)["start_pose"], state["pose"]);
  ws.close(websocket::close_code::normal);
}
