#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "navcon/lang/lang.hpp"
#include "navcon/projection/panorama.hpp"
#include "navcon/runtime/runtime.hpp"
#include "navcon/world/render.hpp"
#include "snippets.hpp"
#include "support.hpp"

using namespace navcon;
using namespace navcon::runtime;
using navcon::projection::AssembledViews;
using navcon::projection::Representation;
using navcon::testing::empty_scene;
using navcon::testing::make_world;
using navcon::testing::object;
using navcon::testing::standing;
using navcon::world::Box2;
using navcon::world::RobotState;
namespace snippets = navcon::testing::snippets;

namespace {

struct Fixture {
  world::World world;
  std::shared_ptr<world::ViewSet> views;

  explicit Fixture(world::World w)
      : world(std::move(w)),
        views(std::make_shared<world::ViewSet>(
            world::render_views(*world.scene, *world.map, RobotState::at_start(*world.scene)))) {}

  [[nodiscard]] AssembledViews assembled(Representation mode) const {
    return projection::assemble_representation(views, mode);
  }

  [[nodiscard]] Execution run(const std::string& src, Representation mode = Representation::A,
                              ExecutionOptions opts = {}) const {
    const auto views_for_mode = assembled(mode);
    return execute_program(lang::parse_program(src), *world.scene, views_for_mode, opts);
  }

  [[nodiscard]] Value eval(const std::string& expr, Representation mode = Representation::A) const {
    const auto ex = run("def execute_command(image):\n    return " + expr + "\n", mode);
    EXPECT_FALSE(ex.result.error && ex.result.error->find("line") != std::string::npos) << *ex.result.error;
    return ex.raw;
  }
};

Fixture from_file(const std::string& name) {
  return Fixture(world::World::load(navcon::testing::data_dir() / "scenes" / (name + ".json")));
}

std::string body(const std::string& lines) { return "def execute_command(image):\n" + lines; }

const PatchRecord& record_of(const Execution& ex, const Value& v) {
  return ex.trace.patch_registry.at(static_cast<std::size_t>(v.patch().id));
}

// Three outlets drawn at fixed pixel boxes in the left frame, which is the panorama's first tile.
Fixture outlets_at(const std::vector<double>& xs) {
  auto s = empty_scene();
  for (std::size_t i = 0; i < xs.size(); ++i)
    s.objects.push_back(object("outlet_" + std::to_string(i), "outlet", standing(5, 2 + i, 0.1, 0.1, 0.2)));
  Fixture f(make_world(s));
  for (auto& frame : f.views->frames) frame.rects.clear();
  for (std::size_t i = 0; i < xs.size(); ++i)
    f.views->frames[0].rects.push_back({"outlet_" + std::to_string(i), {xs[i] - 10, 200, xs[i] + 10, 220}, 4.0, 1.0, true});
  return f;
}

}  // namespace

// ---- whole programs ----

TEST(Execute, SecondFloorProgramFailsVerbatimWithOneFloor) {
  const auto f = from_file("lobby");
  const auto floors = std::count_if(f.world.scene->objects.begin(), f.world.scene->objects.end(),
                                    [](const auto& o) { return o.label == "floor"; });
  ASSERT_EQ(floors, 1);
  const std::string src = body(
      "    floor_patches = ImagePatch(image).find('floor')\n"
      "    floor_patches.sort(key=lambda x: x.vertical_center)\n"
      "    if len(floor_patches) < 2:\n"
      "        return {'function': 'None', 'error': 'Image does not contain at least two floors.'}\n"
      "    second_floor_patch = floor_patches[1]\n"
      "    return {'function': 'navigate_to_object', 'inputs': (second_floor_patch.horizontal_center, "
      "second_floor_patch.vertical_center), 'box': [second_floor_patch.left, second_floor_patch.lower, "
      "second_floor_patch.right, second_floor_patch.upper]}\n");
  for (auto mode : {Representation::A, Representation::B}) {
    const auto ex = f.run(src, mode);
    EXPECT_EQ(ex.result, NavResult::failure("Image does not contain at least two floors."));
    EXPECT_FALSE(ex.result.inputs);
    EXPECT_FALSE(ex.result.box);
  }
}

TEST(Execute, PassthroughFailureMapping) {
  const auto f = from_file("lobby");
  const auto ex = f.run(body("    return {'function':'None','error':'x'}\n"));
  EXPECT_EQ(ex.result, NavResult::failure("x"));
}

TEST(Execute, OutletProgramPicksMiddleOfThree) {
  const std::vector<double> xs{100, 200, 300};
  std::vector<double> order = xs;
  std::sort(order.begin(), order.end());
  do {
    const auto f = outlets_at(order);
    const auto ex = f.run(snippets::kOutletProgram);
    ASSERT_TRUE(ex.result.ok()) << ex.result.error.value_or("");
    EXPECT_DOUBLE_EQ(ex.result.inputs->first, 200.0);
    EXPECT_DOUBLE_EQ(ex.result.inputs->second, 210.0);
    EXPECT_EQ(ex.result.box, (Box2{190, 200, 210, 220}));
    EXPECT_EQ(ex.result.frame, "panorama");
  } while (std::next_permutation(order.begin(), order.end()));
}

TEST(Execute, FirefighterOnTheater) {
  const auto f = from_file("theater");
  const auto ex = f.run(snippets::kFirefighter);
  ASSERT_TRUE(ex.result.ok()) << ex.result.error.value_or("");
  EXPECT_FALSE(ex.result.normalized);
  ASSERT_TRUE(ex.result.box);
  EXPECT_TRUE(ex.result.box->contains(ex.result.inputs->first, ex.result.inputs->second));
  const auto& calls = ex.trace.api_calls;
  ASSERT_GE(calls.size(), 3u);
  EXPECT_EQ(calls[0].name, "ImagePatch");
  EXPECT_EQ(calls[1].name, "find");
  EXPECT_EQ(calls[2].name, "navigate_to_object");
}

TEST(Execute, EveryPatchIsRegistered) {
  const auto f = from_file("classroom");
  const auto ex = f.run(snippets::kOutletProgram, Representation::B);
  std::set<int> ids;
  for (const auto& rec : ex.trace.patch_registry) {
    EXPECT_EQ(rec.id, static_cast<int>(ids.size()));
    ids.insert(rec.id);
    EXPECT_LT(rec.parent, rec.id);
    EXPECT_LE(rec.bounds.left, rec.bounds.right);
    EXPECT_LE(rec.bounds.lower, rec.bounds.upper);
  }
  EXPECT_EQ(ex.trace.patch_registry.front().frame, "merged");
  EXPECT_EQ(ex.trace.patch_registry.front().views, (std::vector<std::size_t>{0, 1, 2}));
}

TEST(Execute, ValidationFailureIsReported) {
  const auto f = from_file("lobby");
  const auto ex = f.run(body("    import_thing = open('x')\n    return None\n"));
  EXPECT_FALSE(ex.validation.ok);
  EXPECT_FALSE(ex.result.ok());
  EXPECT_EQ(ex.result.error->rfind("validation failed: ", 0), 0u);
  EXPECT_EQ(ex.trace.steps_used, 0u);
}

TEST(Execute, FallingOffTheEndIsMalformed) {
  const auto f = from_file("lobby");
  const auto ex = f.run(body("    x = 1\n"));
  EXPECT_TRUE(ex.raw.is_none());
  EXPECT_EQ(ex.result, NavResult::failure("malformed result"));
}

// ---- docstring examples ----

TEST(DocstringExamples, AllExecuteWithExpectedOutcomes) {
  const Fixture f(make_world(snippets::docstring_scene()));
  std::map<std::string, Execution> runs;
  for (const auto& ex : snippets::docstring_examples()) {
    runs.emplace(ex.name, f.run(ex.source));
    const auto& r = runs.at(ex.name);
    EXPECT_TRUE(r.validation.ok) << ex.name;
    EXPECT_FALSE(r.result.error && r.result.error->find("(line") != std::string::npos)
        << ex.name << ": " << *r.result.error;
  }
  const auto& found = runs.at("find_foo").raw;
  ASSERT_TRUE(found.is_list());
  EXPECT_EQ(found.items().size(), 2u);
  EXPECT_EQ(runs.at("find_foo").result, NavResult::failure("malformed result"));
  EXPECT_EQ(runs.at("exists_foo_and_bar").raw.str(), "yes");
  EXPECT_EQ(runs.at("verify_letters_blue").raw.str(), "yes");
  EXPECT_EQ(runs.at("foo_gold_or_white").raw.str(), "gold");
  EXPECT_EQ(runs.at("baz_not_fredding").raw.str(), "plain baz");
  // The black foo is partly covered by the qux it sits on, so the unobstructed blue foo ranks first.
  EXPECT_EQ(runs.at("foo_color").raw.str(), "blue");
  EXPECT_EQ(runs.at("second_bar_quuxy").raw.str(), "yes");

  const auto& furthest = runs.at("bar_furthest_away");
  EXPECT_EQ(record_of(furthest, furthest.raw).object_id, "bar_far");
  EXPECT_TRUE(furthest.result.ok());
  EXPECT_TRUE(furthest.result.normalized);

  const auto& on_top = runs.at("black_foo_on_qux");
  EXPECT_EQ(record_of(on_top, on_top.raw).object_id, "foo_black");

  const auto& closest = runs.at("qux_closest_to_foo");
  EXPECT_EQ(record_of(closest, closest.raw).object_id, "qux_b");
}

TEST(DocstringExamples, NavClientRepairedReachesBlueFoo) {
  const Fixture f(make_world(snippets::docstring_scene()));
  const auto ex = f.run(snippets::kBlueFooRepaired);
  ASSERT_TRUE(ex.result.ok()) << ex.result.error.value_or("");
  EXPECT_EQ(ex.result.function, "navigate_to_object");
  EXPECT_TRUE(ex.result.normalized);
  const auto blue = std::find_if(ex.trace.patch_registry.begin(), ex.trace.patch_registry.end(),
                                 [](const auto& r) { return r.object_id == "foo_blue" && r.origin == "find"; });
  ASSERT_NE(blue, ex.trace.patch_registry.end());
  EXPECT_EQ(ex.result.box, blue->bounds);
  EXPECT_DOUBLE_EQ(ex.result.inputs->first, (blue->bounds.left + blue->bounds.right) / 2);
}

TEST(DocstringExamples, NavClientAsPrintedIsRejected) {
  const Fixture f(make_world(snippets::docstring_scene()));
  const auto ex = f.run(snippets::kBlueFooAsPrinted);
  EXPECT_FALSE(ex.result.ok());
  EXPECT_EQ(ex.result.error->rfind("validation failed", 0), 0u);
}

// ---- patch API ----

TEST(PatchApi, FindSingleBackpackInFront) {
  auto s = empty_scene();
  s.objects.push_back(object("bp", "backpack", standing(5, 5, 0.4, 0.3, 0.5)));
  const Fixture f(make_world(s));
  const auto ex = f.run(body("    return ImagePatch(image, frame='front').find('backpack')\n"), Representation::B);
  ASSERT_EQ(ex.raw.items().size(), 1u);
  const auto& rec = record_of(ex, ex.raw.items()[0]);
  EXPECT_EQ(rec.frame, "front");
  EXPECT_EQ(rec.object_id, "bp");
  EXPECT_EQ(rec.bounds, f.views->frames[1].rects[0].box);
}

TEST(PatchApi, FindResultsStayInsideQueriedPatch) {
  const auto f = from_file("classroom");
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> ux(0, 1960), uy(0, 480);
  for (int trial = 0; trial < 60; ++trial) {
    double l = ux(rng), r = ux(rng), lo = uy(rng), u = uy(rng);
    if (l > r) std::swap(l, r);
    if (lo > u) std::swap(lo, u);
    const auto ex = f.run(body("    p = image.crop(" + std::to_string(l) + ", " + std::to_string(lo) + ", " +
                               std::to_string(r) + ", " + std::to_string(u) +
                               ")\n    return p.find('backpack') + p.find('chair') + p.find('outlet')\n"));
    const Box2 region = record_of(ex, Value(PatchRef{1})).bounds;
    for (const auto& v : ex.raw.items()) EXPECT_TRUE(region.contains(record_of(ex, v).bounds)) << trial;
  }
}

TEST(PatchApi, ModeBFindConcatenatesFramesInOrder) {
  const auto f = from_file("classroom");
  const auto ex = f.run(body("    return image.find('outlet')\n"), Representation::B);
  std::vector<std::string> frames;
  for (const auto& v : ex.raw.items()) frames.push_back(record_of(ex, v).frame);
  EXPECT_EQ(frames, (std::vector<std::string>{"left", "front", "right"}));
}

TEST(PatchApi, ExistsAgreesWithFindOnRandomScenes) {
  const std::vector<std::string> labels{"box", "chair", "red ball", "cone", "lamp"};
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> px(2.0, 9.0), py(1.0, 9.0), sz(0.2, 0.8);
  std::uniform_int_distribution<std::size_t> pick(0, labels.size() - 1);
  for (int scene = 0; scene < 20; ++scene) {
    auto s = empty_scene();
    for (int i = 0; i < 5; ++i)
      s.objects.push_back(object("o" + std::to_string(i), labels[pick(rng)], standing(px(rng), py(rng), 0.3, 0.3, sz(rng))));
    const Fixture f(make_world(s));
    for (auto mode : {Representation::A, Representation::B}) {
      for (const std::string q : {"box", "chair", "ball", "red ball", "cone", "lamp", "sofa"}) {
        const auto v = f.eval("(image.exists('" + q + "'), len(image.find('" + q + "')))", mode);
        ASSERT_TRUE(v.is_tuple());
        EXPECT_EQ(truthy(v.items()[0]), as_int(v.items()[1]) > 0) << scene << " " << q;
      }
    }
  }
}

TEST(PatchApi, VerifyPropertyAbsentObjectIsFalseWithNote) {
  const Fixture f(make_world(snippets::docstring_scene()));
  const auto ex = f.run(body("    return image.verify_property('giraffe', 'tall')\n"));
  EXPECT_EQ(ex.raw.v, Value(false).v);
  ASSERT_FALSE(ex.trace.notes.empty());
  EXPECT_NE(ex.trace.notes.front().find("giraffe"), std::string::npos);
  EXPECT_EQ(f.eval("image.find('letters')[0].verify_property('letters', 'blue')").v, Value(true).v);
  EXPECT_EQ(f.eval("image.find('letters')[0].verify_property('letters', 'red')").v, Value(false).v);
}

TEST(PatchApi, BestTextMatchUsesDominantObject) {
  const Fixture f(make_world(snippets::docstring_scene()));
  EXPECT_EQ(f.eval("image.find('letters')[0].best_text_match(['red', 'blue'])").str(), "blue");
  EXPECT_EQ(f.eval("image.crop(0, 0, 1, 1).best_text_match(['first', 'second'])").str(), "first");
  const auto ex = f.run(body("    return image.best_text_match([])\n"));
  EXPECT_EQ(ex.result.error->rfind("best_text_match: empty option list", 0), 0u);
}

TEST(PatchApi, SimpleQueryFallsBackThroughFixtures) {
  const auto f = from_file("classroom");
  EXPECT_EQ(f.eval("image.find('red backpack')[0].simple_query('What is the color?')").str(), "red");
  EXPECT_EQ(f.eval("image.find('chair')[0].simple_query()").str(), "chair");
  EXPECT_EQ(f.eval("image.simple_query('What can I use to clean a spill?')").str(), "paper towels");
  EXPECT_EQ(f.eval("llm_query('what can i use to clean a spill')").str(), "paper towels");
  const auto ex = f.run(body("    return image.find('chair')[0].simple_query('how old is it')\n"));
  EXPECT_EQ(ex.raw.str(), "no fixture");
  EXPECT_FALSE(ex.trace.notes.empty());
  EXPECT_EQ(f.eval("image.crop(0, 470, 5, 480).simple_query()").str(), "nothing");
}

TEST(PatchApi, ComputeDepthWallSkyAndSplit) {
  auto s = empty_scene({20, 20, 6});
  s.robot_start = {2.0, 10.0, 0.0};
  s.objects.push_back(object("wall", "wall", {{6.0, 0.5, 0.1}, {6.5, 19.5, 0.9}}));
  const Fixture f(make_world(s));
  const double cam_x = f.views->frames[1].pose.origin.x;
  // Front frame in the panorama: columns 660..1300. Rows 192..256 see the wall face; lower rows see floor.
  EXPECT_NEAR(as_double(f.eval("image.crop(900, 200, 1060, 250).compute_depth()")), 6.0 - cam_x, 1e-9);
  EXPECT_DOUBLE_EQ(as_double(f.eval("image.crop(900, 440, 1060, 480).compute_depth()")), 30.0);
  EXPECT_DOUBLE_EQ(as_double(f.eval("image.crop(0, 0, 0, 0).compute_depth()")), 30.0);

  // Brute-force oracle: every pixel center in the patch, fully sorted.
  const auto views = f.assembled(Representation::A);
  for (const auto& [lo, hi] : std::vector<std::pair<int, int>>{{200, 400}, {230, 290}, {100, 480}}) {
    std::vector<double> all;
    for (int y = lo; y < hi; ++y)
      for (int x = 900; x < 960; ++x) all.push_back(views.depth_at(views.views[0], x + 0.5, y + 0.5));
    std::sort(all.begin(), all.end());
    const double median = all.size() % 2 ? all[all.size() / 2] : (all[all.size() / 2 - 1] + all[all.size() / 2]) / 2;
    const auto v = f.eval("image.crop(900, " + std::to_string(lo) + ", 960, " + std::to_string(hi) + ").compute_depth()");
    EXPECT_DOUBLE_EQ(as_double(v), median) << lo << ".." << hi;
  }
}

TEST(PatchApi, CropClampsAndComposes) {
  const auto f = from_file("lobby");
  const auto ex = f.run(body(
      "    a = image.crop(-50, -10, 700, 300)\n"
      "    b = a.crop(100, 100, 900, 900)\n"
      "    c = ImagePatch(b, 150, 50, 160, 60)\n"
      "    return [a, b, c]\n"));
  const auto& items = ex.raw.items();
  EXPECT_EQ(record_of(ex, items[0]).bounds, (Box2{0, 0, 700, 300}));
  EXPECT_EQ(record_of(ex, items[1]).bounds, (Box2{100, 100, 700, 300}));
  EXPECT_EQ(record_of(ex, items[2]).bounds, (Box2{150, 100, 160, 100}));
  for (const auto& v : items) EXPECT_EQ(record_of(ex, v).frame, "panorama");
  const auto centers = f.eval("[image.crop(10, 20, 31, 45).horizontal_center, image.crop(10, 20, 31, 45).vertical_center]");
  EXPECT_DOUBLE_EQ(as_double(centers.items()[0]), (10.0 + 31.0) / 2);
  EXPECT_DOUBLE_EQ(as_double(centers.items()[1]), (20.0 + 45.0) / 2);
}

TEST(PatchApi, OverlapsWithUsesClosedIntervals) {
  const auto f = from_file("lobby");
  EXPECT_EQ(f.eval("image.crop(0, 0, 10, 10).overlaps_with(10, 10, 20, 20)").v, Value(true).v);
  EXPECT_EQ(f.eval("image.crop(0, 0, 10, 10).overlaps_with(10.5, 0, 20, 20)").v, Value(false).v);
}

TEST(PatchApi, DistanceValues) {
  const auto f = from_file("lobby");
  auto d = [&](const std::string& a, const std::string& b) {
    return as_double(f.eval("distance(image.crop(" + a + "), image.crop(" + b + "))"));
  };
  EXPECT_DOUBLE_EQ(d("0, 0, 10, 10", "0, 0, 10, 10"), -1.0);
  EXPECT_DOUBLE_EQ(d("0, 0, 10, 10", "20, 0, 30, 10"), 10.0);
  EXPECT_DOUBLE_EQ(d("0, 0, 10, 10", "5, 5, 15, 15"), -25.0 / 175.0);
  EXPECT_DOUBLE_EQ(d("0, 0, 10, 10", "13, 14, 20, 20"), 5.0);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0, 400);
  for (int i = 0; i < 200; ++i) {
    std::array<double, 8> c{};
    for (auto& x : c) x = std::round(u(rng));
    const Box2 a{std::min(c[0], c[1]), std::min(c[2], c[3]), std::max(c[0], c[1]), std::max(c[2], c[3])};
    const Box2 b{std::min(c[4], c[5]), std::min(c[6], c[7]), std::max(c[4], c[5]), std::max(c[6], c[7])};
    EXPECT_EQ(box_distance(a, b), box_distance(b, a));
    EXPECT_GE(box_distance(a, b), -1.0);
  }
}

TEST(PatchApi, ModeBDistanceAcrossFramesIsNoted) {
  const auto f = from_file("classroom");
  const auto ex = f.run(body(
      "    l = ImagePatch(image, frame='left')\n"
      "    r = ImagePatch(image, frame='right')\n"
      "    return distance(l, r)\n"),
                        Representation::B);
  EXPECT_DOUBLE_EQ(as_double(ex.raw), -1.0);
  ASSERT_EQ(ex.trace.notes.size(), 1u);
  EXPECT_NE(ex.trace.notes[0].find("distance across frames"), std::string::npos);
}

TEST(PatchApi, BestImageMatch) {
  const Fixture f(make_world(snippets::docstring_scene()));
  const auto idx = f.eval("best_image_match([image.find('letters')[0], image.find('foo')[0]], ['black', 'foo'], True)");
  EXPECT_EQ(as_int(idx), 1);
  const auto ex = f.run(body("    return best_image_match([image.find('foo')[1], image.find('letters')[0]], ['blue letters'])\n"));
  EXPECT_EQ(record_of(ex, ex.raw).object_id, "letters");
  EXPECT_EQ(f.run(body("    return best_image_match([], ['x'])\n")).result.error->rfind("best_image_match: empty", 0), 0u);
}

TEST(PatchApi, CoerceToNumeric) {
  EXPECT_DOUBLE_EQ(coerce_to_numeric("about 3.5 meters"), 3.5);
  EXPECT_DOUBLE_EQ(coerce_to_numeric("10-15"), 10.0);
  EXPECT_DOUBLE_EQ(coerce_to_numeric("-2"), -2.0);
  EXPECT_DOUBLE_EQ(coerce_to_numeric("$1,200"), 1200.0);
  EXPECT_THROW(coerce_to_numeric("none"), ExecError);
  const auto f = from_file("lobby");
  EXPECT_DOUBLE_EQ(as_double(f.eval("coerce_to_numeric('7 cones')")), 7.0);
  EXPECT_EQ(f.eval("bool_to_yesno(1 > 2)").str(), "no");
  EXPECT_EQ(f.eval("bool_to_yesno([1])").str(), "yes");
}

TEST(PatchApi, ConstructorFrameSelection) {
  const auto f = from_file("classroom");
  const auto ex = f.run(body("    return [ImagePatch(image, frame='left'), ImagePatch(image, frame='right')]\n"),
                        Representation::B);
  ASSERT_TRUE(ex.raw.is_list());
  EXPECT_EQ(record_of(ex, ex.raw.items()[0]).frame, "left");
  EXPECT_EQ(record_of(ex, ex.raw.items()[1]).frame, "right");
  const auto bad = f.run(body("    return ImagePatch(image, frame='up')\n"), Representation::B);
  EXPECT_EQ(bad.result.error->rfind("unknown frame: up", 0), 0u);
}

// ---- result resolution ----

TEST(Resolve, NavFunctionAliasWithInputsAndBox) {
  ExecutionTrace trace;
  const Value raw = Value::dict({{"function", "nav_function"},
                                 {"inputs", Value::tuple({Value(15.0), Value(25.0)})},
                                 {"box", Value::list({Value(10), Value(20), Value(20), Value(30)})}});
  const auto r = resolve_nav_result(raw, trace, Representation::A);
  EXPECT_EQ(r.function, "navigate_to_object");
  EXPECT_EQ(r.inputs, (std::pair<double, double>{15.0, 25.0}));
  EXPECT_EQ(r.box, (Box2{10, 20, 20, 30}));
  EXPECT_EQ(r.frame, "panorama");
  EXPECT_TRUE(r.normalized);
}

TEST(Resolve, BarePatchBecomesMidpoint) {
  const auto f = from_file("lobby");
  const auto ex = f.run(body("    return image.crop(0, 0, 10, 10)\n"));
  EXPECT_EQ(ex.result.inputs, (std::pair<double, double>{5.0, 5.0}));
  EXPECT_EQ(ex.result.box, (Box2{0, 0, 10, 10}));
  EXPECT_TRUE(ex.result.normalized);
}

TEST(Resolve, FrameFromRegistryInModeB) {
  const auto f = from_file("classroom");
  const std::string tail =
      "    return {'function': 'navigate_to_object', 'inputs': (20, 20), 'box': [10, 10, 50, 50]}\n";
  const auto right = f.run(body("    p = ImagePatch(image, frame='right').crop(10, 10, 50, 50)\n" + tail), Representation::B);
  EXPECT_EQ(right.result.frame, "right");
  const auto both = f.run(body("    p = ImagePatch(image, frame='right').crop(10, 10, 50, 50)\n"
                               "    q = ImagePatch(image, frame='front').crop(10, 10, 50, 50)\n" + tail),
                          Representation::B);
  EXPECT_EQ(both.result.frame, "front");
  const auto none = f.run(body(tail), Representation::B);
  EXPECT_TRUE(none.result.ok());
  EXPECT_FALSE(none.result.frame);
}

TEST(Resolve, MalformedShapes) {
  ExecutionTrace trace;
  auto resolve = [&](const Value& v) { return resolve_nav_result(v, trace, Representation::A); };
  EXPECT_EQ(resolve(Value(3)), NavResult::failure("malformed result"));
  EXPECT_EQ(resolve(Value::dict({{"inputs", Value::tuple({Value(1), Value(2)})}})), NavResult::failure("malformed result"));
  EXPECT_EQ(resolve(Value::dict({{"function", "fly_to"}})), NavResult::failure("unknown nav function: fly_to"));
  EXPECT_EQ(resolve(Value::dict({{"function", Value()}, {"error", "gone"}})), NavResult::failure("gone"));
  EXPECT_EQ(resolve(Value::dict({{"function", "navigate_to_object"},
                                 {"inputs", Value::tuple({Value(100), Value(2)})},
                                 {"box", Value::list({Value(0), Value(0), Value(10), Value(10)})}})),
            NavResult::failure("inputs outside box"));
  EXPECT_EQ(resolve(Value::dict({{"function", "navigate_to_object"}, {"inputs", Value::tuple({Value(1)})}})),
            NavResult::failure("malformed result"));
  const auto from_box = resolve(Value::dict(
      {{"function", "navigate_to_object"}, {"box", Value::list({Value(0), Value(0), Value(10), Value(20)})}}));
  EXPECT_EQ(from_box.inputs, (std::pair<double, double>{5.0, 10.0}));
}

TEST(Resolve, NavigateCallReturnsResultMapping) {
  const auto f = from_file("theater");
  const auto ex = f.run(body(
      "    p = image.find('fire extinguisher')[0]\n"
      "    return navigate_to_object(p.horizontal_center, p.vertical_center)\n"));
  ASSERT_TRUE(ex.result.ok()) << ex.result.error.value_or("");
  const auto& rec = ex.trace.patch_registry.back();
  EXPECT_EQ(ex.result.box, rec.bounds);
  EXPECT_TRUE(ex.result.normalized);
}

TEST(Resolve, JsonShape) {
  NavResult r;
  r.function = "navigate_to_object";
  r.inputs = {1.5, 2.0};
  r.box = Box2{1, 1, 2, 3};
  r.frame = "front";
  EXPECT_EQ(to_json(r).dump(),
            R"({"box":[1.0,1.0,2.0,3.0],"frame":"front","function":"navigate_to_object","inputs":[1.5,2.0]})");
  EXPECT_EQ(to_json(NavResult::failure("x")).dump(), R"({"error":"x","function":"None"})");
}

// ---- representation hazard ----

TEST(Hazard, ModeBMergesOutletListsAcrossFrames) {
  const auto f = from_file("classroom");
  const auto& scene = *f.world.scene;
  const auto start = scene.robot_start;
  // Ground truth: the panorama runs left to right in decreasing bearing, so the middle outlet is the median bearing.
  std::vector<std::pair<double, std::string>> bearings;
  for (const auto& o : scene.objects) {
    if (o.label != "outlet") continue;
    const double cx = (o.box.min.x + o.box.max.x) / 2 - start.x;
    const double cy = (o.box.min.y + o.box.max.y) / 2 - start.y;
    double b = std::atan2(cy, cx) - start.yaw;
    while (b < -std::numbers::pi * 0.75) b += 2 * std::numbers::pi;
    bearings.emplace_back(b, o.id);
  }
  ASSERT_EQ(bearings.size(), 3u);
  std::sort(bearings.begin(), bearings.end());
  const std::string truth = bearings[1].second;

  auto selected = [&](Representation mode) {
    const auto ex = f.run(snippets::kOutletProgram, mode);
    EXPECT_TRUE(ex.result.ok());
    for (const auto& rec : ex.trace.patch_registry)
      if (rec.origin == "find" && ex.result.box == rec.bounds) return rec.object_id;
    return std::string();
  };
  EXPECT_EQ(selected(Representation::A), truth);
  EXPECT_NE(selected(Representation::B), truth);
}

// ---- interpreter semantics ----

TEST(Semantics, ArithmeticFollowsPython) {
  const auto f = from_file("lobby");
  auto num = [&](const std::string& e) { return f.eval(e); };
  EXPECT_EQ(repr(num("7 // 2")), "3");
  EXPECT_EQ(repr(num("-7 // 2")), "-4");
  EXPECT_EQ(repr(num("-7 % 3")), "2");
  EXPECT_EQ(repr(num("7 % -3")), "-2");
  EXPECT_EQ(repr(num("7 / 2")), "3.5");
  EXPECT_EQ(repr(num("4 / 2")), "2.0");
  EXPECT_EQ(repr(num("2 ** 10")), "1024");
  EXPECT_EQ(repr(num("2 ** -1")), "0.5");
  EXPECT_EQ(repr(num("-7.5 // 2")), "-4.0");
  EXPECT_EQ(repr(num("1 + True")), "2");
  EXPECT_EQ(repr(num("'ab' + 'c'")), "'abc'");
  EXPECT_EQ(repr(num("[1] + [2, 3]")), "[1, 2, 3]");
  EXPECT_EQ(repr(num("(1,) * 3")), "(1, 1, 1)");
  EXPECT_EQ(repr(num("1 < 2 < 3")), "True");
  EXPECT_EQ(repr(num("1 < 3 < 2")), "False");
  EXPECT_EQ(repr(num("0 or 'x'")), "'x'");
  EXPECT_EQ(repr(num("[] and 1")), "[]");
  EXPECT_EQ(repr(num("not None")), "True");
  EXPECT_EQ(repr(num("'a' in 'cat'")), "True");
  EXPECT_EQ(repr(num("2 not in [1, 3]")), "True");
  EXPECT_EQ(repr(num("'k' in {'k': 1}")), "True");
  EXPECT_EQ(repr(num("None is None")), "True");
  EXPECT_EQ(repr(num("[1, 2, 3][-1]")), "3");
  EXPECT_EQ(f.run(body("    return {'a': 1}['a']\n")).result.error,
            "validation failed: subscription index must be an integer");
  EXPECT_EQ(repr(num("-(3)")), "-3");
  EXPECT_EQ(repr(num("abs(-2.5)")), "2.5");
}

TEST(Semantics, Builtins) {
  const auto f = from_file("lobby");
  EXPECT_EQ(repr(f.eval("sorted([3, 1, 2], reverse=True)")), "[3, 2, 1]");
  EXPECT_EQ(repr(f.eval("sorted(['bb', 'a', 'ccc'], key=len)")), "['a', 'bb', 'ccc']");
  EXPECT_EQ(repr(f.eval("sorted([(1, 'b'), (0, 'z'), (1, 'a')], key=lambda t: t[0])")), "[(0, 'z'), (1, 'b'), (1, 'a')]");
  EXPECT_EQ(repr(f.eval("min([4, 2, 8])")), "2");
  EXPECT_EQ(repr(f.eval("max(4, 9, 1)")), "9");
  EXPECT_EQ(repr(f.eval("max(['a', 'ccc', 'bb'], key=len)")), "'ccc'");
  EXPECT_EQ(repr(f.eval("min([3, 1, 1], key=lambda x: -x)")), "3");
  EXPECT_EQ(repr(f.eval("enumerate(['a', 'b'], start=1)")), "[(1, 'a'), (2, 'b')]");
  EXPECT_EQ(repr(f.eval("range(5, 0, -2)")), "[5, 3, 1]");
  EXPECT_EQ(repr(f.eval("len({'a': 1})")), "1");
}

TEST(Semantics, StatementsLoopsAndUnpacking) {
  const auto f = from_file("lobby");
  const auto ex = f.run(body(
      "    total = 0\n"
      "    pairs = []\n"
      "    for i, name in enumerate(['a', 'b', 'c']):\n"
      "        if i == 1:\n"
      "            pairs.append(name)\n"
      "        elif i == 2:\n"
      "            total += 10\n"
      "        else:\n"
      "            total -= 1\n"
      "    a, b = (total, pairs)\n"
      "    items = [1]\n"
      "    for x in items:\n"
      "        if x < 4:\n"
      "            items.append(x + 1)\n"
      "    return [a, b, items]\n"));
  EXPECT_EQ(repr(ex.raw), "[9, ['b'], [1, 2, 3, 4]]");
}

TEST(Semantics, SortIsStableWithKeyAndReverse) {
  const auto f = from_file("lobby");
  const auto ex = f.run(body(
      "    xs = [(2, 'a'), (1, 'b'), (2, 'c'), (1, 'd')]\n"
      "    xs.sort(key=lambda t: t[0], reverse=True)\n"
      "    return xs\n"));
  EXPECT_EQ(repr(ex.raw), "[(2, 'a'), (2, 'c'), (1, 'b'), (1, 'd')]");
}

TEST(Semantics, RuntimeErrorsCarryPositions) {
  const auto f = from_file("lobby");
  auto err = [&](const std::string& lines) { return f.run(body(lines)).result.error.value_or("<none>"); };
  EXPECT_EQ(err("    x = 5\n    x.sort()\n"), "sort() requires a list, got int (line 3, column 7)");
  EXPECT_EQ(err("    return [1][3]\n"), "index out of range (line 2, column 12)");
  EXPECT_EQ(err("    return 1 / 0\n"), "division by zero (line 2, column 14)");
  EXPECT_EQ(err("    if False:\n        y = 1\n    return y\n"), "name 'y' is not defined (line 4, column 12)");
  EXPECT_EQ(err("    return [1].upper\n"), "'list' object has no attribute 'upper' (line 2, column 16)");
  EXPECT_EQ(err("    return 'a' < 1\n"), "cannot order str and int (line 2, column 12)");
  EXPECT_EQ(err("    return 9223372036854775807 + 1\n"), "integer overflow (line 2, column 32)");
  EXPECT_EQ(err("    a, b = [1]\n"), "cannot unpack 1 values into 2 names (line 2, column 5)");
  EXPECT_EQ(err("    return image.find()\n"), "find() missing required argument 'object_name' (line 2, column 18)");
}

TEST(Semantics, StepBudgetAndSequenceCap) {
  const auto f = from_file("lobby");
  const std::string spin = body(
      "    n = 0\n"
      "    for i in range(10000):\n"
      "        for j in range(10000):\n"
      "            n += 1\n"
      "    return n\n");
  const auto ex = f.run(spin);
  EXPECT_EQ(ex.result.error->rfind("step budget exhausted", 0), 0u);
  EXPECT_LE(ex.trace.steps_used, 100001u);

  ExecutionOptions small;
  small.step_budget = 50;
  const auto tight = f.run(body("    n = 0\n    for i in range(100):\n        n += 1\n    return n\n"), Representation::A, small);
  EXPECT_EQ(tight.result.error->rfind("step budget exhausted", 0), 0u);

  EXPECT_EQ(f.run(body("    return range(20000)\n")).result.error->rfind("sequence length cap exceeded", 0), 0u);
  EXPECT_EQ(f.run(body("    return [0] * 10001\n")).result.error->rfind("sequence length cap exceeded", 0), 0u);
  EXPECT_EQ(f.run(body("    xs = [1]\n    for x in xs:\n        xs.append(x)\n")).result.error->rfind(
                "sequence length cap exceeded", 0),
            0u);
}

TEST(Semantics, KeyFunctionMayBeNamedApi) {
  const auto f = from_file("lobby");
  EXPECT_EQ(repr(f.eval("sorted(['bbb', 'a'], key=len)")), "['a', 'bbb']");
}

TEST(Semantics, ApiCallsAreTracedInOrder) {
  const auto f = from_file("lobby");
  const auto ex = f.run(snippets::kOutletProgram);
  std::vector<std::string> names;
  for (const auto& c : ex.trace.api_calls) names.push_back(c.name);
  EXPECT_EQ(names, (std::vector<std::string>{"ImagePatch", "find", "sort"}));
  EXPECT_EQ(ex.trace.api_calls[1].args, "<ImagePatch #1>; 'outlet'");
  EXPECT_EQ(ex.trace.api_calls[1].result, "[]");
  EXPECT_EQ(ex.result.error->rfind("index out of range", 0), 0u);
}

TEST(Semantics, DeterministicAcrossRuns) {
  const auto f = from_file("theater");
  for (const char* src : {snippets::kFirefighter, snippets::kMovieProgram, snippets::kOutletProgram}) {
    for (auto mode : {Representation::A, Representation::B}) {
      const auto a = f.run(src, mode);
      const auto b = f.run(src, mode);
      EXPECT_EQ(a.result, b.result);
      EXPECT_EQ(a.trace.steps_used, b.trace.steps_used);
      EXPECT_EQ(a.trace.notes, b.trace.notes);
      ASSERT_EQ(a.trace.api_calls.size(), b.trace.api_calls.size());
      for (std::size_t i = 0; i < a.trace.api_calls.size(); ++i) {
        EXPECT_EQ(a.trace.api_calls[i].args, b.trace.api_calls[i].args);
        EXPECT_EQ(a.trace.api_calls[i].result, b.trace.api_calls[i].result);
      }
      ASSERT_EQ(a.trace.patch_registry.size(), b.trace.patch_registry.size());
      for (std::size_t i = 0; i < a.trace.patch_registry.size(); ++i)
        EXPECT_EQ(a.trace.patch_registry[i].bounds, b.trace.patch_registry[i].bounds);
    }
  }
}

TEST(Semantics, TheaterConfusionIsVisibleToPrograms) {
  const auto f = from_file("theater");
  const auto ex = f.run(body("    return len(image.find('vacuum'))\n"));
  EXPECT_GE(as_int(ex.raw), 1);
}
