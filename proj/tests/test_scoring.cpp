#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "ocrloop/answer_parse.hpp"
#include "ocrloop/scoring.hpp"

using namespace ocrloop;
using Catch::Approx;

namespace {

Sample make_sample(TaskType task) {
    Sample s;
    s.id = "score-1";
    s.image_ref = "/nowhere.png";  // scoring never touches the image
    s.question = "q";
    s.task_type = task;
    return s;
}

}  // namespace

// ─── answer parsing ───────────────────────────────────────────────────

TEST_CASE("extract_integers pulls numbers in order", "[scoring]") {
    CHECK(extract_integers("there are 8 pens and 3 boxes") ==
          std::vector<long long>{8, 3});
    CHECK(extract_integers("total: 1,234 items") == std::vector<long long>{1234});
    // a trailing comma is punctuation, not a separator
    CHECK(extract_integers("12, 34") == std::vector<long long>{12, 34});
    CHECK(extract_integers("no digits here").empty());
    CHECK(extract_integers("ends with 7") == std::vector<long long>{7});
    // absurdly long digit runs are ignored rather than overflowing
    CHECK(extract_integers(std::string(40, '9')).empty());
}

TEST_CASE("align_counts pads and truncates", "[scoring]") {
    CHECK(align_counts({5}, 3) == std::vector<long long>{5, 0, 0});
    CHECK(align_counts({1, 2, 3, 4}, 2) == std::vector<long long>{1, 2});
    CHECK(align_counts({}, 1) == std::vector<long long>{0});
}

TEST_CASE("parse_key_values prefers an embedded json object", "[scoring]") {
    const auto kv = parse_key_values(
        "Here are the fields:\n```json\n{\"vendor\": \"ACME\", \"total\": 12.5, "
        "\"tags\": [\"a\", \"b\"]}\n```");
    REQUIRE(kv.count("vendor") == 1);
    CHECK(kv.at("vendor") == std::vector<std::string>{"ACME"});
    CHECK(kv.at("total") == std::vector<std::string>{"12.5"});
    CHECK(kv.at("tags") == std::vector<std::string>{"a", "b"});
}

TEST_CASE("parse_key_values falls back to colon lines", "[scoring]") {
    const auto kv = parse_key_values("vendor: ACME Corp\ntotal: 128.00\nnot a pair\n: orphan\n");
    CHECK(kv.size() == 2);
    CHECK(kv.at("vendor") == std::vector<std::string>{"ACME Corp"});
    CHECK(kv.at("total") == std::vector<std::string>{"128.00"});
}

TEST_CASE("parse_boxes reads bracketed quadruples and fixes corners", "[scoring]") {
    const auto boxes = parse_boxes("first [10, 20, 30, 40], second (5.5, 0, 6.5, 1)");
    REQUIRE(boxes.size() == 2);
    CHECK(boxes[0].x_min == 10);
    CHECK(boxes[0].y_max == 40);
    CHECK(boxes[1].x_min == Approx(5.5));

    const auto swapped = parse_boxes("[30, 40, 10, 20]");
    REQUIRE(swapped.size() == 1);
    CHECK(swapped[0].x_min == 10);
    CHECK(swapped[0].x_max == 30);
    CHECK(swapped[0].y_min == 20);
    CHECK(swapped[0].y_max == 40);

    CHECK(parse_boxes("[1, 2, 3]").empty());
    CHECK(parse_boxes("nothing").empty());
}

TEST_CASE("parse_spotting pairs each line's box with its residual text", "[scoring]") {
    const auto pairs = parse_spotting("[0, 0, 10, 10]: STOP\nEXIT -> (20, 0, 30, 10)\nno box\n");
    REQUIRE(pairs.size() == 2);
    CHECK(pairs[0].second == "STOP");
    CHECK(pairs[0].first.x_max == 10);
    CHECK(pairs[1].second == "EXIT");
    CHECK(pairs[1].first.x_min == 20);
}

// ─── task routing ─────────────────────────────────────────────────────

TEST_CASE("score_answer: recognition matches go through vqa routing", "[scoring]") {
    auto s = make_sample(TaskType::Recognition);
    s.gold.answers = {"NO PARKING"};
    CHECK(score_answer(s, "NO PARKING").value == Approx(1.0));
    CHECK(score_answer(s, "no parking.").value == Approx(1.0));  // normalization
    CHECK(score_answer(s, "something else").value == Approx(0.0));

    // eval directive can force a softer metric
    s.gold.answers = {"wednesday"};
    s.eval_directive = "anls";
    CHECK(score_answer(s, "wednesdey").value == Approx(1.0 - 1.0 / 9.0));
}

TEST_CASE("score_answer: parsing uses tree edit similarity", "[scoring]") {
    auto s = make_sample(TaskType::Parsing);
    s.gold.table_markup =
        "<table><tr><td>Item</td><td>Qty</td></tr><tr><td>Pens</td><td>3</td></tr></table>";
    const auto perfect = score_answer(s, s.gold.table_markup);
    CHECK(perfect.metric == "teds");
    CHECK(perfect.value == Approx(1.0));

    const auto off = score_answer(
        s, "<table><tr><td>Item</td><td>Qty</td></tr><tr><td>Pens</td><td>4</td></tr></table>");
    CHECK(off.value < 1.0);
    CHECK(off.value > 0.5);
}

TEST_CASE("score_answer: extraction normalizes field names", "[scoring]") {
    auto s = make_sample(TaskType::Extraction);
    s.gold.fields = {{"Vendor", {"ACME Corp"}}, {"Total", {"128.00"}}};

    CHECK(score_answer(s, "{\"vendor\": \"ACME Corp\", \"total\": \"128.00\"}").value ==
          Approx(1.0));
    CHECK(score_answer(s, "Vendor: ACME Corp\nTotal: 128.00").value == Approx(1.0));

    const auto half = score_answer(s, "vendor: ACME Corp\ntotal: 999.99");
    CHECK(half.value == Approx(0.5));
}

TEST_CASE("score_answer: referring credits each gold box with its best match", "[scoring]") {
    auto s = make_sample(TaskType::Referring);
    s.gold.boxes = {{0, 0, 10, 10}, {20, 0, 30, 10}};

    CHECK(score_answer(s, "[0, 0, 10, 10] and [20, 0, 30, 10]").value == Approx(1.0));
    // one perfect box, one absent: mean of 1 and the overlap with the far box (0)
    CHECK(score_answer(s, "[0, 0, 10, 10]").value == Approx(0.5));
    const auto none = score_answer(s, "I cannot find it");
    CHECK(none.value == Approx(0.0));
    CHECK(none.diagnostics.count("note") == 1);
}

TEST_CASE("score_answer: spotting requires both overlap and text", "[scoring]") {
    auto s = make_sample(TaskType::Spotting);
    s.gold.boxes = {{0, 0, 10, 10}, {20, 0, 30, 10}};
    s.gold.box_texts = {"STOP", "EXIT"};

    CHECK(score_answer(s, "[0,0,10,10]: STOP\n[20,0,30,10]: EXIT").value == Approx(1.0));
    // wrong text at the right place earns nothing for that instance
    CHECK(score_answer(s, "[0,0,10,10]: STOP\n[20,0,30,10]: ENTER").value == Approx(0.5));
    // right text at the wrong place earns nothing either
    CHECK(score_answer(s, "[0,0,10,10]: STOP\n[60,0,70,10]: EXIT").value == Approx(0.5));
}

TEST_CASE("score_answer: counting tolerates prose around the numbers", "[scoring]") {
    auto s = make_sample(TaskType::Counting);
    s.gold.counts = {10};
    CHECK(score_answer(s, "I count 10 pens.").value == Approx(1.0));
    CHECK(score_answer(s, "there are 8").value == Approx(0.8));
    const auto none = score_answer(s, "several");
    CHECK(none.value == Approx(0.0));
    CHECK(none.diagnostics.at("note").get<std::string>().find("no integers") !=
          std::string::npos);
}

TEST_CASE("score_answer: long reading takes the best gold", "[scoring]") {
    auto s = make_sample(TaskType::LongReading);
    s.gold.answers = {"completely different text here", "the quick brown fox jumps over"};
    const auto score = score_answer(s, "the quick brown fox jumps over");
    CHECK(score.metric == "long_reading");
    CHECK(score.value > 0.99);
}

TEST_CASE("score_answer never throws on garbage", "[scoring]") {
    const std::string garbage = "\x01{{{[[[:::\xff unparseable";
    for (const auto task : task_column_order()) {
        auto s = make_sample(task);
        s.gold.answers = {"x"};
        s.gold.fields = {{"k", {"v"}}};
        s.gold.boxes = {{0, 0, 1, 1}};
        s.gold.box_texts = {"x"};
        s.gold.table_markup = "<table><tr><td>x</td></tr></table>";
        s.gold.counts = {1};
        MetricScore score;
        INFO("task=" << to_string(task));
        CHECK_NOTHROW(score = score_answer(s, garbage));
        CHECK(score.value >= 0.0);
        CHECK(score.value <= 1.0);
    }
}

TEST_CASE("score_answer: calculation and understanding route like vqa", "[scoring]") {
    auto calc = make_sample(TaskType::Calculation);
    calc.gold.answers = {"42"};
    CHECK(score_answer(calc, "42").value == Approx(1.0));

    auto und = make_sample(TaskType::Understanding);
    und.gold.answers = {"a fairly long answer with many tokens inside"};
    // long gold routes to anls under the default policy
    const auto close = score_answer(und, "a fairly long answer with many tokens insid");
    CHECK(close.value > 0.9);
    CHECK(close.value < 1.0);
}
