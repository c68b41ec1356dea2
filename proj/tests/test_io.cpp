#include "doctest.h"

#include "edsfrey/error.hpp"
#include "edsfrey/io.hpp"

#include "fixtures.hpp"

#include <filesystem>
#include <unistd.h>

using namespace edsfrey;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& tag) {
    fs::path p = fs::temp_directory_path() / ("edsfrey-test-" + tag + "-" + std::to_string(::getpid()));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error raised");
    return ErrorCode::io;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("curve files parse exactly") {
    auto c = parse_curve(R"({"a": ["0","0","0","-25","0"], "point": {"x": "1681/144", "y": "62279/1728"}})");
    CHECK(c.x == make_rational(1681, 144));
    CHECK(c.a[3] == -25);
    auto d = parse_curve(R"({"a": [0,0,1,-1,0], "point": {"x": 0, "y": 0}})");
    CHECK(d.a[2] == 1);
    CHECK(code_of([] { parse_curve("{not json"); }) == ErrorCode::invalid_input);
    CHECK(code_of([] { parse_curve(R"({"a": [0,0,1,-1], "point": {"x": "0", "y": "0"}})"); }) == ErrorCode::invalid_input);
    CHECK(code_of([] { parse_curve(R"({"a": [0,0,1,-1,0], "point": {"x": 0.5, "y": "0"}})"); }) == ErrorCode::invalid_input);
    CHECK(code_of([] { parse_curve(R"({"a": [0,0,1,-1,0], "point": {"x": "1", "y": "1"}})"); }) == ErrorCode::not_on_curve);
    CHECK(code_of([] { parse_curve(R"({"a": [0,0,0,0,0], "point": {"x": "0", "y": "0"}})"); }) == ErrorCode::singular_model);
    CHECK(code_of([] { load_curve("/nonexistent/curve.json"); }) == ErrorCode::io);
}

TEST_CASE("eigenform files") {
    auto f = parse_eigenform(R"({"label": "g", "hecke_poly": ["-2","0","1"],
        "level": [{"prime": "5.1", "exp": 2}, {"prime": "2.1", "exp": 1}],
        "ap": [{"prime": "11.1", "norm": "11", "coords": ["1", "1"]}]})");
    CHECK(f.hecke_poly == ZPoly{-2, 0, 1});
    CHECK(describe(f.level) == "2.1*5.1^2");
    REQUIRE(f.find("11.1") != nullptr);
    CHECK(f.find("11.1")->norm == 11);
    CHECK(code_of([] { parse_eigenform(R"({"label": "g", "hecke_poly": ["0","1"], "ap": [{"prime": "5.1", "coords": ["1","2"]}]})"); }) ==
          ErrorCode::invalid_input);
    auto forms = load_forms(std::string(EDSFREY_DATA_DIR) + "/forms");
    CHECK(forms.size() >= 1);
    CHECK(code_of([] { load_forms("/nonexistent/forms"); }) == ErrorCode::io);
}

TEST_CASE("term cache round trip") {
    fs::path dir = scratch("cache");
    auto c = fixtures::curve("53a_4P");
    {
        TermCache cache(dir);
        EDSequence seq(c.model(), c.point());
        seq.ensure(40);
        cache.store(seq);
    }
    TermCache cache(dir);
    EDSequence warm(c.model(), c.point());
    CHECK(cache.load(warm) == 40);
    CHECK(warm.dense_size() >= 40);
    EDSequence cold(c.model(), c.point());
    for (unsigned long n = 1; n <= 40; ++n) CHECK(warm.B(n) == cold.B(n));
    auto a = check_valuation_grid(warm, 40);
    auto b = check_valuation_grid(cold, 40);
    CHECK(a.passed == b.passed);
    CHECK(a.empirical_r == b.empirical_r);
    CHECK(a.entries.size() == b.entries.size());
    fs::remove_all(dir);
}

TEST_CASE("cache corruption is detected") {
    fs::path dir = scratch("corrupt");
    auto c = fixtures::curve("37a");
    TermCache cache(dir);
    EDSequence seq(c.model(), c.point());
    seq.ensure(12);
    cache.store(seq);
    fs::path file = cache.file_for(seq);
    std::string text = read_text_file(file);

    std::string tampered = text;
    auto pos = tampered.find(" 23 ");
    REQUIRE(pos != std::string::npos);
    tampered.replace(pos, 4, " 25 ");
    write_text_file(file, tampered);
    EDSequence s1(c.model(), c.point());
    CHECK(code_of([&] { cache.load(s1); }) == ErrorCode::cache_corrupt);

    // A consistent footer does not rescue a wrong term: records are re-validated.
    auto body_start = tampered.find('\n') + 1;
    auto footer = tampered.find("# end ");
    std::string body = tampered.substr(body_start, footer - body_start);
    write_text_file(file, tampered.substr(0, footer) + "# end 12 " + fnv1a_hex(body) + "\n");
    EDSequence s1b(c.model(), c.point());
    CHECK(code_of([&] { cache.load(s1b); }) == ErrorCode::cache_corrupt);

    std::string header = text;
    header.replace(header.find("v1 ") + 3, 4, "beef");
    write_text_file(file, header);
    EDSequence s2(c.model(), c.point());
    CHECK(code_of([&] { cache.load(s2); }) == ErrorCode::cache_corrupt);

    write_text_file(file, text.substr(0, text.size() / 2));
    EDSequence s3(c.model(), c.point());
    CHECK(code_of([&] { cache.load(s3); }) == ErrorCode::cache_corrupt);
    fs::remove_all(dir);
}

TEST_CASE("the cache directory is exclusive") {
    fs::path dir = scratch("lock");
    TermCache first(dir);
    CHECK(code_of([&] { TermCache second(dir); }) == ErrorCode::io);
    fs::remove_all(dir);
}

TEST_CASE("certificates") {
    Json a = make_certificate("k", {{"x", "1"}}, {{"y", "2"}}, true);
    CHECK(a.contains("timestamp"));
    CHECK(a["environment"]["program"] == "edsfrey");
    Json b = a;
    b["timestamp"] = "1970-01-01T00:00:00Z";
    CHECK(without_timestamp(a) == without_timestamp(b));
    CHECK(to_json(Integer("123456789012345678901234567890")) == "123456789012345678901234567890");
}

}  // TEST_SUITE
