#include <doctest.h>

#include <cstdlib>
#include <sstream>

#include <json.hpp>

#include "zerocorr/error.hpp"
#include "zerocorr/io.hpp"
#include "zerocorr/table.hpp"

using namespace zerocorr;

TEST_SUITE("table_io") {

TEST_CASE("csv quoting and float format") {
    CHECK(csv_field("plain") == "plain");
    CHECK(csv_field("a,b") == "\"a,b\"");
    CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(csv_field("two\nlines") == "\"two\nlines\"");
    const double x = 0.1 + 0.2;
    CHECK(std::strtod(format_double(x).c_str(), nullptr) == x);
    CHECK(format_double(1.0 / 3.0) == "0.33333333333333331");
}

TEST_CASE("csv layout") {
    ResultTable t;
    t.set_meta("seed", "5");
    t.add_column("r", Provenance::input);
    t.add_column("note", Provenance::input);
    t.add_row({0.5, std::string("x,y")});
    std::ostringstream os;
    t.write_csv(os);
    CHECK(os.str() == "# seed=5\n# provenance=r:input;note:input\nr,note\n0.5,\"x,y\"\n");
}

TEST_CASE("mc columns need a std error partner") {
    ResultTable t;
    t.add_column("v", Provenance::mc);
    std::ostringstream os;
    CHECK_THROWS_AS(t.write_csv(os), InputError);
    t.add_column("v_se", Provenance::mc);
    CHECK_NOTHROW(t.write_csv(os));
}

TEST_CASE("json round trip") {
    ResultTable t;
    t.set_meta("version", "0.1.0");
    t.add_column("N", Provenance::input);
    t.add_column("value", Provenance::wick);
    t.add_row({std::int64_t{64}, 0.125});
    std::ostringstream os;
    t.write_json(os);
    const auto doc = nlohmann::json::parse(os.str());
    CHECK(doc["metadata"]["version"] == "0.1.0");
    CHECK(doc["columns"][1]["provenance"] == "wick");
    CHECK(doc["rows"][0]["N"] == 64);
    CHECK(doc["rows"][0]["value"].get<double>() == 0.125);
}

TEST_CASE("row width is checked") {
    ResultTable t;
    t.add_column("a", Provenance::input);
    CHECK_THROWS_AS(t.add_row({1.0, 2.0}), InputError);
    CHECK_THROWS_AS(t.add_column("a", Provenance::wick), InputError);
}

TEST_CASE("points file") {
    std::istringstream in(
        "# two configurations\n"
        "0,0  1,0\n"
        "0.5,-1 0,2\n"
        "\n\n"
        "3,4 0,0\n");
    const auto configs = read_points(in);
    REQUIRE(configs.size() == 2);
    CHECK(configs[0].n() == 2);
    CHECK(configs[0].m() == 2);
    CHECK(configs[0].point(1)[0] == Complex(0.5, -1));
    CHECK(configs[1].n() == 1);
}

TEST_CASE("malformed points are rejected") {
    std::istringstream bad("1;2\n");
    CHECK_THROWS_AS(read_points(bad), InputError);
    std::istringstream ragged("0,0 1,1\n2,2\n");
    CHECK_THROWS_AS(read_points(ragged), InputError);
    std::istringstream empty("# nothing\n");
    CHECK_THROWS_AS(read_points(empty), InputError);
    std::istringstream twice("1,1\n1,1\n");
    CHECK_THROWS_AS(read_points(twice), ConfigurationError);
}

TEST_CASE("config file") {
    std::istringstream in("# run\nseed = 9\n\nr_grid=0.5,1\n");
    const auto kv = read_config(in);
    REQUIRE(kv.size() == 2);
    CHECK(kv[0].first == "seed");
    CHECK(kv[0].second == "9");
    CHECK(kv[1].second == "0.5,1");
    std::istringstream bad("novalue\n");
    CHECK_THROWS_AS(read_config(bad), InputError);
}

}
