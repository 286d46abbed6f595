#include <doctest.h>

#include <limits>
#include <random>
#include <sstream>

#include "pelve/csv.hpp"

namespace pelve {

TEST_CASE("number formatting round-trips exactly") {
    std::mt19937_64 gen(1);
    std::uniform_real_distribution<double> unif(-1e6, 1e6);
    for (int i = 0; i < 2000; ++i) {
        const double x = unif(gen) * std::pow(10.0, static_cast<int>(gen() % 40) - 20);
        CHECK(csv::parse_number(csv::format_number(x)) == x);
    }
    CHECK(csv::format_number(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(csv::format_number(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(std::isnan(csv::parse_number("nan")));
    CHECK(csv::format_number(1.0) == "1");
}

TEST_CASE("malformed tables are rejected") {
    std::istringstream ragged("a,b\n1,2\n3\n");
    CHECK_THROWS_AS(csv::read(ragged), csv::ParseError);
    std::istringstream text("a\nhello\n");
    CHECK_THROWS_AS(csv::read(text), csv::ParseError);
    std::istringstream empty("");
    CHECK_THROWS_AS(csv::read(empty), csv::ParseError);
    std::istringstream ok("x,y\n1,inf\n2.5,-3\n");
    const auto t = csv::read(ok);
    CHECK(t.rows() == 2);
    CHECK(std::isinf(t.column("y")[0]));
    CHECK_THROWS_AS(t.column("z"), csv::ParseError);
}

}  // namespace pelve
