#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "wkbq/errors.hpp"
#include "wkbq/report.hpp"

using namespace wkbq;

namespace {

std::string csv_of(const Report& r) {
    std::ostringstream s;
    write_csv(r, s);
    return s.str();
}

std::vector<std::string> names_of(const Report& r) {
    std::vector<std::string> names;
    for (const auto& f : r.fields) names.push_back(f.first);
    return names;
}

// Text that never reads back as a number and is never empty.
std::string random_text(std::mt19937_64& rng) {
    static const std::string pieces[] = {"a", "b c", ",", "\"", "\n", " lead", "trail ", "x=1", "(", "inf!", "\r\n"};
    std::uniform_int_distribution<int> n(1, 5);
    std::uniform_int_distribution<std::size_t> pick(0, std::size(pieces) - 1);
    std::string s = "t";
    for (int i = n(rng); i > 0; --i) s += pieces[pick(rng)];
    return s;
}

Cell random_cell(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> kind(0, 6);
    std::uniform_real_distribution<double> mant(-10.0, 10.0);
    std::uniform_int_distribution<int> expo(-300, 300);
    switch (kind(rng)) {
        case 0: return std::monostate{};
        case 1: return static_cast<std::int64_t>(std::uniform_int_distribution<int>(-100000, 100000)(rng));
        case 2: return mant(rng) * std::pow(10.0, expo(rng) / 10);
        case 3: return mant(rng);
        case 4: return mant(rng) > 0 ? INFINITY : -INFINITY;
        default: return random_text(rng);
    }
}

}  // namespace

TEST_CASE("number formatting") {
    CHECK(format_number(0.5) == "0.5");
    CHECK(format_number(-4.5) == "-4.5");
    CHECK(format_number(1.0 / 3.0) == "0.333333333333");
    CHECK(format_number(1e-300) == "1e-300");
    CHECK(format_number(INFINITY) == "inf");
    CHECK(format_number(-INFINITY) == "-inf");
    CHECK(format_number(NAN) == "nan");
}

TEST_CASE("CSV layout and quoting") {
    Report r;
    r.fields = {{"potential", std::string("gaussian(V0=0.1,width=1)")}, {"beta", 1.0}};
    r.columns = {"n", "energy", "error"};
    r.add_row({std::int64_t{0}, -0.5, std::string("said \"no\"")});
    r.add_row({std::int64_t{1}, Cell{}, std::string()});
    CHECK(csv_of(r) ==
          "potential,beta,n,energy,error\n"
          "\"gaussian(V0=0.1,width=1)\",1,0,-0.5,\"said \"\"no\"\"\"\n"
          "\"gaussian(V0=0.1,width=1)\",1,1,,\n");
    CHECK_THROWS_AS(r.add_row({std::int64_t{2}}), ReportError);
}

TEST_CASE("JSON layout") {
    Report r;
    r.fields = {{"potential", std::string("harmonic(A=1)")}, {"beta", 0.70710678118654752}, {"reference", std::string("exact")}};
    r.columns = {"n", "resummed", "err_resummed"};
    r.add_row({std::int64_t{0}, 0.5, 1.0 / 3.0});
    r.add_row({std::int64_t{1}, INFINITY, Cell{}});
    const auto j = to_json(r);
    CHECK(j["beta"].get<double>() == 0.707106781187);
    CHECK(j["rows"].size() == 2);
    CHECK(j["rows"][0]["err_resummed"].get<double>() == 0.333333333333);
    CHECK(j["rows"][1]["resummed"] == "inf");
    CHECK(j["rows"][1]["err_resummed"].is_null());
    CHECK(j.begin().key() == "potential");
    std::ostringstream a;
    std::ostringstream b;
    write_json(r, a);
    write_json(r, b);
    CHECK(a.str() == b.str());
}

TEST_CASE("every CSV parses back to the JSON-equivalent structure") {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> ncol(1, 8);
    std::uniform_int_distribution<int> nrow(0, 12);
    std::uniform_int_distribution<int> nfield(0, 3);
    for (int trial = 0; trial < 500; ++trial) {
        Report r;
        for (int f = nfield(rng); f > 0; --f) {
            Cell c = random_cell(rng);
            if (std::holds_alternative<std::monostate>(c)) c = std::int64_t{f};
            r.fields.emplace_back("field" + std::to_string(f) + random_text(rng), c);
        }
        for (int c = ncol(rng); c > 0; --c) r.columns.push_back("col" + std::to_string(c) + random_text(rng));
        for (int k = nrow(rng); k > 0; --k) {
            std::vector<Cell> row;
            for (std::size_t c = 0; c < r.columns.size(); ++c) row.push_back(random_cell(rng));
            r.add_row(std::move(row));
        }
        const std::string csv = csv_of(r);
        const Report back = parse_csv(csv, names_of(r));
        INFO(csv);
        if (r.rows.empty()) {
            CHECK(back.columns == r.columns);
            CHECK(back.rows.empty());
        } else {
            CHECK(to_json(back) == to_json(r));
        }
        CHECK(csv_of(r) == csv);
    }
}

TEST_CASE("malformed CSV is rejected") {
    const std::vector<std::string> none;
    CHECK_THROWS_AS(parse_csv("", none), ReportError);
    CHECK_THROWS_AS(parse_csv("a,b\n1\n", none), ReportError);
    CHECK_THROWS_AS(parse_csv("a,b\n\"1,2\n", none), ReportError);
    CHECK_THROWS_AS(parse_csv("a,b\n1\"x\",2\n", none), ReportError);
    const std::vector<std::string> field{"potential"};
    CHECK_THROWS_AS(parse_csv("beta,n\n1,0\n", field), ReportError);
    const Report ok = parse_csv("a,b\r\n1,x\r\n", none);
    CHECK(ok.rows.size() == 1);
    CHECK(std::get<std::int64_t>(ok.rows[0][0]) == 1);
    CHECK(std::get<std::string>(ok.rows[0][1]) == "x");
}
