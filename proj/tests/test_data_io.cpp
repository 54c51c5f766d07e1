#include <doctest.h>

#include <filesystem>
#include <random>

#include "smr/data_io.hpp"

using namespace smr;

TEST_SUITE("data_io") {
TEST_CASE("well-formed csv loads as m x n") {
    const auto r = parse_panel("t,a,b\n0,1,2\n1,3,4\n2,5,6\n");
    CHECK(r.panel.rows() == 3);
    CHECK(r.panel.cols() == 2);
    CHECK(r.panel.values(2, 1) == 6.0);
    CHECK(r.panel.labels == std::vector<std::string>{"a", "b"});
    CHECK(r.report.rows_read == 3);
    CHECK(r.report.dropped_rows.empty());
}

TEST_CASE("blank cell with drop-row policy drops one row") {
    const auto r = parse_panel("date,a,b\n2020-01-01,1,2\n2020-01-02,,4\n2020-01-03,5,6\n");
    CHECK(r.panel.rows() == 2);
    REQUIRE(r.report.dropped_rows.size() == 1);
    CHECK(r.report.dropped_rows[0] == 2);
    CHECK(r.panel.timestamps[1] == "2020-01-03");
}

TEST_CASE("forward fill repeats the previous value") {
    LoadOptions o;
    o.fill = FillPolicy::ForwardFill;
    const auto r = parse_panel("t,a,b\n0,1,2\n1,NA,4\n2,5,6\n", o);
    CHECK(r.panel.rows() == 3);
    CHECK(r.panel.values(1, 0) == 1.0);
    CHECK(r.report.filled_rows.size() == 1);
}

TEST_CASE("out-of-order dates are an ordering error") {
    CHECK_THROWS_AS(parse_panel("date,a\n2020-01-02,1\n2020-01-01,2\n2020-01-03,3\n"), DataError);
    CHECK_THROWS_AS(parse_panel("t,a\n0,1\n0,2\n1,3\n"), DataError);
}

TEST_CASE("malformed cell names row and column") {
    try {
        parse_panel("t,a,b\n0,1,2\n1,3,x4\n");
        FAIL("expected a parse error");
    } catch (const DataError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("row 2") != std::string::npos);
        CHECK(msg.find("'b'") != std::string::npos);
    }
}

TEST_CASE("missing file is a data error") { CHECK_THROWS_AS(load_panel("/nonexistent/panel.csv"), DataError); }

TEST_CASE("write and reload is bit exact") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> normal;
    TimePanel p;
    p.values = Matrix(50, 3);
    for (Index i = 0; i < 50; ++i) {
        p.timestamps.push_back(std::to_string(i));
        for (Index j = 0; j < 3; ++j) p.values(i, j) = normal(rng) * std::pow(10.0, static_cast<double>(j * 7 - 7));
    }
    p.labels = {"x", "y", "z"};
    const auto path = std::filesystem::temp_directory_path() / "smr_roundtrip.csv";
    write_panel(path, p);
    const auto r = load_panel(path);
    CHECK(r.panel.values == p.values);
    CHECK(r.panel.timestamps == p.timestamps);
    std::filesystem::remove(path);
}

TEST_CASE("lagged pair without centering") {
    TimePanel p;
    p.values = Matrix(3, 1);
    p.values << 1, 2, 3;
    const auto pair = make_lagged_pair(p, false);
    CHECK(pair.current(0, 0) == 2.0);
    CHECK(pair.current(1, 0) == 3.0);
    CHECK(pair.lagged(0, 0) == 1.0);
    CHECK(pair.lagged(1, 0) == 2.0);
}

TEST_CASE("lagged pair centered by the panel mean") {
    TimePanel p;
    p.values = Matrix(3, 1);
    p.values << 1, 2, 3;
    const auto pair = make_lagged_pair(p, true);
    CHECK(pair.centered);
    CHECK(pair.current(0, 0) == 0.0);
    CHECK(pair.current(1, 0) == 1.0);
    CHECK(pair.lagged(0, 0) == -1.0);
    CHECK(pair.lagged(1, 0) == 0.0);
}

TEST_CASE("lagged pair needs three rows") {
    TimePanel p;
    p.values = Matrix::Ones(2, 2);
    CHECK_THROWS_AS(make_lagged_pair(p, false), DataError);
}

TEST_CASE("lagged views reconstruct the panel") {
    TimePanel p;
    p.values = Matrix::Random(20, 3);
    const auto pair = make_lagged_pair(p, false);
    CHECK(pair.lagged.row(0) == p.values.row(0));
    CHECK(pair.current == p.values.bottomRows(19));
    CHECK(pair.lagged == p.values.topRows(19));
}

namespace {
TimePanel rows_panel(Index m) {
    TimePanel p;
    p.values = Matrix(m, 1);
    for (Index i = 0; i < m; ++i) {
        p.values(i, 0) = static_cast<double>(i);
        p.timestamps.push_back(std::to_string(i));
    }
    p.labels = {"a"};
    return p;
}
}  // namespace

TEST_CASE("rolling windows: 200 rows every 50") {
    const auto w = rolling_windows(rows_panel(400), 200, 50);
    REQUIRE(!w.empty());
    CHECK(w[0].in_sample.rows() == 200);
    CHECK(w[0].in_sample.values(0, 0) == 0.0);
    CHECK(w[0].out_of_sample.rows() == 200);
    CHECK(w[0].out_of_sample.values(0, 0) == 200.0);
    CHECK(w[0].out_of_sample.values(199, 0) == 399.0);
    for (std::size_t i = 1; i < w.size(); ++i) CHECK(w[i].start - w[i - 1].start == 50);
    for (const auto& pair : w) CHECK(pair.out_of_sample.values(0, 0) == pair.in_sample.values(199, 0) + 1.0);
}

TEST_CASE("rolling windows: no out-of-sample rows gives nothing") {
    CHECK(rolling_windows(rows_panel(200), 200, 50).empty());
    CHECK(rolling_windows(rows_panel(100), 200, 50).empty());
}

TEST_CASE("rolling windows: truncated final block") {
    const auto w = rolling_windows(rows_panel(250), 100, 100);
    REQUIRE(w.size() == 2);
    CHECK(w[0].out_of_sample.rows() == 100);
    CHECK(w[1].in_sample.values(0, 0) == 100.0);
    CHECK(w[1].out_of_sample.rows() == 50);
}

TEST_CASE("rolling windows validate arguments") {
    CHECK_THROWS_AS(rolling_windows(rows_panel(10), 2, 1), DomainError);
    CHECK_THROWS_AS(rolling_windows(rows_panel(10), 3, 0), DomainError);
}
}
