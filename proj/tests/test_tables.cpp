#include "doctest.h"
#include "fixtures.hpp"

#include "tabmeas/error.hpp"
#include "tabmeas/table.hpp"

#include <cmath>
#include <functional>

using namespace tabmeas;

namespace {

errc code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const error& e) {
        return e.code();
    }
    FAIL("expected a tabmeas::error");
    return errc::bad_argument;
}

} // namespace

TEST_CASE("count table parses a small grid") {
    const CountTable t = parse_count_table("1,2\n3,4\n");
    CHECK(t.dims() == Dims{2, 2});
    CHECK(t.counts() == std::vector<double>{1, 2, 3, 4});
    CHECK(t.n() == 10.0);
}

TEST_CASE("count table parse errors carry the right codes") {
    CHECK(code_of([] { parse_count_table("0,0\n0,0"); }) == errc::all_zero_table);
    CHECK(code_of([] { parse_count_table("1,2\n3"); }) == errc::ragged_rows);
    CHECK(code_of([] { parse_count_table("1,-2\n3,4"); }) == errc::negative_entry);
    CHECK(code_of([] { parse_count_table("1,2.5\n3,4"); }) == errc::non_integer_entry);
    CHECK(code_of([] { parse_count_table("1,2"); }) == errc::bad_argument);     // one row
    CHECK(code_of([] { parse_count_table("1\n2"); }) == errc::bad_argument);    // one column
    CHECK(code_of([] { parse_count_table("1,x\n3,4"); }) == errc::bad_argument);
}

TEST_CASE("probability table parses, renormalizes, and validates") {
    const ProbTable p = parse_prob_table("0.5,0.5\n0.0,0.0\n");
    CHECK(p.dims() == Dims{2, 2});
    CHECK(p.at(0, 0) == doctest::Approx(0.5));

    CHECK(code_of([] { parse_prob_table("0.4,0.4\n0.05,0.05"); }) ==
          errc::sum_out_of_tolerance);
    CHECK(code_of([] { parse_prob_table("0.5,0.6\n-0.05,-0.05"); }) == errc::negative_entry);

    // 3-decimal fixture grids land exactly on the simplex after renormalization.
    const ProbTable mid = parse_prob_table(fixtures::read_data_file("assoc_mid.csv"));
    double total = 0.0;
    for (double v : mid.probs()) total += v;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("data files match the embedded fixtures") {
    const struct {
        const char* file;
        const std::vector<double>* cells;
        Dims dims;
    } rows[] = {
        {"assoc_weak.csv", &fixtures::assoc_weak_cells, {4, 5}},
        {"assoc_mid.csv", &fixtures::assoc_mid_cells, {4, 5}},
        {"assoc_strong.csv", &fixtures::assoc_strong_cells, {4, 5}},
        {"sym_weak.csv", &fixtures::sym_weak_cells, {4, 4}},
        {"sym_mid.csv", &fixtures::sym_mid_cells, {4, 4}},
        {"sym_strong.csv", &fixtures::sym_strong_cells, {4, 4}},
    };
    for (const auto& row : rows) {
        CAPTURE(row.file);
        const ProbTable parsed = parse_prob_table(fixtures::read_data_file(row.file));
        const ProbTable embedded = ProbTable::normalized(row.dims, *row.cells);
        REQUIRE(parsed.dims() == embedded.dims());
        for (std::size_t i = 0; i < parsed.probs().size(); ++i)
            CHECK(parsed.probs()[i] == embedded.probs()[i]);
    }
}

TEST_CASE("marginals sum the right axes") {
    const ProbTable p = fixtures::assoc_mid();
    const std::vector<double> rows = p.row_marginals();
    const std::vector<double> cols = p.col_marginals();
    REQUIRE(rows.size() == 4);
    REQUIRE(cols.size() == 5);
    CHECK(rows[0] == doctest::Approx(0.154 + 0.013 + 0.021 + 0.018 + 0.145));
    CHECK(cols[1] == doctest::Approx(0.013 + 0.017 + 0.157 + 0.011));
    double total = 0.0;
    for (double v : rows) total += v;
    CHECK(total == doctest::Approx(1.0));
}

TEST_CASE("posterior mean matches hand arithmetic") {
    const CountTable t(Dims{2, 2}, {1, 2, 3, 4});
    SUBCASE("alpha = 1 adds one pseudo-count per cell") {
        const ProbTable p = posterior_mean(t, 1.0);
        CHECK(p.probs()[0] == doctest::Approx(2.0 / 14.0).epsilon(1e-15));
        CHECK(p.probs()[1] == doctest::Approx(3.0 / 14.0).epsilon(1e-15));
        CHECK(p.probs()[2] == doctest::Approx(4.0 / 14.0).epsilon(1e-15));
        CHECK(p.probs()[3] == doctest::Approx(5.0 / 14.0).epsilon(1e-15));
    }
    SUBCASE("alpha = 0 reduces to sample proportions") {
        const ProbTable p = posterior_mean(t, 0.0);
        CHECK(p.probs() == std::vector<double>{0.1, 0.2, 0.3, 0.4});
    }
    SUBCASE("half pseudo-count on a sparse table") {
        const CountTable sparse(Dims{2, 2}, {0, 0, 0, 10});
        const ProbTable p = posterior_mean(sparse, 0.5);
        CHECK(p.probs()[0] == doctest::Approx(0.5 / 12.0).epsilon(1e-15));
        CHECK(p.probs()[3] == doctest::Approx(10.5 / 12.0).epsilon(1e-15));
    }
    SUBCASE("negative alpha is rejected") {
        CHECK(code_of([&] { posterior_mean(t, -0.1); }) == errc::bad_argument);
    }
}

TEST_CASE("posterior mean properties") {
    const CountTable t(Dims{2, 3}, {5, 0, 1, 2, 0, 9});
    SUBCASE("strictly interior for alpha > 0, sums to 1") {
        const ProbTable p = posterior_mean(t, 0.25);
        double total = 0.0;
        for (double v : p.probs()) {
            CHECK(v > 0.0);
            total += v;
        }
        CHECK(std::fabs(total - 1.0) <= 1e-12);
    }
    SUBCASE("alpha = 0 equals sample proportions bit-for-bit") {
        const ProbTable a = posterior_mean(t, 0.0);
        const ProbTable b = sample_proportions(t);
        for (std::size_t i = 0; i < a.probs().size(); ++i) CHECK(a.probs()[i] == b.probs()[i]);
    }
    SUBCASE("huge alpha approaches the uniform table") {
        const ProbTable p = posterior_mean(t, 1e9);
        for (double v : p.probs()) CHECK(std::fabs(v - 1.0 / 6.0) < 1e-6);
    }
}

TEST_CASE("count CSV round-trips bit-identically") {
    const std::string text = "12,0,7\n3,1000001,4\n";
    const CountTable t = parse_count_table(text);
    const std::string serialized = to_csv(t);
    CHECK(serialized == text);
    const CountTable again = parse_count_table(serialized);
    for (std::size_t i = 0; i < t.counts().size(); ++i)
        CHECK(t.counts()[i] == again.counts()[i]);
}

TEST_CASE("probability CSV round-trips through shortest formatting") {
    // Shortest formatting reproduces each double exactly; only the
    // renormalization on re-parse may touch the last ulp.
    const ProbTable p = fixtures::sym_mid();
    const ProbTable again = parse_prob_table(to_csv(p));
    for (std::size_t i = 0; i < p.probs().size(); ++i)
        CHECK(std::fabs(p.probs()[i] - again.probs()[i]) <= 1e-15);
}

TEST_CASE("dims below 2x2 are rejected") {
    CHECK(code_of([] { CountTable(Dims{1, 4}, {1, 2, 3, 4}); }) == errc::bad_argument);
    CHECK(code_of([] { ProbTable::normalized(Dims{4, 1}, {0.25, 0.25, 0.25, 0.25}); }) ==
          errc::bad_argument);
}
