#include "tabmeas/table.hpp"

#include "tabmeas/error.hpp"
#include "tabmeas/kernels.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <string_view>
#include <system_error>

namespace tabmeas {

void validate_dims(Dims dims) {
    if (dims.r < 2 || dims.c < 2)
        raise(errc::bad_argument, "table must have at least 2 rows and 2 columns");
}

CountTable::CountTable(Dims dims, std::vector<double> counts)
    : dims_(dims), counts_(std::move(counts)) {
    validate_dims(dims_);
    if (counts_.size() != dims_.cells())
        raise(errc::bad_argument, "count vector length does not match dimensions");
    for (double v : counts_) {
        if (!std::isfinite(v) || v < 0.0)
            raise(errc::negative_entry, "counts must be nonnegative");
        if (v != std::rint(v))
            raise(errc::non_integer_entry, "counts must be integers");
    }
    n_ = kernels::sum(counts_.data(), counts_.size());
    if (n_ < 1.0) raise(errc::all_zero_table, "count table must contain at least one observation");
}

ProbTable ProbTable::normalized(Dims dims, std::vector<double> probs) {
    validate_dims(dims);
    if (probs.size() != dims.cells())
        raise(errc::bad_argument, "probability vector length does not match dimensions");
    for (double v : probs) {
        if (!std::isfinite(v) || v < 0.0)
            raise(errc::negative_entry, "probabilities must be nonnegative");
    }
    double total = kernels::sum(probs.data(), probs.size());
    if (std::fabs(total - 1.0) > 1e-6)
        raise(errc::sum_out_of_tolerance, "probabilities must sum to 1 within 1e-6");
    for (double& v : probs) v /= total;
    return ProbTable(dims, std::move(probs));
}

ProbTable ProbTable::from_simplex(Dims dims, std::vector<double> probs) {
    validate_dims(dims);
    if (probs.size() != dims.cells())
        raise(errc::bad_argument, "probability vector length does not match dimensions");
    for (double v : probs) {
        if (!std::isfinite(v) || v < 0.0)
            raise(errc::negative_entry, "probabilities must be nonnegative");
    }
    double total = kernels::sum(probs.data(), probs.size());
    if (std::fabs(total - 1.0) > 1e-12)
        raise(errc::sum_out_of_tolerance, "probabilities must sum to 1 within 1e-12");
    return ProbTable(dims, std::move(probs));
}

std::vector<double> ProbTable::row_marginals() const {
    std::vector<double> out(dims_.r, 0.0);
    for (std::size_t i = 0; i < dims_.r; ++i)
        out[i] = kernels::sum(probs_.data() + i * dims_.c, dims_.c);
    return out;
}

std::vector<double> ProbTable::col_marginals() const {
    std::vector<double> out(dims_.c, 0.0);
    for (std::size_t i = 0; i < dims_.r; ++i)
        for (std::size_t j = 0; j < dims_.c; ++j) out[j] += probs_[i * dims_.c + j];
    return out;
}

// ---- CSV I/O --------------------------------------------------------------

namespace {

// Splits CSV text into a row-major value grid, validating rectangularity.
struct grid {
    Dims dims;
    std::vector<double> values;
};

double parse_cell(std::string_view token) {
    // Trim surrounding spaces/tabs/carriage returns.
    while (!token.empty() && (token.front() == ' ' || token.front() == '\t' || token.front() == '\r'))
        token.remove_prefix(1);
    while (!token.empty() && (token.back() == ' ' || token.back() == '\t' || token.back() == '\r'))
        token.remove_suffix(1);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size())
        raise(errc::bad_argument, "unparseable CSV cell '" + std::string(token) + "'");
    return value;
}

grid parse_grid(const std::string& text) {
    grid g;
    std::size_t cols = 0;
    std::size_t rows = 0;
    std::string_view rest(text);
    while (!rest.empty()) {
        std::size_t eol = rest.find('\n');
        std::string_view line = rest.substr(0, eol);
        rest = (eol == std::string_view::npos) ? std::string_view() : rest.substr(eol + 1);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue; // tolerate blank lines (incl. trailing newline)

        std::size_t row_cols = 0;
        std::string_view cursor = line;
        while (true) {
            std::size_t comma = cursor.find(',');
            g.values.push_back(parse_cell(cursor.substr(0, comma)));
            ++row_cols;
            if (comma == std::string_view::npos) break;
            cursor = cursor.substr(comma + 1);
        }
        if (rows == 0) {
            cols = row_cols;
        } else if (row_cols != cols) {
            raise(errc::ragged_rows, "CSV rows have unequal lengths");
        }
        ++rows;
    }
    if (rows < 2 || cols < 2)
        raise(errc::bad_argument, "table must have at least 2 rows and 2 columns");
    g.dims = Dims{rows, cols};
    return g;
}

void append_double(std::string& out, double value) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    (void)ec;
    out.append(buf, ptr);
}

} // namespace

CountTable parse_count_table(const std::string& text) {
    grid g = parse_grid(text);
    return CountTable(g.dims, std::move(g.values));
}

ProbTable parse_prob_table(const std::string& text) {
    grid g = parse_grid(text);
    return ProbTable::normalized(g.dims, std::move(g.values));
}

std::string to_csv(const CountTable& t) {
    std::string out;
    const Dims d = t.dims();
    for (std::size_t i = 0; i < d.r; ++i) {
        for (std::size_t j = 0; j < d.c; ++j) {
            if (j > 0) out.push_back(',');
            char buf[32];
            long long v = static_cast<long long>(std::llrint(t.at(i, j)));
            auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
            (void)ec;
            out.append(buf, ptr);
        }
        out.push_back('\n');
    }
    return out;
}

std::string to_csv(const ProbTable& p) {
    std::string out;
    const Dims d = p.dims();
    for (std::size_t i = 0; i < d.r; ++i) {
        for (std::size_t j = 0; j < d.c; ++j) {
            if (j > 0) out.push_back(',');
            append_double(out, p.at(i, j));
        }
        out.push_back('\n');
    }
    return out;
}

// ---- smoothing ------------------------------------------------------------

ProbTable posterior_mean(const CountTable& t, double alpha) {
    if (!(alpha >= 0.0)) raise(errc::bad_argument, "alpha must be nonnegative");
    const std::size_t k = t.dims().cells();
    std::vector<double> out(k);
    const double denom = t.n() + static_cast<double>(k) * alpha;
    kernels::smooth(t.counts().data(), alpha, denom, out.data(), k);
    return ProbTable::from_simplex(t.dims(), std::move(out));
}

ProbTable sample_proportions(const CountTable& t) { return posterior_mean(t, 0.0); }

} // namespace tabmeas
