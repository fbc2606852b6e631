#pragma once

#include "tabmeas/table.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

// ---------------------------------------------------------------------------
// shared test fixtures
//
// Six truth tables with three association strengths (4x5) and three
// symmetry-departure strengths (4x4). The values are embedded here AND
// shipped as data/*.csv for the CLI; a drift-guard test asserts the two
// copies agree.
// ---------------------------------------------------------------------------

namespace fixtures {

// 4x5, weak association
inline const std::vector<double> assoc_weak_cells = {
    0.048, 0.055, 0.105, 0.023, 0.018, //
    0.032, 0.061, 0.035, 0.018, 0.098, //
    0.055, 0.131, 0.016, 0.082, 0.054, //
    0.029, 0.012, 0.032, 0.033, 0.063,
};

// 4x5, middling association
inline const std::vector<double> assoc_mid_cells = {
    0.154, 0.013, 0.021, 0.018, 0.145, //
    0.017, 0.017, 0.159, 0.015, 0.012, //
    0.015, 0.157, 0.011, 0.017, 0.018, //
    0.013, 0.011, 0.013, 0.163, 0.011,
};

// 4x5, strong association
inline const std::vector<double> assoc_strong_cells = {
    0.185, 0.006, 0.003, 0.006, 0.182, //
    0.004, 0.003, 0.188, 0.005, 0.004, //
    0.005, 0.187, 0.004, 0.007, 0.003, //
    0.006, 0.004, 0.005, 0.190, 0.003,
};

// 4x4, near-symmetric
inline const std::vector<double> sym_weak_cells = {
    0.100, 0.060, 0.038, 0.071, //
    0.038, 0.100, 0.061, 0.026, //
    0.068, 0.051, 0.100, 0.031, //
    0.029, 0.066, 0.061, 0.100,
};

// 4x4, middling asymmetry
inline const std::vector<double> sym_mid_cells = {
    0.100, 0.018, 0.012, 0.007, //
    0.094, 0.100, 0.021, 0.014, //
    0.082, 0.089, 0.100, 0.023, //
    0.071, 0.081, 0.088, 0.100,
};

// 4x4, strong asymmetry
inline const std::vector<double> sym_strong_cells = {
    0.100, 0.089, 0.004, 0.102, //
    0.005, 0.100, 0.094, 0.007, //
    0.084, 0.002, 0.100, 0.111, //
    0.009, 0.088, 0.005, 0.100,
};

inline tabmeas::ProbTable assoc_weak() {
    return tabmeas::ProbTable::normalized({4, 5}, assoc_weak_cells);
}
inline tabmeas::ProbTable assoc_mid() {
    return tabmeas::ProbTable::normalized({4, 5}, assoc_mid_cells);
}
inline tabmeas::ProbTable assoc_strong() {
    return tabmeas::ProbTable::normalized({4, 5}, assoc_strong_cells);
}
inline tabmeas::ProbTable sym_weak() {
    return tabmeas::ProbTable::normalized({4, 4}, sym_weak_cells);
}
inline tabmeas::ProbTable sym_mid() {
    return tabmeas::ProbTable::normalized({4, 4}, sym_mid_cells);
}
inline tabmeas::ProbTable sym_strong() {
    return tabmeas::ProbTable::normalized({4, 4}, sym_strong_cells);
}

// Counts from scaling a 3-decimal fixture by `scale` (entries stay integral
// for multiples of 1000).
inline tabmeas::CountTable scaled_counts(const std::vector<double>& cells, tabmeas::Dims dims,
                                         double scale) {
    std::vector<double> counts(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
        counts[i] = static_cast<double>(static_cast<long long>(cells[i] * scale + 0.5));
    }
    return tabmeas::CountTable(dims, std::move(counts));
}

inline std::string data_dir() {
    const char* dir = std::getenv("TABMEAS_DATA_DIR");
    return dir != nullptr ? dir : "data";
}

inline std::string read_data_file(const std::string& name) {
    const std::string path = data_dir() + "/" + name;
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("missing test data file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace fixtures
