#include "tabmeas/error.hpp"

namespace tabmeas {

const char* errc_name(errc code) {
    switch (code) {
        case errc::bad_argument: return "bad_argument";
        case errc::ragged_rows: return "ragged_rows";
        case errc::negative_entry: return "negative_entry";
        case errc::non_integer_entry: return "non_integer_entry";
        case errc::all_zero_table: return "all_zero_table";
        case errc::sum_out_of_tolerance: return "sum_out_of_tolerance";
        case errc::divergence_undefined: return "divergence_undefined";
        case errc::degenerate_marginals: return "degenerate_marginals";
        case errc::not_square: return "not_square";
        case errc::all_diagonal: return "all_diagonal";
        case errc::boundary_point: return "boundary_point";
        case errc::non_positive_parameter: return "non_positive_parameter";
    }
    return "unknown";
}

} // namespace tabmeas
