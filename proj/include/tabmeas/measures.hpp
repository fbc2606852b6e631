#pragma once

#include "tabmeas/table.hpp"

#include <string>

// ---------------------------------------------------------------------------
// association and symmetry measures
//
// Two normalized indices of a two-way table, both parameterized by a power
// lambda and both taking values in [0, 1]:
//
//   cramer_v      association between rows and columns: a power divergence
//                 between the joint cell probabilities and the independence
//                 table (outer product of the marginals), normalized by its
//                 maximum given the row marginals. Columns are treated as
//                 the explanatory variable; transpose the table to flip.
//   symmetry_phi  departure from symmetry of a square table: for each
//                 off-diagonal pair, the divergence of (p_ij, p_ji) from a
//                 50/50 split, weighted by the pair's share of all
//                 off-diagonal mass.
//
// lambda = 0 uses the analytic Kullback–Leibler / Shannon limits rather
// than numerical limiting. Zero-cell conventions: 0*log(0) = 0 and
// 0*(0/q)^lambda = 0; a symmetric pair with zero total mass contributes 0.
// ---------------------------------------------------------------------------

namespace tabmeas {

enum class MeasureKind { cramer_v, symmetry_phi };

struct MeasureSpec {
    MeasureKind kind = MeasureKind::cramer_v;
    double lambda = 1.0;
};

// Raises unless the spec is coherent for tables of the given shape:
// cramer_v needs lambda >= 0; symmetry_phi needs lambda > -1 and r == c.
void validate_spec(const MeasureSpec& spec, Dims dims);

// Canonical names used by the CLI and CSV output: "cramer-v" and
// "symmetry-phi". parse_measure raises bad_argument on anything else.
const char* measure_name(MeasureKind kind);
MeasureKind parse_measure(const std::string& text);

// Power divergence between distributions p and q on the same grid:
// lambda > 0: (1/(lambda(lambda+1))) sum p_ij [(p_ij/q_ij)^lambda - 1];
// lambda = 0: Kullback–Leibler sum p_ij log(p_ij/q_ij).
// Raises divergence_undefined when some p_ij > 0 has q_ij = 0.
double power_divergence(const ProbTable& p, const ProbTable& q, double lambda);

// Association coefficient in [0, 1]. Raises degenerate_marginals when the
// normalizer vanishes (fewer than two nonzero row marginals).
double cramer_v(const ProbTable& p, double lambda);

// Symmetry-departure coefficient in [0, 1]. Raises not_square for r != c
// and all_diagonal when the off-diagonal mass is zero.
double symmetry_phi(const ProbTable& p, double lambda);

// Dispatch on spec.kind.
double measure_value(const MeasureSpec& spec, const ProbTable& p);

// Evaluation on a raw row-major buffer that need not lie exactly on the
// simplex. This is the measure as a plain function of rc nonnegative reals
// — exactly what the derivative engine differentiates and what the
// finite-difference oracle perturbs. No [0,1] clamping is applied here.
double measure_value_raw(const MeasureSpec& spec, const double* p, Dims dims);

} // namespace tabmeas
