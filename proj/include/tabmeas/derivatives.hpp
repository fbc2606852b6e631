#pragma once

#include "tabmeas/measures.hpp"
#include "tabmeas/table.hpp"

#include <functional>
#include <vector>

// ---------------------------------------------------------------------------
// derivative engine
//
// First and second coordinatewise partials of a measure, treating each of
// the rc cells as a free variable in the ambient space (NOT projected onto
// the simplex — the covariance factor in the MSE expansion accounts for the
// sum-to-one constraint). Indices follow the row-major flattening.
//
// Analytic closed forms are the primary path; central finite differences
// over the same raw evaluation are kept as an independent oracle.
// ---------------------------------------------------------------------------

namespace tabmeas {

struct DerivativeBundle {
    double value = 0.0;
    std::vector<double> gradient; // length rc
    std::vector<double> hessian;  // rc x rc, row-major
};

// Analytic value/gradient/Hessian of the measure at p. The partials blow up
// at the boundary, so every cell the measure reads must be strictly
// positive: all cells for the association coefficient, all off-diagonal
// cells for the symmetry measure. Raises boundary_point when a required
// cell is <= 1e-12.
DerivativeBundle derivatives(const MeasureSpec& spec, const ProbTable& p);

// Same computation into a caller-owned bundle (resized as needed), reading
// a raw row-major buffer. This is the allocation-free path for simulation
// loops.
void derivatives_raw(const MeasureSpec& spec, const double* p, Dims dims, DerivativeBundle& out);

// ---- finite-difference oracle ----------------------------------------------
// Central differences of an arbitrary scalar function of the raw buffer.
// Default steps: 1e-5 (gradient), 1e-4 (Hessian).

using RawFn = std::function<double(const double*, Dims)>;

std::vector<double> fd_gradient(const RawFn& f, const double* p, Dims dims, double h = 1e-5);
std::vector<double> fd_hessian(const RawFn& f, const double* p, Dims dims, double h = 1e-4);

// Convenience wrappers differencing the measure itself.
std::vector<double> fd_gradient(const MeasureSpec& spec, const ProbTable& p, double h = 1e-5);
std::vector<double> fd_hessian(const MeasureSpec& spec, const ProbTable& p, double h = 1e-4);

} // namespace tabmeas
