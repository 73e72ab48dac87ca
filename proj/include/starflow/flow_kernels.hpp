#pragma once

#include "starflow/fields.hpp"

namespace starflow {

/// In-place capacity projection with the exemption flow removed and re-added
/// around it:
///   lambda = max{0, q . e};  q <- lambda e + Proj_{|.| <= cap}(q - lambda e)
/// A null direction, a zero direction vector, or exemption_enabled == false
/// all reduce to the plain ball projection, bit for bit.
void exempted_projection(VectorField& q, const VectorField* e, const ScalarField& cap,
                         bool exemption_enabled);

/// max_x (|q - lambda e| - cap), clamped at zero; zero means the primal
/// spatial capacity holds everywhere.
double capacity_excess(const VectorField& q, const VectorField* e, const ScalarField& cap,
                       bool exemption_enabled);

}  // namespace starflow
