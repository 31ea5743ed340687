#pragma once

#include <ellseg/grid.hpp>

namespace ellseg {

/// Exact Euclidean distance from every pixel to the nearest set pixel of
/// `seeds` (0 on seeds). Returns +inf everywhere when no seed is set.
RealGrid euclidean_distance(const BinaryGrid& seeds);

/// Signed distance for a region: distance to the region outside it, minus the
/// distance to the complement inside it (negative inside, positive outside).
/// All zeros when the region is empty or covers the whole grid.
RealGrid signed_distance(const BinaryGrid& region);

}  // namespace ellseg
