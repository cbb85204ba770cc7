#pragma once

#include <cstdint>
#include <vector>

#include "texfrac/gray_image.hpp"

namespace texfrac {

/// A texture lifted to the integer 3D lattice: one point (y, x, z) per
/// pixel column, z = gray level. One pixel step equals one gray-level step.
struct HeightField {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> z;  // row-major, size == width * height

    std::uint8_t at(int x, int y) const {
        return z[static_cast<std::size_t>(y) * width + x];
    }
    std::size_t point_count() const { return z.size(); }
};

HeightField lift(const GrayImage& img);

/// The exact set of squared distances achievable between integer lattice
/// points, up to r_max^2. By Legendre's three-square theorem these are the
/// integers in [1, r_max^2] not of the form 4^a(8b+7).
struct RadiiGrid {
    int r_max = 0;
    std::vector<int> sq_dists;  // strictly increasing

    std::size_t size() const { return sq_dists.size(); }
};

RadiiGrid radii_grid(int r_max);

}  // namespace texfrac
