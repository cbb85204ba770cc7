#include "texfrac/height_field.hpp"

#include <stdexcept>

namespace texfrac {

HeightField lift(const GrayImage& img) {
    return HeightField{img.width, img.height, img.pixels};
}

RadiiGrid radii_grid(int r_max) {
    if (r_max < 1) throw std::invalid_argument("radii_grid: r_max must be >= 1");
    RadiiGrid grid;
    grid.r_max = r_max;
    const int limit = r_max * r_max;
    grid.sq_dists.reserve(static_cast<std::size_t>(limit) * 5 / 6);
    for (int n = 1; n <= limit; ++n) {
        // Legendre: n is a sum of three squares iff n != 4^a (8b + 7).
        int m = n;
        while (m % 4 == 0) m /= 4;
        if (m % 8 != 7) grid.sq_dists.push_back(n);
    }
    return grid;
}

}  // namespace texfrac
