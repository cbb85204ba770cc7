#pragma once

#include <string>
#include <vector>

#include "texfrac/gray_image.hpp"

namespace texfrac {

struct FeatureVector {
    std::vector<double> values;
    std::string method_tag;
};

/// 99 Fourier ring energies: 2D DFT, spectrum centered, DC excluded, and
/// the frequency plane split into 99 concentric rings of equal radial width
/// spanning (0, R_max]. Descriptor i is the sum of spectrum magnitudes in
/// ring i.
FeatureVector fourier_descriptors(const GrayImage& img);

/// 16 gray-level co-occurrence descriptors: non-symmetric 256x256 matrices
/// for distances {1,2} x angles {-45,0,45,90} degrees (y axis down), each
/// normalized to sum 1 and reduced to energy and entropy (natural log).
/// Ordering: d=1 angles in the listed order, then d=2; energy before
/// entropy per matrix.
FeatureVector cooccurrence_descriptors(const GrayImage& img);

/// 16 Gabor filter-bank energies: 4 center frequencies geometrically spaced
/// over [0.01, 0.3] cycles/pixel x 4 orientations {0,45,90,135} degrees,
/// radial and angular widths set so neighboring filters cross at half peak
/// magnitude. Filtering is frequency-domain multiplication (circular
/// convolution) with the DC coefficient zeroed; the descriptor is the sum
/// of squared response magnitudes. Ordering: frequency-major, then
/// orientation.
FeatureVector gabor_descriptors(const GrayImage& img);

}  // namespace texfrac
