#pragma once

#include <string>
#include <vector>

#include "mcm/image.hpp"

namespace mcm {

enum class DescriptorKind { ChannelStats, SpatialMean, ColorHistogram };

std::string to_string(DescriptorKind kind);
DescriptorKind descriptor_kind_from_string(const std::string& name);

struct Descriptor {
    DescriptorKind kind = DescriptorKind::ChannelStats;
    std::vector<double> values;

    std::size_t dim() const { return values.size(); }
    bool operator==(const Descriptor&) const = default;
};

// Per-channel mean and population variance, interleaved:
// [m1, v1, m2, v2, ...]. Dimension 2C.
Descriptor channel_stats(const Image& img);

// Mean luminance (channel average) over a g x g cell partition. Cell of a
// pixel (y, x) is (y*g/h, x*g/w) with integer division, so every cell is
// non-empty whenever g <= min(h, w). Dimension g^2, row-major cells.
Descriptor spatial_mean(const Image& img, int grid = 4);

// Per-channel histogram over `bins` equal-width bins on [0, 1], each channel
// normalized to sum 1 (value 1.0 lands in the last bin). Dimension C * bins.
Descriptor color_histogram(const Image& img, int bins = 8);

Descriptor compute_descriptor(const Image& img, DescriptorKind kind);

}  // namespace mcm
