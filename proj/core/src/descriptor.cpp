#include "mcm/descriptor.hpp"

#include <stdexcept>

namespace mcm {

std::string to_string(DescriptorKind kind) {
    switch (kind) {
        case DescriptorKind::ChannelStats: return "channel_stats";
        case DescriptorKind::SpatialMean: return "spatial_mean";
        case DescriptorKind::ColorHistogram: return "color_histogram";
    }
    throw std::logic_error("unknown DescriptorKind");
}

DescriptorKind descriptor_kind_from_string(const std::string& name) {
    if (name == "channel_stats") return DescriptorKind::ChannelStats;
    if (name == "spatial_mean") return DescriptorKind::SpatialMean;
    if (name == "color_histogram") return DescriptorKind::ColorHistogram;
    throw std::invalid_argument("unknown descriptor kind: " + name);
}

Descriptor channel_stats(const Image& img) {
    const std::size_t hw = img.pixel_count();
    Descriptor d;
    d.kind = DescriptorKind::ChannelStats;
    d.values.resize(2 * static_cast<std::size_t>(img.channels));
    for (int c = 0; c < img.channels; ++c) {
        const double* p = img.data.data() + static_cast<std::size_t>(c) * hw;
        double sum = 0.0;
        for (std::size_t i = 0; i < hw; ++i) sum += p[i];
        const double mean = sum / static_cast<double>(hw);
        double sq = 0.0;
        for (std::size_t i = 0; i < hw; ++i) {
            const double diff = p[i] - mean;
            sq += diff * diff;
        }
        d.values[2 * c] = mean;
        d.values[2 * c + 1] = sq / static_cast<double>(hw);
    }
    return d;
}

Descriptor spatial_mean(const Image& img, int grid) {
    if (grid < 1) throw std::invalid_argument("spatial_mean: grid must be >= 1");
    if (grid > img.height || grid > img.width)
        throw std::invalid_argument("spatial_mean: grid exceeds image extent");
    const std::size_t cells = static_cast<std::size_t>(grid) * grid;
    std::vector<double> sums(cells, 0.0);
    std::vector<std::size_t> counts(cells, 0);
    const double inv_c = 1.0 / img.channels;
    for (int y = 0; y < img.height; ++y) {
        const int cy = static_cast<int>(static_cast<long long>(y) * grid / img.height);
        for (int x = 0; x < img.width; ++x) {
            const int cx = static_cast<int>(static_cast<long long>(x) * grid / img.width);
            double lum = 0.0;
            for (int c = 0; c < img.channels; ++c) lum += img.at(c, y, x);
            const std::size_t cell = static_cast<std::size_t>(cy) * grid + cx;
            sums[cell] += lum * inv_c;
            counts[cell] += 1;
        }
    }
    Descriptor d;
    d.kind = DescriptorKind::SpatialMean;
    d.values.resize(cells);
    for (std::size_t i = 0; i < cells; ++i) d.values[i] = sums[i] / static_cast<double>(counts[i]);
    return d;
}

Descriptor color_histogram(const Image& img, int bins) {
    if (bins < 2) throw std::invalid_argument("color_histogram: bins must be >= 2");
    const std::size_t hw = img.pixel_count();
    Descriptor d;
    d.kind = DescriptorKind::ColorHistogram;
    d.values.assign(static_cast<std::size_t>(img.channels) * bins, 0.0);
    const double norm = 1.0 / static_cast<double>(hw);
    for (int c = 0; c < img.channels; ++c) {
        const double* p = img.data.data() + static_cast<std::size_t>(c) * hw;
        double* h = d.values.data() + static_cast<std::size_t>(c) * bins;
        for (std::size_t i = 0; i < hw; ++i) {
            int b = static_cast<int>(p[i] * bins);
            if (b >= bins) b = bins - 1;  // value 1.0
            if (b < 0) b = 0;
            h[b] += norm;
        }
    }
    return d;
}

Descriptor compute_descriptor(const Image& img, DescriptorKind kind) {
    switch (kind) {
        case DescriptorKind::ChannelStats: return channel_stats(img);
        case DescriptorKind::SpatialMean: return spatial_mean(img);
        case DescriptorKind::ColorHistogram: return color_histogram(img);
    }
    throw std::logic_error("unknown DescriptorKind");
}

}  // namespace mcm
