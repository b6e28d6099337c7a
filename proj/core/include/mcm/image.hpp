#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace mcm {

// Dense image, channel-major, row-major within a channel. Values live in
// [0, 1]; producers are responsible for clamping.
struct Image {
    int channels = 0;
    int height = 0;
    int width = 0;
    std::vector<double> data;

    std::size_t pixel_count() const {
        return static_cast<std::size_t>(height) * static_cast<std::size_t>(width);
    }
    std::size_t value_count() const { return pixel_count() * static_cast<std::size_t>(channels); }

    double& at(int c, int y, int x) {
        return data[(static_cast<std::size_t>(c) * height + y) * width + x];
    }
    double at(int c, int y, int x) const {
        return data[(static_cast<std::size_t>(c) * height + y) * width + x];
    }

    // Structural and range validity ([0,1] values, matching buffer size).
    bool valid() const;
};

Image make_image(int channels, int height, int width, double fill = 0.0);

// Binary PPM (P6, maxval 255) round trip for inspection. Quantizes to 8 bits
// on write; only 3-channel images are supported.
void write_ppm(const Image& img, const std::string& path);
Image read_ppm(const std::string& path);

}  // namespace mcm
