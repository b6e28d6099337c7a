#include "mcm/image.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>

namespace mcm {

bool Image::valid() const {
    if (channels <= 0 || height <= 0 || width <= 0) return false;
    if (data.size() != value_count()) return false;
    for (double v : data) {
        if (!(v >= 0.0 && v <= 1.0)) return false;
    }
    return true;
}

Image make_image(int channels, int height, int width, double fill) {
    Image img;
    img.channels = channels;
    img.height = height;
    img.width = width;
    img.data.assign(static_cast<std::size_t>(channels) * height * width, fill);
    return img;
}

void write_ppm(const Image& img, const std::string& path) {
    if (img.channels != 3) throw std::invalid_argument("write_ppm: need 3 channels");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_ppm: cannot open " + path);
    out << "P6\n" << img.width << " " << img.height << "\n255\n";
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            for (int c = 0; c < 3; ++c) {
                double v = img.at(c, y, x);
                v = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
                out.put(static_cast<char>(static_cast<std::uint8_t>(std::lround(v * 255.0))));
            }
        }
    }
    if (!out) throw std::runtime_error("write_ppm: write failed for " + path);
}

Image read_ppm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_ppm: cannot open " + path);
    std::string magic;
    in >> magic;
    if (magic != "P6") throw std::runtime_error("read_ppm: not a P6 file: " + path);
    int w = 0, h = 0, maxval = 0;
    in >> w >> h >> maxval;
    if (w <= 0 || h <= 0 || maxval != 255) throw std::runtime_error("read_ppm: bad header in " + path);
    in.get();  // single whitespace after maxval
    Image img = make_image(3, h, w);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            for (int c = 0; c < 3; ++c) {
                int byte = in.get();
                if (byte < 0) throw std::runtime_error("read_ppm: truncated file " + path);
                img.at(c, y, x) = static_cast<double>(byte) / 255.0;
            }
        }
    }
    return img;
}

}  // namespace mcm
