#include "xit/core/image.hpp"

#include <algorithm>
#include <string>

#include "xit/core/error.hpp"

namespace xit {
namespace {

void check_dimensions(int width, int height) {
    if (width <= 0 || height <= 0) {
        throw InvalidArgument("image dimensions must be positive, got " +
                              std::to_string(width) + "x" + std::to_string(height));
    }
}

}  // namespace

ImageBuffer::ImageBuffer(int width, int height, Rgb fill) : width_(width), height_(height) {
    check_dimensions(width, height);
    pixels_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

ImageBuffer::ImageBuffer(int width, int height, std::vector<Rgb> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
    check_dimensions(width, height);
    if (pixels_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
        throw InvalidArgument("pixel count " + std::to_string(pixels_.size()) +
                              " does not match " + std::to_string(width) + "x" +
                              std::to_string(height));
    }
}

std::vector<Rgb> sorted_pixels(const ImageBuffer& img) {
    std::vector<Rgb> out(img.pixels().begin(), img.pixels().end());
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace xit
