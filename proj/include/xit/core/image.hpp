#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace xit {

struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    friend auto operator<=>(const Rgb&, const Rgb&) = default;
};

/// Row-major grid of 8-bit RGB pixels. Always non-empty.
class ImageBuffer {
public:
    ImageBuffer(int width, int height, Rgb fill = {});
    ImageBuffer(int width, int height, std::vector<Rgb> pixels);

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t size() const { return pixels_.size(); }

    Rgb& at(int x, int y) { return pixels_[index(x, y)]; }
    const Rgb& at(int x, int y) const { return pixels_[index(x, y)]; }

    std::size_t index(int x, int y) const {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(x);
    }

    std::span<Rgb> pixels() { return pixels_; }
    std::span<const Rgb> pixels() const { return pixels_; }

    friend bool operator==(const ImageBuffer&, const ImageBuffer&) = default;

private:
    int width_;
    int height_;
    std::vector<Rgb> pixels_;
};

/// Pixel values sorted lexicographically by (r, g, b); the multiset view used
/// by the shuffle invariants.
std::vector<Rgb> sorted_pixels(const ImageBuffer& img);

/// Reads an 8-bit PNG. RGBA input loses its alpha channel (with a warning);
/// 16-bit and grayscale input is rejected with IoError.
ImageBuffer load_image(const std::filesystem::path& path);

/// Writes an 8-bit RGB PNG. Output bytes depend only on the pixel data.
void save_image(const ImageBuffer& img, const std::filesystem::path& path);

/// In-memory PNG encoding, same bytes as save_image would write.
std::vector<std::uint8_t> encode_png(const ImageBuffer& img);

}  // namespace xit
