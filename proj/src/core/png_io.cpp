#include <png.h>

#include <cstring>
#include <fstream>
#include <string>

#include "xit/core/error.hpp"
#include "xit/core/image.hpp"
#include "xit/core/log.hpp"

namespace xit {
namespace {

// RAII wrapper; png_image_free is safe to call on a finished image.
struct PngImage {
    png_image image{};
    PngImage() {
        std::memset(&image, 0, sizeof(image));
        image.version = PNG_IMAGE_VERSION;
    }
    ~PngImage() { png_image_free(&image); }
    PngImage(const PngImage&) = delete;
    PngImage& operator=(const PngImage&) = delete;
};

std::vector<Rgb> to_rgb(const std::vector<png_byte>& raw, std::size_t count, int stride) {
    std::vector<Rgb> pixels(count);
    for (std::size_t i = 0; i < count; ++i) {
        const png_byte* p = raw.data() + i * static_cast<std::size_t>(stride);
        pixels[i] = Rgb{p[0], p[1], p[2]};
    }
    return pixels;
}

}  // namespace

ImageBuffer load_image(const std::filesystem::path& path) {
    PngImage png;
    if (!png_image_begin_read_from_file(&png.image, path.string().c_str())) {
        throw IoError("cannot read PNG '" + path.string() + "': " + png.image.message);
    }
    const png_uint_32 format = png.image.format;
    if (format & PNG_FORMAT_FLAG_LINEAR) {
        throw IoError("unsupported bit depth in '" + path.string() + "' (only 8-bit PNG)");
    }
    if (!(format & PNG_FORMAT_FLAG_COLOR)) {
        throw IoError("unsupported channel count in '" + path.string() +
                      "' (grayscale; expected RGB)");
    }
    const bool has_alpha = (format & PNG_FORMAT_FLAG_ALPHA) != 0;
    if (has_alpha) {
        warn("'" + path.string() + "' has an alpha channel; dropping it");
    }

    // Read as RGBA when alpha is present so that it is dropped rather than
    // composited against a background.
    png.image.format = has_alpha ? PNG_FORMAT_RGBA : PNG_FORMAT_RGB;
    const int stride = has_alpha ? 4 : 3;
    const auto width = static_cast<int>(png.image.width);
    const auto height = static_cast<int>(png.image.height);
    std::vector<png_byte> raw(PNG_IMAGE_SIZE(png.image));
    if (!png_image_finish_read(&png.image, nullptr, raw.data(), 0, nullptr)) {
        throw IoError("cannot decode PNG '" + path.string() + "': " + png.image.message);
    }
    const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    return ImageBuffer(width, height, to_rgb(raw, count, stride));
}

std::vector<std::uint8_t> encode_png(const ImageBuffer& img) {
    PngImage png;
    png.image.width = static_cast<png_uint_32>(img.width());
    png.image.height = static_cast<png_uint_32>(img.height());
    png.image.format = PNG_FORMAT_RGB;
    static_assert(sizeof(Rgb) == 3, "Rgb must be tightly packed");
    const void* data = img.pixels().data();

    png_alloc_size_t size = 0;
    if (!png_image_write_to_memory(&png.image, nullptr, &size, 0, data, 0, nullptr)) {
        throw IoError(std::string("PNG encode failed: ") + png.image.message);
    }
    std::vector<std::uint8_t> out(size);
    if (!png_image_write_to_memory(&png.image, out.data(), &size, 0, data, 0, nullptr)) {
        throw IoError(std::string("PNG encode failed: ") + png.image.message);
    }
    out.resize(size);
    return out;
}

void save_image(const ImageBuffer& img, const std::filesystem::path& path) {
    const auto bytes = encode_png(img);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw IoError("short write to '" + path.string() + "'");
    }
}

}  // namespace xit
