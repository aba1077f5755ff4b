#include "lutforge/imgio.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <stdexcept>

#include <png.h>

namespace lutforge {

namespace {

bool ends_with(const std::string& s, const std::string& suf) {
    return s.size() >= suf.size() && s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
}

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

Image load_png(const std::string& path) {
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) throw std::runtime_error("cannot open: " + path);

    png_byte header[8];
    if (std::fread(header, 1, 8, fp.get()) != 8 || png_sig_cmp(header, 0, 8))
        throw std::runtime_error(path + ": not a PNG file");

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png_create_info_struct(png);
    if (!png || !info) throw std::runtime_error(path + ": libpng init failed");
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw std::runtime_error(path + ": PNG decode error");
    }
    png_init_io(png, fp.get());
    png_set_sig_bytes(png, 8);
    png_read_info(png, info);

    const png_uint_32 w = png_get_image_width(png, info);
    const png_uint_32 h = png_get_image_height(png, info);
    const int depth = png_get_bit_depth(png, info);
    const int type = png_get_color_type(png, info);
    if (depth == 16) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw std::runtime_error(path + ": 16-bit PNG unsupported, expected 8-bit RGB/RGBA");
    }
    if (type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (type == PNG_COLOR_TYPE_GRAY || type == PNG_COLOR_TYPE_GRAY_ALPHA) png_set_gray_to_rgb(png);
    if (depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    png_set_strip_alpha(png);
    png_read_update_info(png, info);

    std::vector<png_byte> row(png_get_rowbytes(png, info));
    Image img(static_cast<int>(h), static_cast<int>(w));
    for (png_uint_32 y = 0; y < h; ++y) {
        png_read_row(png, row.data(), nullptr);
        for (png_uint_32 x = 0; x < w; ++x)
            for (int c = 0; c < 3; ++c)
                img.at(static_cast<int>(y), static_cast<int>(x), c) = row[x * 3 + c] / 255.0;
    }
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

void save_png(const Image& img, const std::string& path, const std::vector<unsigned char>& bytes) {
    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) throw std::runtime_error("cannot open for write: " + path);
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png_create_info_struct(png);
    if (!png || !info) throw std::runtime_error(path + ": libpng init failed");
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw std::runtime_error(path + ": PNG encode error");
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, img.w, img.h, 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int y = 0; y < img.h; ++y)
        png_write_row(png, const_cast<png_bytep>(&bytes[static_cast<std::size_t>(y) * img.w * 3]));
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

Image load_ppm(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open: " + path);
    std::string magic;
    is >> magic;
    if (magic != "P6") throw std::runtime_error(path + ": expected binary PPM magic P6");
    auto next_token = [&]() -> long {
        // skip whitespace and '#' comment lines
        for (;;) {
            int ch = is.peek();
            if (ch == '#') {
                std::string dummy;
                std::getline(is, dummy);
            } else if (std::isspace(ch)) {
                is.get();
            } else {
                break;
            }
        }
        long v;
        if (!(is >> v)) throw std::runtime_error(path + ": malformed PPM header");
        return v;
    };
    const long w = next_token(), h = next_token(), maxval = next_token();
    if (w < 1 || h < 1) throw std::runtime_error(path + ": bad PPM dimensions");
    if (maxval != 255) throw std::runtime_error(path + ": only maxval 255 supported");
    is.get(); // single whitespace before raster
    std::vector<unsigned char> raster(static_cast<std::size_t>(w) * h * 3);
    is.read(reinterpret_cast<char*>(raster.data()), static_cast<std::streamsize>(raster.size()));
    if (static_cast<std::size_t>(is.gcount()) != raster.size())
        throw std::runtime_error(path + ": truncated PPM raster");
    Image img(static_cast<int>(h), static_cast<int>(w));
    for (std::size_t i = 0; i < raster.size(); ++i) img.data[i] = raster[i] / 255.0;
    return img;
}

} // namespace

Image load_image(const std::string& path) {
    if (ends_with(path, ".ppm")) return load_ppm(path);
    if (ends_with(path, ".png")) return load_png(path);
    throw std::runtime_error(path + ": unsupported image format, expected .png or .ppm");
}

void save_image(const Image& img, const std::string& path) {
    std::vector<unsigned char> bytes(img.data.size());
    for (std::size_t i = 0; i < img.data.size(); ++i) {
        // round half away from zero on v*255
        const double v = std::round(img.data[i] * 255.0);
        bytes[i] = static_cast<unsigned char>(v < 0.0 ? 0.0 : (v > 255.0 ? 255.0 : v));
    }
    if (ends_with(path, ".png")) {
        save_png(img, path, bytes);
        return;
    }
    if (ends_with(path, ".ppm")) {
        std::ofstream os(path, std::ios::binary);
        if (!os) throw std::runtime_error("cannot open for write: " + path);
        os << "P6\n" << img.w << " " << img.h << "\n255\n";
        os.write(reinterpret_cast<const char*>(bytes.data()),
                 static_cast<std::streamsize>(bytes.size()));
        if (!os) throw std::runtime_error("write failed: " + path);
        return;
    }
    throw std::runtime_error(path + ": unsupported image format, expected .png or .ppm");
}

} // namespace lutforge
