#include "multilap/image_io.hpp"

#include <png.h>

#include <cctype>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <stdexcept>
#include <vector>

namespace multilap {

namespace {

std::string lower_ext(const std::string& path) {
    const size_t dot = path.rfind('.');
    if (dot == std::string::npos) return "";
    std::string ext = path.substr(dot + 1);
    for (char& ch : ext) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return ext;
}

struct FileCloser {
    void operator()(FILE* f) const {
        if (f) fclose(f);
    }
};
using FilePtr = std::unique_ptr<FILE, FileCloser>;

LoadedImage from_bytes(const std::vector<uint8_t>& bytes, int w, int h, int channels) {
    LoadedImage img;
    img.channels = channels;
    if (channels == 1) {
        img.gray = ImagePlane(w, h);
        for (int i = 0; i < w * h; ++i) img.gray.v[i] = from_byte(bytes[i]);
    } else {
        img.rgb = RgbImage(w, h);
        for (int i = 0; i < w * h; ++i) {
            img.rgb.r.v[i] = from_byte(bytes[3 * i + 0]);
            img.rgb.g.v[i] = from_byte(bytes[3 * i + 1]);
            img.rgb.b.v[i] = from_byte(bytes[3 * i + 2]);
        }
    }
    return img;
}

LoadedImage load_png(const std::string& path) {
    FilePtr fp(fopen(path.c_str(), "rb"));
    if (!fp) throw std::runtime_error("cannot open " + path);

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw std::runtime_error("png init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw std::runtime_error("png init failed");
    }
    std::vector<uint8_t> data;
    std::vector<png_bytep> rows;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw std::runtime_error("cannot decode " + path);
    }
    png_init_io(png, fp.get());
    png_read_info(png, info);

    const png_byte color_type = png_get_color_type(png, info);
    if (png_get_bit_depth(png, info) == 16) png_set_strip_16(png);
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY && png_get_bit_depth(png, info) < 8)
        png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    png_set_strip_alpha(png);
    png_read_update_info(png, info);

    const int w = static_cast<int>(png_get_image_width(png, info));
    const int h = static_cast<int>(png_get_image_height(png, info));
    const int channels = png_get_channels(png, info);
    if (channels != 1 && channels != 3) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw std::runtime_error("unsupported channel count in " + path);
    }
    data.resize(static_cast<size_t>(w) * h * channels);
    rows.resize(h);
    for (int y = 0; y < h; ++y) rows[y] = data.data() + static_cast<size_t>(y) * w * channels;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return from_bytes(data, w, h, channels);
}

void save_png(const std::string& path, const std::vector<uint8_t>& bytes, int w, int h,
              int channels) {
    FilePtr fp(fopen(path.c_str(), "wb"));
    if (!fp) throw std::runtime_error("cannot write " + path);
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw std::runtime_error("png init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw std::runtime_error("png init failed");
    }
    std::vector<png_bytep> rows(h);
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw std::runtime_error("cannot encode " + path);
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, w, h, 8,
                 channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int y = 0; y < h; ++y)
        rows[y] = const_cast<png_bytep>(bytes.data() + static_cast<size_t>(y) * w * channels);
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

int read_pnm_token(std::istream& in) {
    // Whitespace-separated decimal, with '#' comments.
    for (;;) {
        int c = in.get();
        if (c == EOF) throw std::runtime_error("truncated PNM header");
        if (std::isspace(c)) continue;
        if (c == '#') {
            while (c != EOF && c != '\n') c = in.get();
            continue;
        }
        int value = 0;
        bool any = false;
        while (c != EOF && std::isdigit(c)) {
            value = value * 10 + (c - '0');
            any = true;
            c = in.get();
        }
        if (!any) throw std::runtime_error("bad PNM header");
        return value;
    }
}

LoadedImage load_pnm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    char magic[2];
    in.read(magic, 2);
    if (!in || magic[0] != 'P' || (magic[1] != '5' && magic[1] != '6'))
        throw std::runtime_error("not a binary PGM/PPM: " + path);
    const int channels = magic[1] == '5' ? 1 : 3;
    const int w = read_pnm_token(in);
    const int h = read_pnm_token(in);
    const int maxval = read_pnm_token(in);
    if (maxval != 255) throw std::runtime_error("only maxval 255 PNM supported: " + path);
    std::vector<uint8_t> bytes(static_cast<size_t>(w) * h * channels);
    in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!in) throw std::runtime_error("truncated PNM data: " + path);
    return from_bytes(bytes, w, h, channels);
}

void save_pnm(const std::string& path, const std::vector<uint8_t>& bytes, int w, int h,
              int channels) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << (channels == 1 ? "P5" : "P6") << "\n" << w << " " << h << "\n255\n";
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("write failed: " + path);
}

void save_bytes(const std::string& path, const std::vector<uint8_t>& bytes, int w, int h,
                int channels) {
    const std::string ext = lower_ext(path);
    if (ext == "png") {
        save_png(path, bytes, w, h, channels);
    } else if (ext == "ppm" || ext == "pgm") {
        if (ext == "pgm" && channels != 1)
            throw std::runtime_error("PGM holds grayscale only: " + path);
        if (ext == "ppm" && channels != 3)
            throw std::runtime_error("PPM holds RGB only: " + path);
        save_pnm(path, bytes, w, h, channels);
    } else {
        throw std::runtime_error("unsupported output format: " + path);
    }
}

}  // namespace

LoadedImage load_image(const std::string& path) {
    const std::string ext = lower_ext(path);
    if (ext == "png") return load_png(path);
    if (ext == "ppm" || ext == "pgm") return load_pnm(path);
    throw std::runtime_error("unsupported input format: " + path);
}

void save_gray(const std::string& path, const ImagePlane& img) {
    std::vector<uint8_t> bytes(img.pixels());
    for (int i = 0; i < img.pixels(); ++i) bytes[i] = to_byte(img.v[i]);
    save_bytes(path, bytes, img.width, img.height, 1);
}

void save_rgb(const std::string& path, const RgbImage& img) {
    const int n = img.width() * img.height();
    std::vector<uint8_t> bytes(static_cast<size_t>(n) * 3);
    for (int i = 0; i < n; ++i) {
        bytes[3 * i + 0] = to_byte(img.r.v[i]);
        bytes[3 * i + 1] = to_byte(img.g.v[i]);
        bytes[3 * i + 2] = to_byte(img.b.v[i]);
    }
    save_bytes(path, bytes, img.width(), img.height(), 3);
}

}  // namespace multilap
