// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <png.h>

#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "steato/error.hpp"
#include "steato/image.hpp"

namespace steato {

/// Load an 8-bit grayscale image from a PNG file. Multi-channel input is
/// converted to luma with the fixed ITU-R 601 weights (round half-up).
inline GrayImage load_gray_image(const std::string& path) {
    if (std::FILE* fp = std::fopen(path.c_str(), "rb")) {
        std::fclose(fp);
    } else {
        raise(ErrorCode::FileNotFound, path);
    }

    png_image png;
    std::memset(&png, 0, sizeof(png));
    png.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&png, path.c_str())) {
        raise(ErrorCode::DecodeError, path + " (" + png.message + ")");
    }
    // Ask libpng for plain RGB and do the luma conversion ourselves so the
    // weights stay the documented ones.
    png.format = PNG_FORMAT_RGB;
    std::vector<std::uint8_t> rgb(PNG_IMAGE_SIZE(png));
    if (!png_image_finish_read(&png, nullptr, rgb.data(), 0, nullptr)) {
        png_image_free(&png);
        raise(ErrorCode::DecodeError, path + " (" + png.message + ")");
    }

    GrayImage img(static_cast<int>(png.width), static_cast<int>(png.height));
    const std::size_t n = img.data.size();
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint8_t r = rgb[3 * i + 0];
        const std::uint8_t g = rgb[3 * i + 1];
        const std::uint8_t b = rgb[3 * i + 2];
        img.data[i] = (r == g && g == b) ? r : luma_from_rgb(r, g, b);
    }
    return img;
}

/// Load a binary mask: any nonzero byte decodes to true.
inline BinaryMask load_mask(const std::string& path) {
    const GrayImage img = load_gray_image(path);
    BinaryMask mask(img.width, img.height);
    for (std::size_t i = 0; i < img.data.size(); ++i) mask.data[i] = img.data[i] != 0;
    return mask;
}

inline void save_gray_image(const GrayImage& img, const std::string& path) {
    png_image png;
    std::memset(&png, 0, sizeof(png));
    png.version = PNG_IMAGE_VERSION;
    png.width = static_cast<png_uint_32>(img.width);
    png.height = static_cast<png_uint_32>(img.height);
    png.format = PNG_FORMAT_GRAY;
    if (!png_image_write_to_file(&png, path.c_str(), 0, img.data.data(), 0, nullptr)) {
        raise(ErrorCode::IoError, "cannot write " + path + " (" + png.message + ")");
    }
}

/// Masks are written as 8-bit PNG with values {0, 255}.
inline void save_mask(const BinaryMask& mask, const std::string& path) {
    GrayImage img(mask.width, mask.height);
    for (std::size_t i = 0; i < mask.data.size(); ++i) img.data[i] = mask.data[i] ? 255 : 0;
    save_gray_image(img, path);
}

}  // namespace steato
