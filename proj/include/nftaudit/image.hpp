#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cmath>
#include <optional>
#include <string_view>
#include <vector>

namespace nftaudit {

struct GrayImage {
    uint32_t width = 0, height = 0;
    std::vector<uint8_t> pixels; // row major

    uint8_t at(uint32_t x, uint32_t y) const { return pixels[size_t(y) * width + x]; }
};

namespace detail {

struct PnmReader {
    std::string_view data;
    size_t pos = 0;

    void skip_space() {
        while (pos < data.size()) {
            char c = data[pos];
            if (c == '#') {
                while (pos < data.size() && data[pos] != '\n') ++pos;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos;
            } else {
                break;
            }
        }
    }
    std::optional<uint32_t> number() {
        skip_space();
        if (pos >= data.size() || !std::isdigit(static_cast<unsigned char>(data[pos])))
            return std::nullopt;
        uint64_t v = 0;
        while (pos < data.size() && std::isdigit(static_cast<unsigned char>(data[pos]))) {
            v = v * 10 + uint64_t(data[pos++] - '0');
            if (v > 0xffffffffull) return std::nullopt;
        }
        return uint32_t(v);
    }
};

inline uint8_t luma(uint32_t r, uint32_t g, uint32_t b) {
    return uint8_t((299 * r + 587 * g + 114 * b + 500) / 1000);
}

inline uint8_t scale_sample(uint32_t v, uint32_t maxval) {
    if (maxval == 255) return uint8_t(v);
    return uint8_t((v * 255 + maxval / 2) / maxval);
}

} // namespace detail

// Netpbm decoder covering P2/P5 grayscale and P3/P6 color (folded to luma).
// Sample depth up to 8 bits; anything else is rejected.
inline std::optional<GrayImage> decode_netpbm(std::string_view bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P') return std::nullopt;
    char kind = bytes[1];
    if (kind != '2' && kind != '3' && kind != '5' && kind != '6') return std::nullopt;
    bool ascii = kind == '2' || kind == '3';
    bool color = kind == '3' || kind == '6';

    detail::PnmReader r{bytes, 2};
    auto w = r.number(), h = r.number(), maxval = r.number();
    if (!w || !h || !maxval || *w == 0 || *h == 0 || *maxval == 0 || *maxval > 255)
        return std::nullopt;

    GrayImage img;
    img.width = *w;
    img.height = *h;
    size_t count = size_t(*w) * *h;
    img.pixels.reserve(count);
    size_t channels = color ? 3 : 1;

    if (ascii) {
        for (size_t i = 0; i < count; ++i) {
            uint32_t s[3] = {0, 0, 0};
            for (size_t c = 0; c < channels; ++c) {
                auto v = r.number();
                if (!v || *v > *maxval) return std::nullopt;
                s[c] = *v;
            }
            img.pixels.push_back(color ? detail::luma(detail::scale_sample(s[0], *maxval),
                                                      detail::scale_sample(s[1], *maxval),
                                                      detail::scale_sample(s[2], *maxval))
                                       : detail::scale_sample(s[0], *maxval));
        }
    } else {
        // exactly one whitespace byte separates the header from the raster
        if (r.pos >= bytes.size() ||
            !std::isspace(static_cast<unsigned char>(bytes[r.pos])))
            return std::nullopt;
        size_t p = r.pos + 1;
        if (bytes.size() - p < count * channels) return std::nullopt;
        for (size_t i = 0; i < count; ++i) {
            if (color) {
                uint8_t rr = uint8_t(bytes[p]), gg = uint8_t(bytes[p + 1]),
                        bb = uint8_t(bytes[p + 2]);
                p += 3;
                img.pixels.push_back(detail::luma(detail::scale_sample(rr, *maxval),
                                                  detail::scale_sample(gg, *maxval),
                                                  detail::scale_sample(bb, *maxval)));
            } else {
                img.pixels.push_back(detail::scale_sample(uint8_t(bytes[p++]), *maxval));
            }
        }
    }
    return img;
}

// Exact box-filter resampling; output stays in doubles so that downstream
// transforms see no quantization.
inline std::vector<double> resize_area(const GrayImage& src, uint32_t dw, uint32_t dh) {
    std::vector<double> out(size_t(dw) * dh, 0.0);
    const double sx = double(src.width) / dw;
    const double sy = double(src.height) / dh;
    for (uint32_t dy = 0; dy < dh; ++dy) {
        const double y0 = dy * sy, y1 = (dy + 1) * sy;
        const uint32_t iy0 = uint32_t(y0);
        const uint32_t iy1 = std::min(uint32_t(std::ceil(y1)), src.height);
        for (uint32_t dx = 0; dx < dw; ++dx) {
            const double x0 = dx * sx, x1 = (dx + 1) * sx;
            const uint32_t ix0 = uint32_t(x0);
            const uint32_t ix1 = std::min(uint32_t(std::ceil(x1)), src.width);
            double acc = 0.0;
            for (uint32_t y = iy0; y < iy1; ++y) {
                const double oy = std::min(y1, double(y + 1)) - std::max(y0, double(y));
                for (uint32_t x = ix0; x < ix1; ++x) {
                    const double ox = std::min(x1, double(x + 1)) - std::max(x0, double(x));
                    acc += double(src.at(x, y)) * ox * oy;
                }
            }
            out[size_t(dy) * dw + dx] = acc / (sx * sy);
        }
    }
    return out;
}

} // namespace nftaudit
