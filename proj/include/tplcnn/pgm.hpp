#pragma once

#include "tplcnn/errors.hpp"
#include "tplcnn/grid.hpp"

#include <cctype>
#include <cstdint>
#include <fstream>
#include <string>

namespace tplcnn {

using GrayImage = Grid<std::uint8_t>;

/// Binary PGM (P5), maxval 255.
inline void write_pgm(const std::string& path, const GrayImage& img)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << "P5\n" << img.cols() << " " << img.rows() << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.data().data()),
              static_cast<std::streamsize>(img.size()));
    if (!out) throw IoError("write failed: " + path);
}

inline GrayImage read_pgm(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path);

    auto next_token = [&]() {
        std::string tok;
        int ch;
        while ((ch = in.get()) != EOF) {
            if (ch == '#') { // comment to end of line
                while ((ch = in.get()) != EOF && ch != '\n') {}
                continue;
            }
            if (std::isspace(ch)) {
                if (!tok.empty()) break;
                continue;
            }
            tok.push_back(static_cast<char>(ch));
        }
        if (tok.empty()) throw IoError("truncated PGM header: " + path);
        return tok;
    };

    if (next_token() != "P5") throw IoError("not a binary PGM (P5): " + path);
    const int width = std::stoi(next_token());
    const int height = std::stoi(next_token());
    const int maxval = std::stoi(next_token());
    if (width < 1 || height < 1) throw IoError("bad PGM dimensions: " + path);
    if (maxval != 255) throw IoError("only maxval 255 PGM supported: " + path);

    GrayImage img(height, width);
    in.read(reinterpret_cast<char*>(img.data().data()),
            static_cast<std::streamsize>(img.size()));
    if (in.gcount() != static_cast<std::streamsize>(img.size())) {
        throw IoError("truncated PGM data: " + path);
    }
    return img;
}

/// Phase map image encoding: 0 = no tunnel, 255 = tunnel.
inline GrayImage phase_map_to_image(const BoolGrid& map)
{
    GrayImage img(map.rows(), map.cols());
    for (std::size_t i = 0; i < map.size(); ++i) {
        img.data()[i] = map.data()[i] ? 255 : 0;
    }
    return img;
}

inline BoolGrid image_to_phase_map(const GrayImage& img)
{
    BoolGrid map(img.rows(), img.cols());
    for (std::size_t i = 0; i < img.size(); ++i) {
        map.data()[i] = img.data()[i] >= 128 ? 1 : 0;
    }
    return map;
}

/// n-ary class map encoding: unlocked = 0, class k of n spread evenly as
/// round((k+1) * 255 / n).
inline GrayImage class_map_to_image(const Grid<int>& classes, int n)
{
    GrayImage img(classes.rows(), classes.cols());
    for (std::size_t i = 0; i < classes.size(); ++i) {
        const int k = classes.data()[i];
        img.data()[i] = k < 0 ? 0
                              : static_cast<std::uint8_t>((k + 1) * 255 / n);
    }
    return img;
}

/// Linear pixel-to-value mapping: p -> lo + (p/255) * (hi - lo).
inline RealGrid image_to_values(const GrayImage& img, double lo, double hi)
{
    if (lo > hi) throw ConfigError("image mapping requires lo <= hi");
    RealGrid g(img.rows(), img.cols());
    for (std::size_t i = 0; i < img.size(); ++i) {
        g.data()[i] = lo + (static_cast<double>(img.data()[i]) / 255.0) * (hi - lo);
    }
    return g;
}

/// Replicate every pixel into a scale x scale block (input-pixel to
/// cell-block mapping for lattices denser than the input image).
inline GrayImage replicate_pixels(const GrayImage& img, int scale)
{
    if (scale < 1) throw ConfigError("pixel scale must be >= 1");
    if (scale == 1) return img;
    GrayImage out(img.rows() * scale, img.cols() * scale);
    for (int r = 0; r < out.rows(); ++r)
        for (int c = 0; c < out.cols(); ++c)
            out(r, c) = img(r / scale, c / scale);
    return out;
}

} // namespace tplcnn
