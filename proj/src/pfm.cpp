// envsamp is Copyright(c) 2026 the envsamp authors.
// The envsamp source code is licensed under the Apache License, Version 2.0.
// SPDX: Apache-2.0

#include "envsamp/pfm.hpp"

#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

namespace envsamp {

namespace {

float byteswap_float(float f) {
    std::uint32_t u;
    std::memcpy(&u, &f, sizeof(u));
    u = ((u & 0x000000FFu) << 24) | ((u & 0x0000FF00u) << 8) | ((u & 0x00FF0000u) >> 8) |
        ((u & 0xFF000000u) >> 24);
    std::memcpy(&f, &u, sizeof(f));
    return f;
}

// Reads one whitespace-delimited header token. PFM headers allow any mix of
// spaces and newlines between tokens.
std::string read_token(std::istream& in) {
    std::string tok;
    int c = in.get();
    while (c != EOF && std::isspace(c)) c = in.get();
    while (c != EOF && !std::isspace(c)) {
        tok.push_back(static_cast<char>(c));
        c = in.get();
    }
    return tok;
}

int parse_dimension(const std::string& tok, const char* what) {
    std::size_t pos = 0;
    int value = 0;
    try {
        value = std::stoi(tok, &pos);
    } catch (const std::exception&) {
        throw FormatError(std::string("PFM header: unreadable ") + what + " '" + tok + "'");
    }
    if (pos != tok.size() || value < 1)
        throw FormatError(std::string("PFM header: invalid ") + what + " '" + tok + "'");
    return value;
}

}  // namespace

RasterImage load_pfm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");

    char magic[2] = {0, 0};
    in.read(magic, 2);
    if (!in || magic[0] != 'P' || (magic[1] != 'F' && magic[1] != 'f'))
        throw FormatError("'" + path.string() + "' is not a PFM file");
    if (magic[1] == 'f')
        throw FormatError("'" + path.string() + "' is a grayscale PFM; only color 'PF' is supported");

    const int width = parse_dimension(read_token(in), "width");
    const int height = parse_dimension(read_token(in), "height");

    const std::string scale_tok = read_token(in);
    double scale = 0.0;
    try {
        std::size_t pos = 0;
        scale = std::stod(scale_tok, &pos);
        if (pos != scale_tok.size()) throw FormatError("");
    } catch (const std::exception&) {
        throw FormatError("PFM header: unreadable scale token '" + scale_tok + "'");
    }
    if (!std::isfinite(scale) || scale == 0.0)
        throw FormatError("PFM header: scale token must be finite and nonzero");
    const bool file_big_endian = scale > 0.0;
    const double multiplier = std::abs(scale);

    // read_token consumed the single whitespace byte that terminates the
    // header; pixel data starts here.
    RasterImage image(width, height);
    const std::size_t floats_per_row = static_cast<std::size_t>(width) * 3;
    std::vector<float> row(floats_per_row);
    const bool swap = file_big_endian == (std::endian::native == std::endian::little);

    for (int file_row = 0; file_row < height; ++file_row) {
        in.read(reinterpret_cast<char*>(row.data()),
                static_cast<std::streamsize>(floats_per_row * sizeof(float)));
        if (!in)
            throw FormatError("'" + path.string() + "': truncated pixel data at row " +
                              std::to_string(file_row));
        const int y = height - 1 - file_row;  // file rows run bottom-to-top
        for (int x = 0; x < width; ++x) {
            double c[3];
            for (int k = 0; k < 3; ++k) {
                float f = row[static_cast<std::size_t>(x) * 3 + k];
                if (swap) f = byteswap_float(f);
                if (!std::isfinite(f)) {
                    const std::size_t index = static_cast<std::size_t>(y) * width + x;
                    throw DataError("'" + path.string() + "': non-finite value in pixel " +
                                    std::to_string(index) + " channel " + std::to_string(k));
                }
                c[k] = std::max(0.0, multiplier * static_cast<double>(f));
            }
            image.at(x, y) = {c[0], c[1], c[2]};
        }
    }
    return image;
}

void write_pfm(const RasterImage& image, const std::filesystem::path& path) {
    if (image.width < 1 || image.height < 1 ||
        image.pixels.size() != static_cast<std::size_t>(image.width) * image.height)
        throw ConfigError("write_pfm: malformed image");

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");

    out << "PF\n" << image.width << " " << image.height << "\n-1.0\n";

    const bool swap = std::endian::native != std::endian::little;
    std::vector<float> row(static_cast<std::size_t>(image.width) * 3);
    for (int file_row = 0; file_row < image.height; ++file_row) {
        const int y = image.height - 1 - file_row;
        for (int x = 0; x < image.width; ++x) {
            const Spectrum& p = image.at(x, y);
            float f[3] = {static_cast<float>(p.r), static_cast<float>(p.g),
                          static_cast<float>(p.b)};
            for (int k = 0; k < 3; ++k)
                row[static_cast<std::size_t>(x) * 3 + k] = swap ? byteswap_float(f[k]) : f[k];
        }
        out.write(reinterpret_cast<const char*>(row.data()),
                  static_cast<std::streamsize>(row.size() * sizeof(float)));
    }
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace envsamp
