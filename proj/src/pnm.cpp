#include "pnm.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <vector>

#include "error.hpp"

namespace ekd {

namespace {

// next whitespace-delimited token, skipping '#' comments
long next_value(std::istream& in, const std::string& path) {
    int c = in.get();
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = in.get();
        } else if (std::isspace(c)) {
            c = in.get();
        } else {
            break;
        }
    }
    if (c == EOF || !std::isdigit(c))
        fail(ErrorCode::Io, path + ": malformed PNM header");
    long v = 0;
    while (c != EOF && std::isdigit(c)) {
        v = v * 10 + (c - '0');
        c = in.get();
    }
    return v;
}

}  // namespace

PixelField read_image(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::Io, path + ": cannot open for reading");
    char magic[2];
    in.read(magic, 2);
    if (!in || magic[0] != 'P' || (magic[1] != '5' && magic[1] != '6'))
        fail(ErrorCode::Io, path + ": not a binary PGM/PPM file");
    const int channels = magic[1] == '5' ? 1 : 3;
    const long w = next_value(in, path);
    const long h = next_value(in, path);
    const long maxval = next_value(in, path);
    if (w < 1 || h < 1) fail(ErrorCode::Io, path + ": bad dimensions");
    if (maxval != 255) fail(ErrorCode::Io, path + ": only maxval 255 is supported");
    // single whitespace byte after maxval, already consumed by next_value

    const std::size_t count = static_cast<std::size_t>(w) * h * channels;
    std::vector<std::uint8_t> raw(count);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(count));
    if (static_cast<std::size_t>(in.gcount()) != count)
        fail(ErrorCode::Io, path + ": truncated pixel data");

    PixelField img(static_cast<int>(w), static_cast<int>(h), channels);
    // interleaved on disk, planar in memory
    for (std::size_t i = 0; i < static_cast<std::size_t>(w) * h; ++i)
        for (int ch = 0; ch < channels; ++ch)
            img.values[static_cast<std::size_t>(ch) * w * h + i] =
                static_cast<double>(raw[i * channels + ch]);
    return img;
}

void write_image(const PixelField& field, const std::string& path) {
    if (field.channels != 1 && field.channels != 3)
        fail(ErrorCode::Invalid, "write_image: 1 or 3 channels only");
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCode::Io, path + ": cannot open for writing");
    char header[64];
    const int len = std::snprintf(header, sizeof header, "P%c\n%d %d\n255\n",
                                  field.channels == 1 ? '5' : '6', field.width,
                                  field.height);
    out.write(header, len);
    const std::size_t pixels = static_cast<std::size_t>(field.pixels());
    std::vector<std::uint8_t> raw(pixels * field.channels);
    for (std::size_t i = 0; i < pixels; ++i)
        for (int ch = 0; ch < field.channels; ++ch) {
            const double v = field.values[static_cast<std::size_t>(ch) * pixels + i];
            const double r = std::round(v);  // half away from zero
            raw[i * field.channels + ch] =
                static_cast<std::uint8_t>(r < 0.0 ? 0.0 : (r > 255.0 ? 255.0 : r));
        }
    out.write(reinterpret_cast<const char*>(raw.data()),
              static_cast<std::streamsize>(raw.size()));
    if (!out) fail(ErrorCode::Io, path + ": write failed");
}

}  // namespace ekd
