#include "featkit/image_io.hpp"

#include <cctype>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <vector>

#ifdef FEATKIT_WITH_PNG
#include <png.h>
#endif

namespace featkit {

namespace {

[[noreturn]] void io_fail(const std::string& path, long offset,
                          const std::string& reason) {
    raise(ErrorCode::io,
          path + ": offset " + std::to_string(offset) + ": " + reason);
}

// next token after whitespace/comments, tracking stream offset for messages
std::string pgm_token(std::istream& in, const std::string& path) {
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {}
        } else if (!std::isspace(c)) {
            break;
        }
    }
    if (c == EOF)
        io_fail(path, static_cast<long>(in.tellg()), "unexpected end of header");
    std::string tok;
    tok.push_back(static_cast<char>(c));
    while ((c = in.get()) != EOF && !std::isspace(c))
        tok.push_back(static_cast<char>(c));
    return tok;
}

long parse_pgm_int(const std::string& tok, std::istream& in,
                   const std::string& path, const char* what) {
    try {
        size_t pos = 0;
        long v = std::stol(tok, &pos);
        if (pos != tok.size())
            throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        io_fail(path, static_cast<long>(in.tellg()),
                std::string("bad ") + what + " '" + tok + "'");
    }
}

#ifdef FEATKIT_WITH_PNG
GrayImage load_png(const std::string& path) {
    png_image img;
    std::memset(&img, 0, sizeof img);
    img.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&img, path.c_str()))
        raise(ErrorCode::io, path + ": offset 0: " + img.message);
    img.format = PNG_FORMAT_RGB;
    std::vector<uint8_t> buf(PNG_IMAGE_SIZE(img));
    if (!png_image_finish_read(&img, nullptr, buf.data(), 0, nullptr)) {
        std::string msg = img.message;
        png_image_free(&img);
        raise(ErrorCode::io, path + ": offset 0: " + msg);
    }
    GrayImage out(static_cast<int>(img.width), static_cast<int>(img.height));
    const uint8_t* p = buf.data();
    for (int y = 0; y < out.height(); ++y)
        for (int x = 0; x < out.width(); ++x, p += 3)
            out.at(x, y) = 0.299f * p[0] + 0.587f * p[1] + 0.114f * p[2];
    return out;
}
#endif

} // namespace

GrayImage load_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        raise(ErrorCode::io, path + ": offset 0: cannot open file");
    std::string magic = pgm_token(in, path);
    if (magic != "P5")
        io_fail(path, 0, "magic '" + magic + "' is not P5");
    long w = parse_pgm_int(pgm_token(in, path), in, path, "width");
    long h = parse_pgm_int(pgm_token(in, path), in, path, "height");
    long maxval = parse_pgm_int(pgm_token(in, path), in, path, "maxval");
    if (w <= 0 || h <= 0)
        io_fail(path, static_cast<long>(in.tellg()), "non-positive dimensions");
    if (maxval <= 0 || maxval > 255)
        io_fail(path, static_cast<long>(in.tellg()),
                "maxval " + std::to_string(maxval) + " unsupported (need 1..255)");
    // header ends with exactly one whitespace byte, already consumed by the
    // token reader
    long data_at = static_cast<long>(in.tellg());
    std::vector<uint8_t> raw(static_cast<size_t>(w) * h);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (static_cast<size_t>(in.gcount()) != raw.size())
        io_fail(path, data_at + in.gcount(),
                "truncated pixel data (expected " + std::to_string(raw.size()) +
                    " bytes, got " + std::to_string(in.gcount()) + ")");
    GrayImage out(static_cast<int>(w), static_cast<int>(h));
    float scale = 255.f / static_cast<float>(maxval);
    float* dst = out.data();
    for (size_t i = 0; i < raw.size(); ++i)
        dst[i] = raw[i] * scale;
    return out;
}

void save_pgm(const std::string& path, const GrayImage& img) {
    if (img.empty())
        raise(ErrorCode::invalid_parameter, "refusing to save empty image");
    std::ofstream out(path, std::ios::binary);
    if (!out)
        raise(ErrorCode::io, path + ": offset 0: cannot open for writing");
    out << "P5\n" << img.width() << " " << img.height() << "\n255\n";
    std::vector<uint8_t> raw(static_cast<size_t>(img.width()) * img.height());
    const float* src = img.data();
    for (size_t i = 0; i < raw.size(); ++i) {
        float v = src[i];
        if (v < 0.f) v = 0.f;
        if (v > 255.f) v = 255.f;
        raw[i] = static_cast<uint8_t>(v + 0.5f);
    }
    out.write(reinterpret_cast<const char*>(raw.data()),
              static_cast<std::streamsize>(raw.size()));
    if (!out)
        raise(ErrorCode::io, path + ": write failed");
}

bool png_supported() {
#ifdef FEATKIT_WITH_PNG
    return true;
#else
    return false;
#endif
}

GrayImage load_image(const std::string& path) {
    std::ifstream probe(path, std::ios::binary);
    if (!probe)
        raise(ErrorCode::io, path + ": offset 0: cannot open file");
    char magic[4] = {0, 0, 0, 0};
    probe.read(magic, 4);
    probe.close();
    if (magic[0] == 'P' && magic[1] == '5')
        return load_pgm(path);
    if (static_cast<uint8_t>(magic[0]) == 0x89 && magic[1] == 'P' &&
        magic[2] == 'N' && magic[3] == 'G') {
#ifdef FEATKIT_WITH_PNG
        return load_png(path);
#else
        raise(ErrorCode::io, path + ": offset 0: PNG support not compiled in");
#endif
    }
    raise(ErrorCode::io, path + ": offset 0: unrecognized image format");
}

} // namespace featkit
