#include "mfd/image_io.hpp"

#include "mfd/error.hpp"

#include <png.h>

#include <cctype>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>

namespace mfd {

namespace {

// --- PGM (P5) ---

int pgm_next_token(std::istream& in, std::string& tok) {
    tok.clear();
    int c = in.get();
    while (c != EOF) {
        if (c == '#') {  // comment runs to end of line
            while (c != EOF && c != '\n') c = in.get();
        } else if (std::isspace(c)) {
            c = in.get();
        } else {
            break;
        }
    }
    if (c == EOF) return -1;
    while (c != EOF && !std::isspace(c) && c != '#') {
        tok.push_back(static_cast<char>(c));
        c = in.get();
    }
    if (c == '#') in.unget();
    return 0;
}

uint64_t pgm_parse_uint(std::istream& in, const std::filesystem::path& path) {
    std::string tok;
    if (pgm_next_token(in, tok) != 0 || tok.empty())
        fail("DecodeError", "truncated PGM header in " + path.string());
    uint64_t v = 0;
    for (char ch : tok) {
        if (!std::isdigit(static_cast<unsigned char>(ch)))
            fail("DecodeError", "bad PGM header field '" + tok + "' in " + path.string());
        v = v * 10 + static_cast<uint64_t>(ch - '0');
        if (v > (1ull << 32)) fail("DecodeError", "PGM header field overflow in " + path.string());
    }
    return v;
}

GrayImage decode_pgm(std::istream& in, const std::filesystem::path& path) {
    char magic[2];
    in.read(magic, 2);
    if (!in || magic[0] != 'P' || magic[1] != '5')
        fail("DecodeError", "not a binary PGM (P5): " + path.string());

    const uint64_t w = pgm_parse_uint(in, path);
    const uint64_t h = pgm_parse_uint(in, path);
    const uint64_t maxval = pgm_parse_uint(in, path);
    if (w == 0 || h == 0)
        fail("DecodeError", "zero-sized PGM: " + path.string());
    if (maxval == 0 || maxval > 255)
        fail("DecodeError", "unsupported PGM maxval " + std::to_string(maxval) +
                                " (expected <= 255): " + path.string());
    // exactly one whitespace byte separates the header from the raster
    const int sep = in.get();
    if (sep == EOF || !std::isspace(sep))
        fail("DecodeError", "missing raster separator in " + path.string());

    GrayImage img;
    img.width = static_cast<uint32_t>(w);
    img.height = static_cast<uint32_t>(h);
    img.pixels.resize(w * h);
    in.read(reinterpret_cast<char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size()));
    if (static_cast<size_t>(in.gcount()) != img.pixels.size())
        fail("DecodeError", "truncated PGM raster in " + path.string());
    return img;
}

// --- PNG ---

struct PngReadCtx {
    png_structp png = nullptr;
    png_infop info = nullptr;
    FILE* fp = nullptr;
    ~PngReadCtx() {
        if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
        if (fp) std::fclose(fp);
    }
};

GrayImage decode_png(const std::filesystem::path& path) {
    PngReadCtx ctx;
    ctx.fp = std::fopen(path.string().c_str(), "rb");
    if (!ctx.fp) fail("IoError", "cannot open " + path.string());

    ctx.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!ctx.png) fail("DecodeError", "libpng init failed");
    ctx.info = png_create_info_struct(ctx.png);
    if (!ctx.info) fail("DecodeError", "libpng init failed");

    if (setjmp(png_jmpbuf(ctx.png)))
        fail("DecodeError", "malformed PNG: " + path.string());

    png_init_io(ctx.png, ctx.fp);
    png_read_info(ctx.png, ctx.info);

    const png_byte color = png_get_color_type(ctx.png, ctx.info);
    const png_byte depth = png_get_bit_depth(ctx.png, ctx.info);

    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(ctx.png);
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(ctx.png);
    if (depth == 16) png_set_strip_16(ctx.png);
    if (color & PNG_COLOR_MASK_COLOR || color == PNG_COLOR_TYPE_PALETTE)
        png_set_rgb_to_gray_fixed(ctx.png, 1 /* silent */, -1, -1);
    if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(ctx.png);
    if (png_get_valid(ctx.png, ctx.info, PNG_INFO_tRNS)) png_set_strip_alpha(ctx.png);

    png_read_update_info(ctx.png, ctx.info);
    if (png_get_channels(ctx.png, ctx.info) != 1 || png_get_bit_depth(ctx.png, ctx.info) != 8)
        fail("DecodeError", "PNG did not reduce to 8-bit gray: " + path.string());

    GrayImage img;
    img.width = png_get_image_width(ctx.png, ctx.info);
    img.height = png_get_image_height(ctx.png, ctx.info);
    if (img.width == 0 || img.height == 0)
        fail("DecodeError", "zero-sized PNG: " + path.string());
    img.pixels.resize(static_cast<size_t>(img.width) * img.height);

    std::vector<png_bytep> rows(img.height);
    for (uint32_t y = 0; y < img.height; ++y)
        rows[y] = img.pixels.data() + static_cast<size_t>(y) * img.width;
    png_read_image(ctx.png, rows.data());
    png_read_end(ctx.png, nullptr);
    return img;
}

} // namespace

GrayImage decode_gray_image(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("IoError", "cannot open " + path.string());

    unsigned char magic[8] = {0};
    in.read(reinterpret_cast<char*>(magic), 8);
    const auto got = in.gcount();
    in.clear();
    in.seekg(0);

    static const unsigned char png_sig[8] = {0x89, 'P', 'N', 'G', 0x0d, 0x0a, 0x1a, 0x0a};
    if (got >= 8 && std::memcmp(magic, png_sig, 8) == 0) {
        in.close();
        return decode_png(path);
    }
    if (got >= 2 && magic[0] == 'P' && magic[1] == '5') return decode_pgm(in, path);
    fail("DecodeError", "unrecognized frame format (want PGM P5 or PNG): " + path.string());
}

void write_pgm(const GrayImage& img, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail("IoError", "cannot open " + path.string() + " for writing");
    out << "P5\n" << img.width << " " << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.pixels.data()),
              static_cast<std::streamsize>(img.pixels.size()));
    if (!out) fail("IoError", "short write to " + path.string());
}

void write_gray_png(const GrayImage& img, const std::filesystem::path& path) {
    FILE* fp = std::fopen(path.string().c_str(), "wb");
    if (!fp) fail("IoError", "cannot open " + path.string() + " for writing");

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
        std::fclose(fp);
        fail("DecodeError", "libpng init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        std::fclose(fp);
        fail("IoError", "PNG write failed: " + path.string());
    }

    png_init_io(png, fp);
    png_set_IHDR(png, info, img.width, img.height, 8, PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (uint32_t y = 0; y < img.height; ++y)
        png_write_row(png, const_cast<png_bytep>(img.pixels.data() + static_cast<size_t>(y) * img.width));
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
}

} // namespace mfd
