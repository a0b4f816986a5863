#include "sgmsup/raster_io.hpp"

#include <png.h>

#include <bit>
#include <cctype>
#include <cmath>
#include <csetjmp>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "sgmsup/error.hpp"

namespace sgmsup {

namespace {

using Bytes = std::vector<unsigned char>;

Bytes slurp(const std::filesystem::path& path) {
  if (path.empty()) throw IoError("empty input path");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  Bytes data((std::istreambuf_iterator<char>(in)),
             std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failure on '" + path.string() + "'");
  return data;
}

void spill(const Bytes& header, const Bytes& payload,
           const std::filesystem::path& path) {
  if (path.empty()) throw IoError("empty output path");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(header.data()),
            static_cast<std::streamsize>(header.size()));
  out.write(reinterpret_cast<const char*>(payload.data()),
            static_cast<std::streamsize>(payload.size()));
  out.flush();
  if (!out) throw IoError("write failure on '" + path.string() + "'");
}

// Minimal tokenizer for the ASCII headers of PFM and PGM.
class HeaderReader {
 public:
  HeaderReader(const Bytes& data, std::string name)
      : data_(data), name_(std::move(name)) {}

  std::string token(bool allow_comments) {
    skip_space(allow_comments);
    std::string out;
    while (pos_ < data_.size() && !std::isspace(data_[pos_])) {
      out.push_back(static_cast<char>(data_[pos_++]));
    }
    if (out.empty()) fail("truncated header");
    return out;
  }

  long integer(bool allow_comments) {
    const std::string t = token(allow_comments);
    char* end = nullptr;
    const long v = std::strtol(t.c_str(), &end, 10);
    if (end != t.c_str() + t.size()) fail("expected an integer, got '" + t + "'");
    return v;
  }

  double real() {
    const std::string t = token(false);
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size()) fail("expected a number, got '" + t + "'");
    return v;
  }

  // Consumes the single whitespace byte that separates header and payload.
  std::size_t payload_offset() {
    if (pos_ >= data_.size() || !std::isspace(data_[pos_])) {
      fail("missing separator before payload");
    }
    return pos_ + 1;
  }

  [[noreturn]] void fail(const std::string& why) const {
    throw FormatError(name_ + ": " + why);
  }

 private:
  void skip_space(bool allow_comments) {
    while (pos_ < data_.size()) {
      if (std::isspace(data_[pos_])) {
        ++pos_;
      } else if (allow_comments && data_[pos_] == '#') {
        while (pos_ < data_.size() && data_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  const Bytes& data_;
  std::string name_;
  std::size_t pos_ = 0;
};

constexpr std::uint32_t kCanonicalNan = 0x7FC00000u;

std::uint32_t byteswap32(std::uint32_t v) {
  return ((v & 0xFFu) << 24) | ((v & 0xFF00u) << 8) | ((v >> 8) & 0xFF00u) |
         (v >> 24);
}

bool is_png(const Bytes& data) {
  return data.size() >= 8 && png_sig_cmp(data.data(), 0, 8) == 0;
}

// ---- PNG via the classic libpng API. setjmp-based error handling means no
// object with a destructor may be created between setjmp and longjmp, so all
// state lives in these plain structs owned by the caller.

struct PngDecoded {
  int width = 0;
  int height = 0;
  int bit_depth = 0;
  int channels = 0;
  Bytes pixels;  // host-order samples, row-major
  std::string error;
};

struct MemoryReader {
  const Bytes* data;
  std::size_t pos;
};

void png_read_from_memory(png_structp png, png_bytep out, png_size_t n) {
  auto* src = static_cast<MemoryReader*>(png_get_io_ptr(png));
  if (src->pos + n > src->data->size()) {
    png_error(png, "unexpected end of PNG data");
  }
  std::memcpy(out, src->data->data() + src->pos, n);
  src->pos += n;
}

void png_error_to_jmp(png_structp png, png_const_charp msg) {
  auto* err = static_cast<std::string*>(png_get_error_ptr(png));
  if (err) *err = msg;
  png_longjmp(png, 1);
}

void png_warning_ignore(png_structp, png_const_charp) {}

bool decode_png(const Bytes& data, PngDecoded& out) {
  MemoryReader reader{&data, 0};
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &out.error,
                                           png_error_to_jmp, png_warning_ignore);
  if (!png) {
    out.error = "png_create_read_struct failed";
    return false;
  }
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    out.error = "png_create_info_struct failed";
    return false;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    return false;
  }
  png_set_read_fn(png, &reader, png_read_from_memory);
  png_read_info(png, info);
  out.width = static_cast<int>(png_get_image_width(png, info));
  out.height = static_cast<int>(png_get_image_height(png, info));
  out.bit_depth = png_get_bit_depth(png, info);
  const int color = png_get_color_type(png, info);
  out.channels = png_get_channels(png, info);
  if (color != PNG_COLOR_TYPE_GRAY) {
    if (out.channels < 2) out.channels = color == PNG_COLOR_TYPE_PALETTE ? 3 : 2;
    png_destroy_read_struct(&png, &info, nullptr);
    out.error = "multi-band";
    return false;
  }
  if (out.bit_depth == 16 && std::endian::native == std::endian::little) {
    png_set_swap(png);
  }
  png_read_update_info(png, info);
  const png_size_t rowbytes = png_get_rowbytes(png, info);
  out.pixels.resize(rowbytes * static_cast<std::size_t>(out.height));
  for (int y = 0; y < out.height; ++y) {
    png_read_row(png, out.pixels.data() + rowbytes * y, nullptr);
  }
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return true;
}

struct PngEncoded {
  Bytes bytes;
  std::string error;
};

void png_write_to_memory(png_structp png, png_bytep in, png_size_t n) {
  auto* dst = static_cast<PngEncoded*>(png_get_io_ptr(png));
  dst->bytes.insert(dst->bytes.end(), in, in + n);
}

void png_flush_noop(png_structp) {}

// `pixels` holds host-order samples of `bit_depth` bits, one band.
bool encode_png(int width, int height, int bit_depth, const Bytes& pixels,
                PngEncoded& out) {
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &out.error,
                                            png_error_to_jmp, png_warning_ignore);
  if (!png) {
    out.error = "png_create_write_struct failed";
    return false;
  }
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    out.error = "png_create_info_struct failed";
    return false;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    return false;
  }
  png_set_write_fn(png, &out, png_write_to_memory, png_flush_noop);
  png_set_IHDR(png, info, static_cast<png_uint_32>(width),
               static_cast<png_uint_32>(height), bit_depth, PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  if (bit_depth == 16 && std::endian::native == std::endian::little) {
    png_set_swap(png);
  }
  const std::size_t rowbytes =
      static_cast<std::size_t>(width) * (bit_depth == 16 ? 2 : 1);
  for (int y = 0; y < height; ++y) {
    png_write_row(png, pixels.data() + rowbytes * y);
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return true;
}

GrayImage read_png_gray(const Bytes& data, const std::string& name) {
  PngDecoded dec;
  if (!decode_png(data, dec)) {
    if (dec.error == "multi-band") {
      throw FormatError(name + ": expected a single-band image, found " +
                        std::to_string(dec.channels) + " bands");
    }
    throw FormatError(name + ": " + dec.error);
  }
  if (dec.bit_depth != 8 && dec.bit_depth != 16) {
    throw FormatError(name + ": unsupported PNG bit depth " +
                      std::to_string(dec.bit_depth));
  }
  GrayImage img(dec.width, dec.height);
  for (std::size_t i = 0; i < img.size(); ++i) {
    if (dec.bit_depth == 8) {
      img.samples[i] = dec.pixels[i];
    } else {
      std::uint16_t v;
      std::memcpy(&v, dec.pixels.data() + 2 * i, 2);
      img.samples[i] = v;
    }
  }
  return img;
}

GrayImage read_pgm_gray(const Bytes& data, const std::string& name) {
  HeaderReader hdr(data, name);
  const long w = hdr.integer(true);
  const long h = hdr.integer(true);
  const long maxval = hdr.integer(true);
  if (w < 1 || h < 1 || w > (1L << 20) || h > (1L << 20)) {
    hdr.fail("invalid dimensions");
  }
  if (maxval < 1 || maxval > 65535) hdr.fail("invalid maxval");
  const std::size_t offset = hdr.payload_offset();
  const std::size_t n = static_cast<std::size_t>(w) * h;
  const std::size_t bps = maxval < 256 ? 1 : 2;
  if (data.size() - offset != n * bps) {
    hdr.fail("sample count mismatch: expected " + std::to_string(n * bps) +
             " payload bytes, found " + std::to_string(data.size() - offset));
  }
  GrayImage img(static_cast<int>(w), static_cast<int>(h));
  const unsigned char* p = data.data() + offset;
  for (std::size_t i = 0; i < n; ++i) {
    img.samples[i] =
        bps == 1 ? p[i] : static_cast<float>((p[2 * i] << 8) | p[2 * i + 1]);
  }
  return img;
}

int required_bit_depth(const std::vector<float>& samples, const char* what) {
  int depth = 8;
  for (float v : samples) {
    if (!(v >= 0.0f) || v > 65535.0f || v != std::floor(v)) {
      throw InvalidArgument(std::string(what) +
                            ": samples must be integral values in [0, 65535]");
    }
    if (v > 255.0f) depth = 16;
  }
  return depth;
}

bool has_png_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  for (auto& c : ext) c = static_cast<char>(std::tolower(c));
  return ext == ".png";
}

void write_png(int width, int height, int bit_depth, const Bytes& pixels,
               const std::filesystem::path& path) {
  if (path.empty()) throw IoError("empty output path");
  PngEncoded enc;
  if (!encode_png(width, height, bit_depth, pixels, enc)) {
    throw IoError(path.string() + ": PNG encoding failed: " + enc.error);
  }
  spill({}, enc.bytes, path);
}

}  // namespace

FloatRaster read_pfm(const std::filesystem::path& path) {
  const Bytes data = slurp(path);
  const std::string name = path.string();
  HeaderReader hdr(data, name);
  const std::string magic = hdr.token(false);
  if (magic == "PF") {
    throw FormatError(name + ": color (3-band) PFM is not supported");
  }
  if (magic != "Pf") hdr.fail("not a grayscale PFM (magic '" + magic + "')");
  const long w = hdr.integer(false);
  const long h = hdr.integer(false);
  if (w < 1 || h < 1 || w > (1L << 20) || h > (1L << 20)) {
    hdr.fail("invalid dimensions");
  }
  const double scale = hdr.real();
  if (!std::isfinite(scale) || scale == 0.0) hdr.fail("invalid scale");
  const std::size_t offset = hdr.payload_offset();
  const std::size_t n = static_cast<std::size_t>(w) * h;
  if ((data.size() - offset) % 4 != 0 || (data.size() - offset) / 4 != n) {
    hdr.fail("sample count mismatch: header declares " + std::to_string(n) +
             " samples, payload holds " +
             std::to_string((data.size() - offset) / 4.0));
  }
  const bool file_le = scale < 0.0;
  const bool swap = file_le != (std::endian::native == std::endian::little);

  FloatRaster out(static_cast<int>(w), static_cast<int>(h));
  const unsigned char* p = data.data() + offset;
  for (long fy = 0; fy < h; ++fy) {
    const long y = h - 1 - fy;
    for (long x = 0; x < w; ++x) {
      std::uint32_t bits;
      std::memcpy(&bits, p + 4 * (static_cast<std::size_t>(fy) * w + x), 4);
      if (swap) bits = byteswap32(bits);
      const float v = std::bit_cast<float>(bits);
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      if (std::isnan(v)) {
        out.invalidate(i);
      } else if (std::isinf(v)) {
        hdr.fail("infinite sample at (" + std::to_string(x) + ", " +
                 std::to_string(y) + ")");
      } else {
        out.set(i, v);
      }
    }
  }
  return out;
}

void write_pfm(const FloatRaster& raster, const std::filesystem::path& path) {
  raster.validate();
  if (path.empty()) throw IoError("empty output path");
  const std::string head = "Pf\n" + std::to_string(raster.width) + " " +
                           std::to_string(raster.height) + "\n-1.0\n";
  const Bytes header(head.begin(), head.end());
  Bytes payload(raster.size() * 4);
  const bool swap = std::endian::native != std::endian::little;
  std::size_t o = 0;
  for (int y = raster.height - 1; y >= 0; --y) {
    for (int x = 0; x < raster.width; ++x) {
      const std::size_t i = raster.index(x, y);
      std::uint32_t bits = raster.is_valid(i)
                               ? std::bit_cast<std::uint32_t>(raster.samples[i])
                               : kCanonicalNan;
      if (swap) bits = byteswap32(bits);
      std::memcpy(payload.data() + o, &bits, 4);
      o += 4;
    }
  }
  spill(header, payload, path);
}

GrayImage read_gray(const std::filesystem::path& path) {
  const Bytes data = slurp(path);
  const std::string name = path.string();
  if (is_png(data)) return read_png_gray(data, name);
  if (data.size() >= 2 && data[0] == 'P') {
    switch (data[1]) {
      case '5': {
        Bytes rest(data.begin() + 2, data.end());
        return read_pgm_gray(rest, name);
      }
      case '6':
      case '3':
        throw FormatError(name + ": expected a single-band image, found 3 bands");
      default:
        break;
    }
  }
  throw FormatError(name + ": unknown image magic");
}

void write_gray(const GrayImage& image, const std::filesystem::path& path) {
  image.validate();
  const int depth = required_bit_depth(image.samples, "write_gray");
  const std::size_t bps = depth == 16 ? 2 : 1;
  Bytes pixels(image.size() * bps);
  if (has_png_extension(path)) {
    for (std::size_t i = 0; i < image.size(); ++i) {
      if (bps == 1) {
        pixels[i] = static_cast<unsigned char>(image.samples[i]);
      } else {
        const auto v = static_cast<std::uint16_t>(image.samples[i]);
        std::memcpy(pixels.data() + 2 * i, &v, 2);
      }
    }
    write_png(image.width, image.height, depth, pixels, path);
    return;
  }
  const std::string head = "P5\n" + std::to_string(image.width) + " " +
                           std::to_string(image.height) + "\n" +
                           (depth == 16 ? "65535" : "255") + "\n";
  for (std::size_t i = 0; i < image.size(); ++i) {
    const auto v = static_cast<std::uint16_t>(image.samples[i]);
    if (bps == 1) {
      pixels[i] = static_cast<unsigned char>(v);
    } else {
      pixels[2 * i] = static_cast<unsigned char>(v >> 8);
      pixels[2 * i + 1] = static_cast<unsigned char>(v & 0xFF);
    }
  }
  spill(Bytes(head.begin(), head.end()), pixels, path);
}

void write_mask(const ConfidenceMask& mask, const std::filesystem::path& path) {
  if (mask.width < 1 || mask.height < 1 ||
      mask.bits.size() != static_cast<std::size_t>(mask.width) * mask.height) {
    throw InvalidArgument("write_mask: malformed mask");
  }
  Bytes pixels(mask.size());
  for (std::size_t i = 0; i < mask.size(); ++i) {
    pixels[i] = mask.bits[i] ? 255 : 0;
  }
  write_png(mask.width, mask.height, 8, pixels, path);
}

ConfidenceMask read_mask(const std::filesystem::path& path, MaskKind kind) {
  const GrayImage img = read_gray(path);
  ConfidenceMask mask(img.width, img.height, false, kind);
  for (std::size_t i = 0; i < img.size(); ++i) {
    mask.bits[i] = img.samples[i] != 0.0f ? 1 : 0;
  }
  return mask;
}

}  // namespace sgmsup
