#include "pwl/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace pwl {

std::string format_g17(Scalar v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::uint8_t> ppm_bytes(int width, int height,
                                    const std::vector<std::array<std::uint8_t, 3>>& pixels) {
  if (width <= 0 || height <= 0)
    throw std::invalid_argument("ppm: empty grid");
  if (pixels.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
    throw std::invalid_argument("ppm: pixel count does not match dimensions");
  std::string header = "P6\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(out.size() + pixels.size() * 3);
  for (const auto& px : pixels) {
    out.push_back(px[0]);
    out.push_back(px[1]);
    out.push_back(px[2]);
  }
  return out;
}

void write_ppm(const std::string& path, int width, int height,
               const std::vector<std::array<std::uint8_t, 3>>& pixels) {
  const std::vector<std::uint8_t> bytes = ppm_bytes(width, height, pixels);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw std::runtime_error("write failed: " + path);
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!f) throw std::runtime_error("write failed: " + path);
}

std::uint64_t fnv1a64(const std::uint8_t* data, std::size_t n) {
  std::uint64_t h = 14695981039346656037ull;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= data[i];
    h *= 1099511628211ull;
  }
  return h;
}

CsvWriter::CsvWriter(std::string path) : path_(std::move(path)) {}

void CsvWriter::row(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) buf_ += ',';
    buf_ += cells[i];
  }
  buf_ += '\n';
}

void CsvWriter::flush() {
  write_text_file(path_, buf_);
}

}  // namespace pwl
