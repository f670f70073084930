#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "pwl/types.hpp"

namespace pwl {

// Shortest decimal that round-trips a double (17 significant digits).
std::string format_g17(Scalar v);

// Binary P6, 8-bit, byte-identical across platforms for identical input.
// Throws std::invalid_argument on empty grids, std::runtime_error on I/O.
void write_ppm(const std::string& path, int width, int height,
               const std::vector<std::array<std::uint8_t, 3>>& pixels);
std::vector<std::uint8_t> ppm_bytes(int width, int height,
                                    const std::vector<std::array<std::uint8_t, 3>>& pixels);

void write_text_file(const std::string& path, const std::string& text);

// FNV-1a 64-bit, used to pin golden image bytes in the regression suite.
std::uint64_t fnv1a64(const std::uint8_t* data, std::size_t n);

// Minimal CSV emitter; cells are written verbatim (no quoting needed for
// numeric payloads).
class CsvWriter {
 public:
  explicit CsvWriter(std::string path);
  void row(const std::vector<std::string>& cells);
  std::string str() const { return buf_; }
  void flush();  // writes the accumulated text to the path, throws on I/O error

 private:
  std::string path_;
  std::string buf_;
};

}  // namespace pwl
