#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "sentsim/config.hpp"
#include "sentsim/matrix.hpp"

namespace sentsim {

struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Grayscale conventions of the figures: +1 "strongly agree" is black,
// -1 "strongly disagree" is white; kernels shade by magnitude relative to
// the array max (zeros white); difference maps put 0 at mid-gray, +2 black,
// -2 white.
enum class PixelMapping { Sentiment, Kernel, DiffMap };

// Pixel value in [0, 255]; rounding is half-away-from-zero. vmax is only
// consulted by the Kernel mapping (pass the array maximum).
int gray_value(PixelMapping mapping, double v, double vmax = 0.0);

// Plain-text PGM: "P2", dimensions, maxval 255, one image row per line with
// single spaces. Byte-deterministic for a given array and mapping.
std::string pgm_string(const Matrix& a, PixelMapping mapping);
void write_pgm(const Matrix& a, PixelMapping mapping, const std::filesystem::path& path);

// Shortest decimal form that round-trips to the same double.
std::string format_double(double v);

// CSV, one grid row per line; read(write(x)) is the identity bit for bit.
std::string csv_string(const Matrix& a);
void write_csv(const Matrix& a, const std::filesystem::path& path);
Matrix parse_csv(std::string_view text);
Matrix read_csv(const std::filesystem::path& path);

// Line-oriented "key = value" config. '#' starts a comment, blank lines are
// skipped, unknown or duplicate keys and unparsable values are errors.
// Recognized keys: n, extra, mu, sigma, dt, eps, max_iters, sign,
// snapshot_every, seed_kernel, seed_init, symmetrize_offsets.
SimConfig parse_config_text(std::string_view text);
SimConfig parse_config(const std::filesystem::path& path);

void write_text(const std::filesystem::path& path, std::string_view text);
std::string read_text(const std::filesystem::path& path);

}  // namespace sentsim
