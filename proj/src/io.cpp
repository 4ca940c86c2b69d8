#include "sentsim/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <vector>

namespace sentsim {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<long> parse_long(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<std::uint64_t> parse_u64(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace

int gray_value(PixelMapping mapping, double v, double vmax) {
  double c = 0.0;
  switch (mapping) {
    case PixelMapping::Sentiment:
      c = (1.0 - v) / 2.0 * 255.0;
      break;
    case PixelMapping::Kernel:
      if (vmax <= 0.0) return 255;
      c = (1.0 - v / vmax) * 255.0;
      break;
    case PixelMapping::DiffMap:
      c = (2.0 - v) / 4.0 * 255.0;
      break;
  }
  c = std::clamp(c, 0.0, 255.0);
  return static_cast<int>(std::llround(c));
}

std::string pgm_string(const Matrix& a, PixelMapping mapping) {
  if (a.empty()) throw IoError("pgm: array is empty");
  double vmax = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double v = a.data()[i];
    if (!std::isfinite(v)) throw IoError("pgm: non-finite value in array");
    if (mapping == PixelMapping::Kernel && v > vmax) vmax = v;
  }
  std::string out;
  out += "P2\n";
  out += std::to_string(a.cols()) + " " + std::to_string(a.rows()) + "\n";
  out += "255\n";
  for (int i = 0; i < a.rows(); ++i) {
    for (int x = 0; x < a.cols(); ++x) {
      if (x > 0) out += ' ';
      out += std::to_string(gray_value(mapping, a(i, x), vmax));
    }
    out += '\n';
  }
  return out;
}

void write_pgm(const Matrix& a, PixelMapping mapping, const std::filesystem::path& path) {
  write_text(path, pgm_string(a, mapping));
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw IoError("format_double: conversion failed");
  return std::string(buf, ptr);
}

std::string csv_string(const Matrix& a) {
  if (a.empty()) throw IoError("csv: array is empty");
  std::string out;
  for (int i = 0; i < a.rows(); ++i) {
    for (int x = 0; x < a.cols(); ++x) {
      if (x > 0) out += ',';
      out += format_double(a(i, x));
    }
    out += '\n';
  }
  return out;
}

void write_csv(const Matrix& a, const std::filesystem::path& path) {
  write_text(path, csv_string(a));
}

Matrix parse_csv(std::string_view text) {
  std::vector<std::vector<double>> rows;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    if (trim(line).empty() && pos >= text.size()) break;  // trailing newline

    std::vector<double> row;
    std::size_t start = 0;
    while (true) {
      std::size_t comma = line.find(',', start);
      const std::string_view cell = comma == std::string_view::npos
                                        ? line.substr(start)
                                        : line.substr(start, comma - start);
      const auto v = parse_double(cell);
      if (!v) {
        throw IoError("csv: cell " + std::to_string(row.size()) + " of row " +
                      std::to_string(rows.size()) + " is not a number: \"" +
                      std::string(trim(cell)) + "\"");
      }
      row.push_back(*v);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw IoError("csv: ragged rows (row " + std::to_string(rows.size()) + " has " +
                    std::to_string(row.size()) + " cells, expected " +
                    std::to_string(rows.front().size()) + ")");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw IoError("csv: file is empty");

  Matrix m(static_cast<int>(rows.size()), static_cast<int>(rows.front().size()));
  for (int i = 0; i < m.rows(); ++i) {
    for (int x = 0; x < m.cols(); ++x) {
      m(i, x) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(x)];
    }
  }
  return m;
}

Matrix read_csv(const std::filesystem::path& path) {
  try {
    return parse_csv(read_text(path));
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

SimConfig parse_config_text(std::string_view text) {
  SimConfig cfg;
  std::set<std::string> seen;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) {
      if (pos > text.size()) break;
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected \"key = value\", got \"" + std::string(line) + "\"");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (!seen.insert(key).second) {
      throw ConfigError("config line " + std::to_string(line_no) + ": duplicate key \"" +
                        key + "\"");
    }
    const auto bad_value = [&]() -> ConfigError {
      return ConfigError("config line " + std::to_string(line_no) + ": bad value \"" +
                         std::string(value) + "\" for key \"" + key + "\"");
    };

    if (key == "n") {
      const auto v = parse_long(value);
      if (!v || *v < 1) throw bad_value();
      cfg.n = static_cast<int>(*v);
    } else if (key == "extra") {
      const auto v = parse_long(value);
      if (!v || *v < 0) throw bad_value();
      cfg.extra = static_cast<int>(*v);
    } else if (key == "mu") {
      const auto v = parse_double(value);
      if (!v) throw bad_value();
      cfg.mu = *v;
    } else if (key == "sigma") {
      const auto v = parse_double(value);
      if (!v || !(*v > 0.0)) throw bad_value();
      cfg.sigma = *v;
    } else if (key == "dt") {
      if (value == "auto") {
        cfg.dt.reset();
      } else {
        const auto v = parse_double(value);
        if (!v || !(*v > 0.0)) throw bad_value();
        cfg.dt = *v;
      }
    } else if (key == "eps") {
      const auto v = parse_double(value);
      if (!v || !(*v > 0.0)) throw bad_value();
      cfg.eps = *v;
    } else if (key == "max_iters") {
      const auto v = parse_long(value);
      if (!v || *v < 1) throw bad_value();
      cfg.max_iters = *v;
    } else if (key == "sign") {
      if (value == "diffusive") cfg.sign = SignConvention::Diffusive;
      else if (value == "paper_literal") cfg.sign = SignConvention::PaperLiteral;
      else throw bad_value();
    } else if (key == "snapshot_every") {
      const auto v = parse_long(value);
      if (!v || *v < 0) throw bad_value();
      cfg.snapshot_every = *v;
    } else if (key == "seed_kernel") {
      const auto v = parse_u64(value);
      if (!v) throw bad_value();
      cfg.seed_kernel = *v;
    } else if (key == "seed_init") {
      const auto v = parse_u64(value);
      if (!v) throw bad_value();
      cfg.seed_init = *v;
    } else if (key == "symmetrize_offsets") {
      if (value == "true") cfg.symmetrize_offsets = true;
      else if (value == "false") cfg.symmetrize_offsets = false;
      else throw bad_value();
    } else {
      throw ConfigError("config line " + std::to_string(line_no) + ": unknown key \"" +
                        key + "\"");
    }
  }
  cfg.validate();
  return cfg;
}

SimConfig parse_config(const std::filesystem::path& path) {
  try {
    return parse_config_text(read_text(path));
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("read failed: " + path.string());
  return ss.str();
}

}  // namespace sentsim
