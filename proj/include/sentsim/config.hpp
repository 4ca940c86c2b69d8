#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace sentsim {

// Sign applied to the nonlocal term in the update rule. Diffusive smooths
// (the gradient-flow direction); PaperLiteral negates the interaction term,
// which sharpens differences instead and diverges for strong kernels.
enum class SignConvention { Diffusive, PaperLiteral };

inline std::string to_string(SignConvention s) {
  return s == SignConvention::Diffusive ? "diffusive" : "paper_literal";
}

// All run parameters. Field defaults are the documented defaults of the
// config file format; dt empty means "pick the stability-bounded step at run
// time", extra empty means n - 1.
struct SimConfig {
  std::optional<double> dt;
  double eps = 1e-3;
  long max_iters = 100000;
  SignConvention sign = SignConvention::Diffusive;
  long snapshot_every = 475;  // 0 disables periodic snapshots
  double mu = 1.0;
  double sigma = 1.7;
  int n = 16;
  std::optional<int> extra;
  std::uint64_t seed_kernel = 0;
  std::uint64_t seed_init = 0;
  bool symmetrize_offsets = false;

  int extra_value() const { return extra ? *extra : n - 1; }

  void validate() const {
    if (n < 1) throw std::invalid_argument("config: n must be >= 1");
    if (extra && *extra < 0) throw std::invalid_argument("config: extra must be >= 0");
    if (!(eps > 0.0)) throw std::invalid_argument("config: eps must be > 0");
    if (dt && !(*dt > 0.0)) throw std::invalid_argument("config: dt must be > 0");
    if (max_iters < 1) throw std::invalid_argument("config: max_iters must be >= 1");
    if (snapshot_every < 0) throw std::invalid_argument("config: snapshot_every must be >= 0");
    if (!(sigma > 0.0)) throw std::invalid_argument("config: sigma must be > 0");
  }
};

}  // namespace sentsim
