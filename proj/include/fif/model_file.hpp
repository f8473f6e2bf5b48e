#pragma once

// Versioned JSON model files. Writing is deterministic: the same model
// always serialises to the same bytes, and read -> write is lossless.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fif/datasets.hpp"
#include "fif/ifs_core.hpp"
#include "fif/quadratic.hpp"

namespace fif {

inline constexpr std::string_view kToolVersion = "0.1.0";
inline constexpr std::string_view kSchemaVersion = "1";

struct Provenance {
  std::string input_sha256;
  std::optional<std::uint64_t> seed;
  std::string tool_version{kToolVersion};

  bool operator==(const Provenance&) const = default;
};

struct FractalFit {
  FifModel model;
  std::vector<bool> clamped;
  std::vector<bool> degenerate;
};

struct ModelFile {
  std::variant<FractalFit, QuadModel> model;
  NormalizationParams normalization;
  Provenance provenance;

  bool is_fractal() const { return std::holds_alternative<FractalFit>(model); }
  const Knots& knots() const;
};

std::string to_json(const ModelFile& file);

/// Throws fif::Error(schema) on unknown schema versions or inconsistent
/// content, fif::Error(data) on malformed JSON.
ModelFile model_from_json(std::string_view text);

/// Lower-case hex SHA-256 of `bytes`.
std::string sha256_hex(std::string_view bytes);

}  // namespace fif
