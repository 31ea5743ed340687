#pragma once

#include <ellseg/grid.hpp>
#include <ellseg/soft_centers.hpp>

#include <filesystem>
#include <stdexcept>
#include <string>

namespace ellseg::io {

/// File missing or unreadable.
class ReadError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File readable but its content violates the expected format.
class SchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Reads an 8-bit single-channel PNG. Color or 16-bit files are a SchemaError.
GrayImage read_png(const std::filesystem::path& path);

/// Writes an 8-bit grayscale PNG through a temporary file and a rename.
void write_png(const std::filesystem::path& path, const GrayImage& image);

/// Writes `content` atomically (temporary file in the same directory, then rename).
void write_text(const std::filesystem::path& path, const std::string& content);

std::string read_text(const std::filesystem::path& path);

/// Sidecar of a tensor file: same path with a .json extension.
std::filesystem::path sidecar_path(const std::filesystem::path& tensor);

/// Reads a row-major 3 x H x W little-endian float32 tensor and its JSON
/// sidecar {width, height, channels}.
ProbMaps read_prob_maps(const std::filesystem::path& tensor);
void write_prob_maps(const std::filesystem::path& tensor, const ProbMaps& maps);

}  // namespace ellseg::io
