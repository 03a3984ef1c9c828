#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

namespace termrank {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed input file (carries a "file:line" style message).
struct ParseError : Error {
    using Error::Error;
};

/// Structurally valid input that violates a contract (span mismatch,
/// duplicate entry, missing coverage).
struct ValidationError : Error {
    using Error::Error;
};

/// Bad configuration or command usage. The CLI maps this to exit code 2.
struct ConfigError : Error {
    using Error::Error;
};

/// Formats a score with 6 significant digits, the precision used by all
/// ranking TSV output.
std::string format_score(double value);

/// FNV-1a 64-bit hash. Stable across platforms and runs, used for config
/// fingerprints in run manifests and for deriving per-document seeds.
std::uint64_t fnv1a64(std::string_view data);

/// Reads a whole file into a string. Throws Error if unreadable.
std::string read_file(const std::filesystem::path& path);

/// Writes content to path via a temporary file + rename so concurrent
/// readers never observe a partial file.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace termrank
