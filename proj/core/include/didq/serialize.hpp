#pragma once

// JSON and CSV persistence for channels, packings and codes. All JSON is
// exchanged as text so the parser stays an implementation detail.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "didq/codes.hpp"
#include "didq/geometry.hpp"
#include "didq/verify.hpp"

namespace didq {

inline constexpr const char* kArtifactVersion = "0.1.0";

/// Channel description. Parametrized families are written as
/// {"family": ..., <parameters>}; finite tables as {"dim": d, "states":
/// [[[re, im], ...], ...]} (rows of each state), which is also the channel
/// file format. Measured channels cannot be serialized.
std::string channel_to_json(const CqChannel& channel);
/// Accepts both forms above. Throws ValidationError naming the offending
/// state / row / entry on malformed input or invalid states.
CqChannel channel_from_json(std::string_view text);

std::string letter_to_json(const Letter& letter);

struct Provenance {
    std::string config_hash;
    std::uint64_t seed = 0;
    std::string version = kArtifactVersion;
};

/// {"metric", "delta", "scale", "letters": [...], "provenance"}
std::string packing_to_json(const Packing& packing, const Provenance& provenance);

struct StoredCode {
    DICode code;
    std::optional<ErrorReport> measured;
    Provenance provenance;
};

/// Codewords are stored as index lists into "alphabet", the list of letters.
std::string code_to_json(const DICode& code, const std::optional<ErrorReport>& measured,
                         const Provenance& provenance);
StoredCode code_from_json(std::string_view text);

/// 64-bit FNV-1a, as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view bytes);

/// %.17g, with "inf", "-inf" and "nan" for non-finite values.
std::string format_real(double x);

/// Comma-joined fields with a trailing newline; fields containing a comma or
/// quote are quoted.
std::string csv_row(const std::vector<std::string>& fields);

/// Writes to a sibling temporary file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, std::string_view contents);
/// Throws ValidationError if the file cannot be read.
std::string read_file(const std::filesystem::path& path);

} // namespace didq
