#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "kappax/bootstrap.hpp"
#include "kappax/kappa.hpp"

namespace kappax {

/// Provenance entry for one input file.
struct InputDigest {
    std::string path;
    std::string digest; // fnv1a-64 of the file bytes, hex
};

/// 64-bit FNV-1a, rendered as 16 hex digits.
std::string fnv1a64_hex(std::string_view bytes);

/// Fixed-point table renderer: 3 decimals, NaN rendered literally.
std::string render_table(const std::string& method, const KappaReport& report,
                         const std::optional<BootstrapResult>& bootstrap);

/// Machine-readable report: full double precision, schema version 1,
/// NaN/undefined as null, input digests for provenance. Byte-deterministic
/// for identical inputs and seed.
std::string render_json(const std::string& method, const KappaReport& report,
                        const std::optional<BootstrapResult>& bootstrap,
                        const std::optional<BootstrapConfig>& bootstrap_config,
                        const std::map<std::string, InputDigest>& inputs);

} // namespace kappax
